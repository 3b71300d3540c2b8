#pragma once

#include <stdexcept>
#include <string>

namespace shadowtouch {

/// Invalid geometric configuration (degenerate light/camera, tip out of range).
struct GeometryError : std::runtime_error {
    explicit GeometryError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid configuration file or parameter set. CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed data file (trace, frame, events). CLI maps this to exit code 3.
struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace shadowtouch
