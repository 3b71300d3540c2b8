#pragma once

#include <cstdint>
#include <iosfwd>

#include "shadowtouch/gesture.hpp"
#include "shadowtouch/render.hpp"
#include "shadowtouch/segment.hpp"
#include "shadowtouch/touchfsm.hpp"

namespace shadowtouch {

/// Every tunable of the sensing pipeline in one place. The flat key=value
/// file format covers exactly these fields; unknown keys are rejected.
struct PipelineConfig {
    SceneConfig scene;
    NoiseModel noise;
    SegmentationThresholds segmentation;
    TouchParams touch;
    GestureParams gesture;
    double frame_period_ms = 10.0;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Parses "key = value" lines ('#' comments, blank lines allowed) over the
/// defaults. Unknown or duplicate keys and bad values throw ConfigError with
/// the offending line number.
PipelineConfig parse_config(std::istream& in);

PipelineConfig load_config_file(const std::string& path);

/// Canonical serialization; parse_config(serialize_config(c)) == c.
void serialize_config(std::ostream& out, const PipelineConfig& config);

} // namespace shadowtouch
