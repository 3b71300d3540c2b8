#pragma once

#include <string>

#include "shadowtouch/render.hpp"

namespace shadowtouch {

/// Binary PGM (P5, maxval 255). The frame timestamp rides in a
/// "# t_ms=<value>" comment; readers fall back to NaN when absent.
void write_pgm(const std::string& path, const Frame& frame);

Frame read_pgm(const std::string& path);

/// Zero-padded frame filename, e.g. frame_000042.pgm.
std::string frame_filename(int index);

} // namespace shadowtouch
