#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "shadowtouch/geometry.hpp"

namespace shadowtouch {

/// Fingers are modeled as capsules lying along +y (pointing away from the
/// user), tip at the distal end. Units mm, timestamps ms.
inline constexpr double kFingerLengthMm = 40.0;
inline constexpr double kFingerRadiusMm = 6.0;
inline constexpr double kContactEpsMm = 0.1;
inline constexpr int kMaxFingers = 3;

inline constexpr int kFingerThumb = 0;
inline constexpr int kFingerIndex = 1;
inline constexpr int kFingerMiddle = 2;

struct FingerSample {
    int finger_id = kFingerIndex;
    Vec3 tip;
    bool contact = false;
};

struct HandTraceRecord {
    double t_ms = 0.0;
    std::vector<FingerSample> fingers;
};

struct TraceFile {
    std::string label = "trace";
    double frame_period_ms = 10.0;
    std::vector<HandTraceRecord> records;
};

/// Text format: '#' header lines carrying label and frame period, then one
/// line per frame. Each line repeats the group
///   t_ms finger_id tip_x tip_y tip_z contact
/// once per finger; t_ms is identical across groups of a line.
void write_trace(std::ostream& out, const TraceFile& trace);

/// Throws DataError with a line number on malformed input.
TraceFile read_trace(std::istream& in);

} // namespace shadowtouch
