#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "shadowtouch/config.hpp"

namespace shadowtouch {

struct SweepOptions {
    std::vector<double> heights_mm{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    int traces_per_height = 200; // per class (hover and contact)
    int trace_frames = 60;
    int warmup_frames = 10;
};

struct SweepMethodResult {
    std::vector<double> accuracy; // parallel to heights
    std::optional<double> minimal_separable_mm;
    int monotonicity_violations = 0;
};

struct SweepResult {
    std::vector<double> heights_mm;
    SweepMethodResult shadow;
    SweepMethodResult finger_only;
    long long frames_scored = 0;
    int warmup_frames = 0;
};

/// Simulated hover-resolution comparison. For each height h a balanced
/// corpus of steady-state traces is generated: traces_per_height traces
/// hovering at h and the same number resting in contact, each rendered and
/// sensed like any other trace. Every frame after the warmup prefix is
/// classified hover-vs-contact and scored against ground truth.
///
/// "shadow" feeds the measured finger-to-shadow gap through the contact
/// detector. "finger_only" is the best monocular cue without shadows: the
/// fingertip's apparent lateral parallax displacement from the known contact
/// anchor, fed through the same detector. Using the ground-truth anchor
/// favors this baseline, so the shadow method's advantage is conservative.
///
/// Minimal separable height = smallest tested h with accuracy >= 0.99;
/// absent when no tested height qualifies.
SweepResult hover_resolution_sweep(const PipelineConfig& config, const SweepOptions& options);

void write_sweep_report(std::ostream& out, const SweepResult& result);

} // namespace shadowtouch
