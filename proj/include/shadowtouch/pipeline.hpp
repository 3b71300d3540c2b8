#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "shadowtouch/config.hpp"
#include "shadowtouch/metrics.hpp"
#include "shadowtouch/observe.hpp"
#include "shadowtouch/script.hpp"

namespace shadowtouch {

/// Gap samples for one tracked finger, aligned to trace frames starting at
/// first_frame.
struct TrackedTimeline {
    int track_id = 0;
    int first_frame = 0;
    std::vector<GapSample> samples;
};

struct TraceRun {
    std::vector<HandTraceRecord> records;
    std::vector<std::vector<FingerObservation>> frames;
    std::vector<TrackedTimeline> timelines;
    std::vector<std::vector<bool>> contact; // parallel to timelines
    std::vector<TouchEvent> events;         // finger_id = track id
    std::vector<GestureEvent> gestures;
};

/// Runs synth -> render -> sense -> contact FSM -> gestures for one script.
/// When frame_sink is set every frame is fully rendered (noise included) and
/// handed over, and sensing consumes those same frames. Without a sink, and
/// when the noise bound cannot cross any segmentation threshold, sensing
/// runs on the painted classes directly, which yields bit-identical
/// observations while skipping per-pixel noise.
TraceRun run_trace(const GestureScript& script, const PipelineConfig& config,
                   std::uint64_t noise_salt,
                   const std::function<void(int, const Frame&)>& frame_sink = {});

/// Same as run_trace but starting from pre-built records (the sweep feeds
/// steady-state regimes that no gesture script describes).
TraceRun run_records(std::vector<HandTraceRecord> records, const PipelineConfig& config,
                     std::uint64_t noise_salt,
                     const std::function<void(int, const Frame&)>& frame_sink = {});

/// True when pixel noise from the renderer's table can never flip a pixel
/// across the segmentation thresholds given the painted intensities.
bool noise_preserves_classes(int noise_bound, const SegmentationThresholds& thresholds);

struct TraceScore {
    FrameCounts contact;
    EventMatchResult events;
    std::string expected;
    std::string predicted;
};

/// Scores one run against its script's ground truth. Tracked fingers map to
/// script fingers by mean lateral position rank.
TraceScore score_trace(const GestureScript& script, const TraceRun& run,
                       const PipelineConfig& config);

std::string expected_gesture_label(ScriptKind kind);

/// Ground-truth Down/Up events from a trace's contact flags.
std::vector<TouchEvent> truth_events(const std::vector<HandTraceRecord>& records);

EvalReport evaluate_corpus(const std::vector<GestureScript>& scripts,
                           const PipelineConfig& config);

/// Full file-emitting pipeline: per trace writes trace.txt, frames/*.pgm,
/// observations.txt, events.txt and gestures.txt under out_dir, plus
/// config.txt and report.txt at the top level. Byte-identical for identical
/// (config, n_traces).
void run_pipeline(const std::filesystem::path& out_dir, const PipelineConfig& config,
                  int n_traces);

} // namespace shadowtouch
