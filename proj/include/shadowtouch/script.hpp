#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shadowtouch/geometry.hpp"
#include "shadowtouch/trace.hpp"

namespace shadowtouch {

enum class ScriptKind { tap, swipe, pinch, type_key, cursor_swipe };

enum class SwipeDir { left, right, up, down };

const char* to_string(ScriptKind kind);
const char* to_string(SwipeDir dir);

/// Rigid-plus-scale motion applied about the initial centroid of the two
/// contact points over the course of a pinch.
struct PinchMotion {
    double scale = 1.0;
    double rotation_rad = 0.0;
    Vec2 pan{};
};

/// Declarative description of one hand gesture. A script plays out as:
/// hover at the ceiling over the start point, descend, perform the contact
/// motion, ascend, hover over the end point. Multi-finger scripts may
/// stagger the press of later fingers by stagger_ms.
struct GestureScript {
    ScriptKind kind = ScriptKind::tap;
    std::vector<int> fingers{kFingerIndex};
    std::vector<Vec2> starts{{20.0, 0.0}};
    SwipeDir direction = SwipeDir::right;
    double amplitude_mm = 30.0;
    PinchMotion pinch{};

    double pre_hover_ms = 2000.0;
    double post_hover_ms = 2000.0;
    double approach_ms = 60.0;
    double contact_ms = 120.0;
    double stagger_ms = 0.0;
    double hover_ceiling_mm = 15.0;

    std::uint64_t seed = 0;
    std::string label = "tap";

    double duration_ms() const;

    /// Structural checks only (finger counts per kind, positive durations).
    /// Field-of-view checks happen against the realized trajectory in
    /// generate_trace. Throws ConfigError.
    void validate() const;
};

/// Samples the script into a frame-rate trace. Lateral jitter is an
/// OU-smoothed process applied only while airborne; its amplitude ramps to
/// zero as the tip approaches the surface so contact positions are exact.
/// Throws ConfigError if any fingertip or its shadow tip would leave the
/// camera field of view.
std::vector<HandTraceRecord> generate_trace(const GestureScript& script,
                                            double frame_period_ms,
                                            double jitter_sigma_mm = 0.3,
                                            const SceneConfig& scene = {});

/// Deterministic mixed corpus: taps, single- and two-finger swipes, pinches,
/// key taps and cursor swipes in fixed proportions, parameters drawn from
/// per-script seeds derived from `seed`.
std::vector<GestureScript> make_corpus(int count, std::uint64_t seed);

} // namespace shadowtouch
