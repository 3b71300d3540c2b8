#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "shadowtouch/geometry.hpp"
#include "shadowtouch/segment.hpp"

namespace shadowtouch {

/// Per-frame measurement for one tracked finger. merged means the finger
/// region has no separate shadow region paired with it and nothing else in
/// the frame could be hiding that shadow: near contact the finger occludes
/// (or absorbs) its own shadow, so a missing shadow is the contact cue and
/// the gap reads zero. When another finger sits in the shadow's expected
/// path, a missing shadow is only trusted as a merge if the track's recent
/// gap readings had already closed in; otherwise the shadow is occluded and
/// the gap is reported unknown.
struct FingerObservation {
    int finger_id = 0;
    double t_ms = 0.0;
    Vec2 tip_px;
    std::optional<Vec2> shadow_tip_px;
    std::optional<double> gap_mm;
    bool merged = false;
};

/// One-to-one assignment between finger tips and shadow tips (pixel
/// coordinates): the assignment pairing the most fingers with the least
/// total squared displacement. A shadow qualifies for a finger when it lies
/// in the direction away from the light's ground point (within 60 degrees)
/// or closer than 2 mm. Returns (finger_index, shadow_index) pairs.
std::vector<std::pair<int, int>> match_fingers_to_shadows(const std::vector<Vec2>& finger_tips,
                                                          const std::vector<Vec2>& shadow_tips,
                                                          const SceneConfig& scene);

/// Surface-plane distance between the unprojected tip and shadow tip.
/// Zero when merged, empty when the finger has no shadow information at all.
std::optional<double> measure_gap(const Vec2& tip_px, const std::optional<Vec2>& shadow_tip_px,
                                  bool merged, const CameraModel& camera);

/// Stateful per-trace extractor: segments frames, localizes sub-pixel tips
/// (bottom-row midpoints), tracks finger identity across frames
/// (nearest-neighbour with a pixel gate, ids assigned left-to-right on first
/// appearance), pairs shadows and measures gaps.
class ShadowSensor {
public:
    ShadowSensor(const SceneConfig& scene, const SegmentationThresholds& thresholds);

    std::vector<FingerObservation> process(const Frame& frame);
    std::vector<FingerObservation> process(const std::uint8_t* pixels, int width, int height,
                                           double t_ms, const PixelRect* roi = nullptr);

    void reset();

private:
    struct Track {
        int id;
        Vec2 last_px;
        int missed;
        // Rate-limited gap evidence history, newest first; mispaired shadow
        // slivers from a neighbouring finger must not overwrite it (see
        // kGapRateMmPerFrame). Three deep: single readings wobble by a few
        // millimetres near contact, so trends are judged across the window.
        std::array<std::optional<double>, 3> gap_mm;
        int gap_frame;
    };

    SceneConfig scene_;
    SegmentationThresholds thresholds_;
    std::vector<Track> tracks_;
    int next_id_ = 0;
    int frame_no_ = 0;
};

void write_observations(std::ostream& out, const std::vector<FingerObservation>& observations);

std::vector<FingerObservation> read_observations(std::istream& in);

} // namespace shadowtouch
