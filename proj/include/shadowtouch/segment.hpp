#pragma once

#include <vector>

#include "shadowtouch/geometry.hpp"
#include "shadowtouch/render.hpp"

namespace shadowtouch {

struct SegmentationThresholds {
    int finger_min = 230;
    int shadow_max = 140;
    int min_component_px = 20;

    void validate() const;
};

/// Connected pixel region (8-connectivity) of one intensity class.
/// tip_u/tip_v is the extremal pixel along +v (the distal direction for
/// +y-pointing fingers); ties on the bottom row resolve to the largest u.
/// tip_row_u0/tip_row_u1 span the bottom row (inclusive).
struct Component {
    long long area = 0;
    int u_min = 0;
    int u_max = 0;
    int v_min = 0;
    int v_max = 0;
    double centroid_u = 0.0;
    double centroid_v = 0.0;
    int tip_u = 0;
    int tip_v = 0;
    int tip_row_u0 = 0;
    int tip_row_u1 = 0;
};

struct SegmentationResult {
    std::vector<Component> fingers;
    std::vector<Component> shadows;
};

/// Thresholds pixels into finger (>= finger_min) and shadow (<= shadow_max)
/// classes and extracts connected components of at least min_component_px
/// pixels, sorted by centroid (u, then v). When roi is given only that
/// rectangle is scanned; callers are responsible for roi covering every
/// non-background pixel.
SegmentationResult segment(const std::uint8_t* pixels, int width, int height,
                           const SegmentationThresholds& thresholds,
                           const PixelRect* roi = nullptr);

SegmentationResult segment(const Frame& frame, const SegmentationThresholds& thresholds);

Vec2 locate_tip(const Component& c);

std::vector<Vec2> locate_tips(const std::vector<Component>& components);

/// Sub-pixel tip estimate: midpoint of the bottom row. The width of a round
/// cap's last raster row swings with the sub-pixel phase of the apex, so any
/// single extremal pixel can sit several pixels off-axis; the row midpoint
/// stays within about one pixel of the apex at every phase.
Vec2 refined_tip(const Component& c);

std::vector<Vec2> refined_tips(const std::vector<Component>& components);

} // namespace shadowtouch
