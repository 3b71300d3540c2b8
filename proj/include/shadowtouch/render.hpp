#pragma once

#include <cstdint>
#include <vector>

#include "shadowtouch/geometry.hpp"
#include "shadowtouch/rng.hpp"
#include "shadowtouch/trace.hpp"

namespace shadowtouch {

inline constexpr std::uint8_t kIntensityBackground = 200;
inline constexpr std::uint8_t kIntensityShadow = 100;
inline constexpr std::uint8_t kIntensityFinger = 255;

struct NoiseModel {
    double pixel_sigma = 6.0;
    double jitter_sigma_mm = 0.3;
    std::uint64_t seed = 0;
};

struct Frame {
    double t_ms = 0.0;
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    std::uint8_t at(int u, int v) const {
        return pixels[static_cast<std::size_t>(v) * static_cast<std::size_t>(width) +
                      static_cast<std::size_t>(u)];
    }
};

/// Pixel rectangle, half-open: columns [u0, u1), rows [v0, v1).
struct PixelRect {
    int u0 = 0;
    int v0 = 0;
    int u1 = 0;
    int v1 = 0;

    bool empty() const { return u0 >= u1 || v0 >= v1; }
};

/// Synthetic top-down view of fingers over the surface. Fingers are flat
/// capsule sprites parallel to the surface at the tip's height: the capsule
/// axis is inset by one radius at both ends so the distal cap apex coincides
/// with the fingertip position. Shadows are the sprite scaled about the
/// light's ground point by light_z / (light_z - tip_z); at contact the shadow
/// footprint equals the finger footprint and is fully occluded. Shadows of
/// all fingers are painted first, fingers on top.
///
/// Pixel noise is additive Gaussian from a 65536-level inverse-CDF table
/// clamped at 4 sigma, keyed by (noise seed, frame timestamp), so frames are
/// byte-identical across runs for identical inputs.
class FrameRenderer {
public:
    FrameRenderer(const SceneConfig& scene, const NoiseModel& noise);

    Frame render(const HandTraceRecord& rec) const;

    /// Paints class intensities into buf (size width*height) without noise.
    /// Touched pixels lie inside the returned rectangle. buf outside the
    /// rectangle is left as-is; callers reusing a buffer restore the previous
    /// rectangle to background themselves.
    PixelRect paint(const HandTraceRecord& rec, std::vector<std::uint8_t>& buf) const;

    void add_noise(Frame& frame) const;

    /// Largest absolute pixel offset the noise table can produce.
    int noise_bound() const { return table_.max_abs(); }

    const SceneConfig& scene() const { return scene_; }
    const NoiseModel& noise() const { return noise_; }

private:
    void paint_capsule(std::vector<std::uint8_t>& buf, double cu, double v_lo, double v_hi,
                       double radius_px, std::uint8_t value, PixelRect& touched) const;

    SceneConfig scene_;
    NoiseModel noise_;
    GaussianTable table_;
};

Frame render_frame(const HandTraceRecord& rec, const SceneConfig& scene, const NoiseModel& noise);

} // namespace shadowtouch
