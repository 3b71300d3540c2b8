#include "shadowtouch/render.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "shadowtouch/errors.hpp"

namespace shadowtouch {

FrameRenderer::FrameRenderer(const SceneConfig& scene, const NoiseModel& noise)
    : scene_(scene), noise_(noise), table_(noise.pixel_sigma) {
    scene_.validate();
    if (!(noise.pixel_sigma >= 0.0))
        throw ConfigError("pixel noise sigma must be non-negative");
}

void FrameRenderer::paint_capsule(std::vector<std::uint8_t>& buf, double cu, double v_lo,
                                  double v_hi, double radius_px, std::uint8_t value,
                                  PixelRect& touched) const {
    const int width = scene_.camera.width;
    const int height = scene_.camera.height;
    if (v_lo > v_hi) std::swap(v_lo, v_hi);
    const int row_begin = std::max(0, static_cast<int>(std::ceil(v_lo - radius_px)));
    const int row_end = std::min(height - 1, static_cast<int>(std::floor(v_hi + radius_px)));
    const double r2 = radius_px * radius_px;
    for (int v = row_begin; v <= row_end; ++v) {
        double e = 0.0;
        if (v < v_lo) e = v_lo - static_cast<double>(v);
        else if (v > v_hi) e = static_cast<double>(v) - v_hi;
        const double h2 = r2 - e * e;
        if (h2 < 0.0) continue;
        const double half = std::sqrt(h2);
        const int u_begin = std::max(0, static_cast<int>(std::ceil(cu - half)));
        const int u_end = std::min(width - 1, static_cast<int>(std::floor(cu + half)));
        if (u_begin > u_end) continue;
        std::uint8_t* row = buf.data() + static_cast<std::size_t>(v) * static_cast<std::size_t>(width);
        std::fill(row + u_begin, row + u_end + 1, value);
        touched.u0 = std::min(touched.u0, u_begin);
        touched.u1 = std::max(touched.u1, u_end + 1);
        touched.v0 = std::min(touched.v0, v);
        touched.v1 = std::max(touched.v1, v + 1);
    }
}

PixelRect FrameRenderer::paint(const HandTraceRecord& rec, std::vector<std::uint8_t>& buf) const {
    const auto& cam = scene_.camera;
    const auto& light = scene_.light.position;
    PixelRect touched{cam.width, cam.height, 0, 0};

    struct Sprite {
        double cu, v_lo, v_hi, radius;
    };
    std::vector<Sprite> shadows, fingers;
    shadows.reserve(rec.fingers.size());
    fingers.reserve(rec.fingers.size());

    for (const auto& f : rec.fingers) {
        const double z = f.tip.z;
        if (z < 0.0 || z >= light.z)
            throw GeometryError("finger height out of range for shadow casting");
        // Capsule axis inset by one radius: distal cap apex lands on the tip.
        const Vec3 distal{f.tip.x, f.tip.y - kFingerRadiusMm, z};
        const Vec3 proximal{f.tip.x, f.tip.y - (kFingerLengthMm - kFingerRadiusMm), z};

        const Vec2 tip_px = project_to_image(distal, cam);
        const Vec2 prox_px = project_to_image(proximal, cam);
        const double finger_scale = cam.focal_px / (cam.center.z - z);
        fingers.push_back({tip_px.x, prox_px.y, tip_px.y, kFingerRadiusMm * finger_scale});

        const Vec2 sh_distal = shadow_project(distal, scene_.light);
        const Vec2 sh_prox = shadow_project(proximal, scene_.light);
        const Vec2 sh_tip_px = project_to_image({sh_distal.x, sh_distal.y, 0.0}, cam);
        const Vec2 sh_prox_px = project_to_image({sh_prox.x, sh_prox.y, 0.0}, cam);
        const double shadow_scale = (light.z / (light.z - z)) * (cam.focal_px / cam.center.z);
        shadows.push_back({sh_tip_px.x, sh_prox_px.y, sh_tip_px.y, kFingerRadiusMm * shadow_scale});
    }

    for (const auto& s : shadows)
        paint_capsule(buf, s.cu, s.v_lo, s.v_hi, s.radius, kIntensityShadow, touched);
    for (const auto& s : fingers)
        paint_capsule(buf, s.cu, s.v_lo, s.v_hi, s.radius, kIntensityFinger, touched);

    if (touched.empty()) touched = {0, 0, 0, 0};
    return touched;
}

void FrameRenderer::add_noise(Frame& frame) const {
    if (noise_.pixel_sigma <= 0.0) return;
    Rng rng(derive_seed(noise_.seed, std::bit_cast<std::uint64_t>(frame.t_ms)));
    std::uint8_t* px = frame.pixels.data();
    const std::size_t n = frame.pixels.size();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const std::uint64_t draw = rng.next_u64();
        for (int k = 0; k < 4; ++k) {
            const int offset = table_.sample(static_cast<std::uint16_t>(draw >> (16 * k)));
            const int v = static_cast<int>(px[i + static_cast<std::size_t>(k)]) + offset;
            px[i + static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(std::clamp(v, 0, 255));
        }
    }
    if (i < n) {
        const std::uint64_t draw = rng.next_u64();
        for (int k = 0; i < n; ++i, ++k) {
            const int offset = table_.sample(static_cast<std::uint16_t>(draw >> (16 * k)));
            const int v = static_cast<int>(px[i]) + offset;
            px[i] = static_cast<std::uint8_t>(std::clamp(v, 0, 255));
        }
    }
}

Frame FrameRenderer::render(const HandTraceRecord& rec) const {
    Frame frame;
    frame.t_ms = rec.t_ms;
    frame.width = scene_.camera.width;
    frame.height = scene_.camera.height;
    frame.pixels.assign(
        static_cast<std::size_t>(frame.width) * static_cast<std::size_t>(frame.height),
        kIntensityBackground);
    paint(rec, frame.pixels);
    add_noise(frame);
    return frame;
}

Frame render_frame(const HandTraceRecord& rec, const SceneConfig& scene, const NoiseModel& noise) {
    return FrameRenderer(scene, noise).render(rec);
}

} // namespace shadowtouch
