#include "shadowtouch/geometry.hpp"

#include "shadowtouch/errors.hpp"

namespace shadowtouch {

void SceneConfig::validate() const {
    if (!(light.position.z > 0.0))
        throw GeometryError("light must be strictly above the surface (z > 0)");
    if (!(camera.center.z > 0.0))
        throw GeometryError("camera must be strictly above the surface (z > 0)");
    if (!(camera.focal_px > 0.0))
        throw GeometryError("focal length must be positive");
    if (camera.width <= 0 || camera.height <= 0)
        throw GeometryError("image dimensions must be positive");
}

Vec2 shadow_project(const Vec3& tip, const LightSource& light) {
    const Vec3& L = light.position;
    if (!(L.z > 0.0))
        throw GeometryError("light must be strictly above the surface");
    if (tip.z < 0.0 || tip.z >= L.z)
        throw GeometryError("tip height must satisfy 0 <= z < light z");
    // A grounded tip is its own shadow; skip the ray so the identity is
    // exact rather than exact-up-to-rounding.
    if (tip.z == 0.0) return {tip.x, tip.y};
    // Ray L + s*(tip - L) hits z = 0 at s = L.z / (L.z - tip.z).
    const double s = L.z / (L.z - tip.z);
    return {L.x + s * (tip.x - L.x), L.y + s * (tip.y - L.y)};
}

Vec2 project_to_image(const Vec3& p, const CameraModel& camera) {
    const double depth = camera.center.z - p.z;
    if (!(depth > 0.0))
        throw GeometryError("point must be below the camera center");
    const double u = camera.principal.x + camera.focal_px * (p.x - camera.center.x) / depth;
    const double v = camera.principal.y + camera.focal_px * (p.y - camera.center.y) / depth;
    return {u, v};
}

Vec2 unproject_on_surface(const Vec2& px, const CameraModel& camera) {
    const double depth = camera.center.z;
    if (!(depth > 0.0))
        throw GeometryError("camera must be strictly above the surface");
    const double x = camera.center.x + (px.x - camera.principal.x) * depth / camera.focal_px;
    const double y = camera.center.y + (px.y - camera.principal.y) * depth / camera.focal_px;
    return {x, y};
}

Vec2 apparent_tip_on_surface(const Vec3& tip, const CameraModel& camera) {
    const Vec3& C = camera.center;
    const double depth = C.z - tip.z;
    if (!(depth > 0.0) || !(C.z > 0.0))
        throw GeometryError("tip must be below the camera center");
    if (tip.z == 0.0) return {tip.x, tip.y}; // grounded: identity, exactly
    // Camera ray C + s*(tip - C) hits z = 0 at s = C.z / (C.z - tip.z).
    const double s = C.z / depth;
    return {C.x + s * (tip.x - C.x), C.y + s * (tip.y - C.y)};
}

double apparent_gap_mm(const Vec3& tip, const SceneConfig& scene) {
    const Vec2 shadow = shadow_project(tip, scene.light);
    const Vec2 apparent = apparent_tip_on_surface(tip, scene.camera);
    return (shadow - apparent).norm();
}

} // namespace shadowtouch
