#pragma once

#include <cmath>

namespace shadowtouch {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm() const { return std::sqrt(x * x + y * y); }
};

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    Vec2 xy() const { return {x, y}; }
};

/// Point light above the interaction surface (z = 0 plane), units mm.
/// The default sits to the left of the workspace at wrist height, so finger
/// shadows are cast rightward onto the surface.
struct LightSource {
    Vec3 position{-100.0, 0.0, 50.0};
};

/// Top-down pinhole camera looking straight down the -z axis at the surface.
/// Image coordinates: u right, v down, origin at the top-left pixel corner;
/// pixel centers land on integer coordinates.
struct CameraModel {
    Vec3 center{0.0, 0.0, 400.0};
    double focal_px = 800.0;
    Vec2 principal{320.0, 240.0};
    int width = 640;
    int height = 480;
};

struct SceneConfig {
    LightSource light;
    CameraModel camera;

    /// Throws GeometryError on degenerate setups (light or camera at or
    /// below the surface, non-positive focal length or image size).
    void validate() const;
};

/// Projects a fingertip onto the surface plane z = 0 along the ray from the
/// light through the tip. Requires 0 <= tip.z < light.z.
Vec2 shadow_project(const Vec3& tip, const LightSource& light);

/// Pinhole projection of a world point to pixel coordinates.
/// Requires p.z < camera.center.z. The result may fall outside the image
/// bounds; callers decide how to clip.
Vec2 project_to_image(const Vec3& p, const CameraModel& camera);

/// Inverse of project_to_image restricted to the surface plane z = 0.
Vec2 unproject_on_surface(const Vec2& px, const CameraModel& camera);

/// Where the camera sees a hovering tip on the surface: the intersection of
/// the camera ray through the tip with z = 0. Equals tip.xy() when tip.z = 0.
Vec2 apparent_tip_on_surface(const Vec3& tip, const CameraModel& camera);

/// Surface-plane distance between the shadow tip and the apparent tip as the
/// camera sees them. Zero exactly at contact; grows with hover height because
/// the shadow offset (light parallax) outpaces the apparent-tip offset
/// (camera parallax) for any light lower than the camera.
double apparent_gap_mm(const Vec3& tip, const SceneConfig& scene);

/// Millimeters on the surface per pixel at the image center.
inline double mm_per_px(const CameraModel& camera) {
    return camera.center.z / camera.focal_px;
}

} // namespace shadowtouch
