#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "shadowtouch/errors.hpp"
#include "shadowtouch/geometry.hpp"
#include "shadowtouch/rng.hpp"

using namespace shadowtouch;

TEST_CASE("shadow projection matches hand-computed values") {
    const LightSource light{};

    const Vec2 a = shadow_project({50.0, 0.0, 2.0}, light);
    CHECK(a.x == doctest::Approx(56.25).epsilon(1e-12));
    CHECK(a.y == doctest::Approx(0.0).epsilon(1e-12));

    const Vec2 b = shadow_project({0.0, 0.0, 10.0}, light);
    CHECK(b.x == doctest::Approx(25.0).epsilon(1e-12));

    const Vec2 c = shadow_project({50.0, 30.0, 5.0}, light);
    CHECK(c.x == doctest::Approx(66.66666666666667).epsilon(1e-12));
    CHECK(c.y == doctest::Approx(33.333333333333336).epsilon(1e-12));

    const Vec2 d = shadow_project({50.0, 0.0, 0.0}, light);
    CHECK(d.x == doctest::Approx(50.0).epsilon(1e-12));
    CHECK(d.y == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("shadow lies on the light ray and on the surface") {
    Rng rng(41);
    for (int i = 0; i < 2000; ++i) {
        LightSource light;
        light.position = {rng.uniform(-300.0, -20.0), rng.uniform(-80.0, 80.0),
                          rng.uniform(30.0, 200.0)};
        const Vec3 tip{rng.uniform(-100.0, 200.0), rng.uniform(-150.0, 150.0),
                       rng.uniform(0.0, light.position.z * 0.8)};
        const Vec2 s2 = shadow_project(tip, light);
        const Vec3 s{s2.x, s2.y, 0.0};

        // Collinearity of light, tip and shadow: cross(tip - L, s - L) = 0.
        const Vec3 u = tip - light.position;
        const Vec3 v = s - light.position;
        const Vec3 cross{u.y * v.z - u.z * v.y, u.z * v.x - u.x * v.z, u.x * v.y - u.y * v.x};
        const double scale = std::max(1.0, u.norm() * v.norm());
        CHECK(cross.norm() / scale < 1e-12);
    }
}

TEST_CASE("shadow projection rejects tips outside its domain") {
    const LightSource light{};
    CHECK_THROWS_AS(shadow_project({0.0, 0.0, 50.0}, light), GeometryError);
    CHECK_THROWS_AS(shadow_project({0.0, 0.0, 80.0}, light), GeometryError);
    CHECK_THROWS_AS(shadow_project({0.0, 0.0, -1.0}, light), GeometryError);
}

TEST_CASE("camera projection matches hand-computed values") {
    const CameraModel cam{};

    const Vec2 p = project_to_image({10.0, 20.0, 0.0}, cam);
    CHECK(p.x == doctest::Approx(340.0).epsilon(1e-12));
    CHECK(p.y == doctest::Approx(280.0).epsilon(1e-12));

    const Vec2 q = project_to_image({50.0, 0.0, 2.0}, cam);
    CHECK(q.x == doctest::Approx(420.5025125628141).epsilon(1e-12));
    CHECK(q.y == doctest::Approx(240.0).epsilon(1e-12));

    const Vec2 m = unproject_on_surface({0.0, 0.0}, cam);
    CHECK(m.x == doctest::Approx(-160.0).epsilon(1e-12));
    CHECK(m.y == doctest::Approx(-120.0).epsilon(1e-12));

    CHECK(mm_per_px(cam) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("surface projection round-trips through the image") {
    const CameraModel cam{};
    Rng rng(7);
    for (int i = 0; i < 2000; ++i) {
        const Vec2 world{rng.uniform(-160.0, 160.0), rng.uniform(-120.0, 120.0)};
        const Vec2 px = project_to_image({world.x, world.y, 0.0}, cam);
        const Vec2 back = unproject_on_surface(px, cam);
        CHECK(std::abs(back.x - world.x) < 1e-9);
        CHECK(std::abs(back.y - world.y) < 1e-9);

        const Vec2 px2{rng.uniform(0.0, 640.0), rng.uniform(0.0, 480.0)};
        const Vec2 w2 = unproject_on_surface(px2, cam);
        const Vec2 fwd = project_to_image({w2.x, w2.y, 0.0}, cam);
        CHECK(std::abs(fwd.x - px2.x) < 1e-9);
        CHECK(std::abs(fwd.y - px2.y) < 1e-9);
    }
}

TEST_CASE("apparent gap is zero at contact and matches the closed form") {
    const SceneConfig scene{};

    CHECK(apparent_gap_mm({50.0, 0.0, 0.0}, scene) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(apparent_gap_mm({-20.0, 70.0, 0.0}, scene) == doctest::Approx(0.0).epsilon(1e-15));

    CHECK(apparent_gap_mm({50.0, 0.0, 2.0}, scene) ==
          doctest::Approx(5.998743718592969).epsilon(1e-12));
    CHECK(apparent_gap_mm({20.0, -30.0, 8.0}, scene) ==
          doctest::Approx(23.021457495262204).epsilon(1e-12));
}

TEST_CASE("apparent gap amplifies hover height about threefold here") {
    // Analytic factor at (50, 0): 150/(50-h) - 50/(400-h), i.e. 2.905 at
    // h=0.5 rising to 3.622 at h=10 as the tip nears the light plane.
    const SceneConfig scene{};
    double prev_factor = 0.0;
    for (double h : {0.5, 1.0, 2.0, 5.0, 10.0}) {
        const double g = apparent_gap_mm({50.0, 0.0, h}, scene);
        const double factor = g / h;
        CHECK(factor > 2.9);
        CHECK(factor < 3.65);
        CHECK(factor > prev_factor);
        prev_factor = factor;
    }
}

TEST_CASE("scene validation rejects degenerate setups") {
    SceneConfig scene;
    CHECK_NOTHROW(scene.validate());

    scene.light.position.z = 0.0;
    CHECK_THROWS_AS(scene.validate(), GeometryError);
    scene = {};
    scene.camera.center.z = -1.0;
    CHECK_THROWS_AS(scene.validate(), GeometryError);
    scene = {};
    scene.camera.focal_px = 0.0;
    CHECK_THROWS_AS(scene.validate(), GeometryError);
    scene = {};
    scene.camera.width = 0;
    CHECK_THROWS_AS(scene.validate(), GeometryError);
}

TEST_CASE("rng streams are deterministic and distinct per salt") {
    Rng a(12345), b(12345), c(54321);
    bool same = true, differ = false;
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next_u64();
        same = same && (x == b.next_u64());
        differ = differ || (x != c.next_u64());
    }
    CHECK(same);
    CHECK(differ);

    CHECK(derive_seed(1, 2) == derive_seed(1, 2));
    CHECK(derive_seed(1, 2) != derive_seed(1, 3));
    CHECK(derive_seed(1, 2) != derive_seed(2, 2));
}

TEST_CASE("probit inverts the normal cdf") {
    CHECK(std::abs(Rng::probit(0.5)) < 1e-9);
    for (double p : {0.001, 0.01, 0.1, 0.25, 0.75, 0.9, 0.99, 0.999}) {
        const double x = Rng::probit(p);
        const double cdf = 0.5 * std::erfc(-x / std::sqrt(2.0));
        CHECK(cdf == doctest::Approx(p).epsilon(1e-7));
    }
    CHECK(Rng::probit(0.975) == doctest::Approx(1.959964).epsilon(1e-5));
}

TEST_CASE("gaussian noise table is clamped and symmetric-ish") {
    const GaussianTable table(6.0);
    CHECK(table.sigma() == 6.0);
    CHECK(table.max_abs() == 24);

    long long sum = 0;
    int lo = 0, hi = 0;
    for (int i = 0; i < 65536; ++i) {
        const int v = table.sample(static_cast<std::uint16_t>(i));
        CHECK(std::abs(v) <= 24);
        sum += v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    CHECK(lo == -24);
    CHECK(hi == 24);
    CHECK(std::abs(static_cast<double>(sum)) / 65536.0 < 0.05);
}
