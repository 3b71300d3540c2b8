#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "shadowtouch/errors.hpp"
#include "shadowtouch/observe.hpp"
#include "shadowtouch/render.hpp"

using namespace shadowtouch;

namespace {

HandTraceRecord one_finger(double x, double y, double z, double t = 0.0) {
    HandTraceRecord rec;
    rec.t_ms = t;
    rec.fingers.push_back({kFingerIndex, {x, y, z}, z <= kContactEpsMm});
    return rec;
}

NoiseModel no_noise() {
    NoiseModel n;
    n.pixel_sigma = 0.0;
    return n;
}

std::vector<FingerObservation> sense_one(const HandTraceRecord& rec,
                                         const NoiseModel& noise = no_noise()) {
    const SceneConfig scene{};
    ShadowSensor sensor(scene, SegmentationThresholds{});
    return sensor.process(render_frame(rec, scene, noise));
}

} // namespace

TEST_CASE("measured gap hits the analytic value at the pinned case") {
    const auto obs = sense_one(one_finger(50.0, 0.0, 2.0));
    REQUIRE(obs.size() == 1);
    CHECK_FALSE(obs[0].merged);
    REQUIRE(obs[0].gap_mm.has_value());
    CHECK(std::abs(*obs[0].gap_mm - 5.998743718592969) <= 0.8); // pixel quantization bound
    CHECK(std::abs(obs[0].tip_px.x - 420.5) < 2.0);
    CHECK(std::abs(obs[0].tip_px.y - 240.0) < 2.0);
    REQUIRE(obs[0].shadow_tip_px.has_value());
    CHECK(std::abs(obs[0].shadow_tip_px->x - 432.5) < 2.0);
}

TEST_CASE("measured gap tracks the analytic curve across the workspace") {
    // Below ~5 mm the finger sprite still overlaps its shadow and only an
    // outer crescent of shadow survives, so the shadow tip reads biased
    // outward: the measured gap may overstate the analytic one (never
    // understate it beyond quantization, which is what contact detection
    // relies on). Once the regions separate the measurement lands within
    // 2 px-equivalent of the analytic curve.
    const SceneConfig scene{};
    for (double x : {-10.0, 30.0, 60.0}) {
        for (double y : {-40.0, 40.0}) {
            double prev = -1.0;
            for (double h : {1.0, 3.0, 5.0, 7.0, 9.0, 11.0, 13.0, 15.0}) {
                const auto obs = sense_one(one_finger(x, y, h));
                REQUIRE(obs.size() == 1);
                REQUIRE(obs[0].gap_mm.has_value());
                const double analytic = apparent_gap_mm({x, y, h}, scene);
                if (h >= 5.0) CHECK(std::abs(*obs[0].gap_mm - analytic) <= 1.0);
                else CHECK(*obs[0].gap_mm >= analytic - 0.8);
                CHECK(*obs[0].gap_mm > prev);
                prev = *obs[0].gap_mm;
            }
        }
    }
}

TEST_CASE("contact observations are merged with zero gap") {
    for (double x : {-15.0, 20.0, 55.0}) {
        const auto obs = sense_one(one_finger(x, 10.0, 0.0));
        REQUIRE(obs.size() == 1);
        CHECK(obs[0].merged);
        CHECK_FALSE(obs[0].shadow_tip_px.has_value());
        REQUIRE(obs[0].gap_mm.has_value());
        CHECK(*obs[0].gap_mm == 0.0);
    }
}

TEST_CASE("merge clears once the finger is five millimetres up") {
    for (double h : {5.0, 10.0, 15.0}) {
        for (double x : {-15.0, 20.0, 55.0}) {
            const auto obs = sense_one(one_finger(x, 0.0, h));
            REQUIRE(obs.size() == 1);
            CHECK_FALSE(obs[0].merged);
            CHECK(obs[0].shadow_tip_px.has_value());
        }
    }
}

TEST_CASE("noise does not change any observation") {
    NoiseModel noise;
    noise.seed = 12;
    for (double h : {0.0, 1.0, 2.0, 8.0, 14.0}) {
        const HandTraceRecord rec = one_finger(35.0, -20.0, h, 10.0 * h);
        const auto clean = sense_one(rec);
        const auto noisy = sense_one(rec, noise);
        REQUIRE(clean.size() == 1);
        REQUIRE(noisy.size() == 1);
        CHECK(noisy[0].tip_px.x == clean[0].tip_px.x);
        CHECK(noisy[0].tip_px.y == clean[0].tip_px.y);
        CHECK(noisy[0].merged == clean[0].merged);
        CHECK(noisy[0].gap_mm.value_or(-1.0) == clean[0].gap_mm.value_or(-1.0));
    }
}

TEST_CASE("painted-roi processing equals full-frame processing") {
    const SceneConfig scene{};
    NoiseModel noise;
    noise.seed = 4;
    const FrameRenderer renderer(scene, noise);
    ShadowSensor full_sensor(scene, SegmentationThresholds{});
    ShadowSensor roi_sensor(scene, SegmentationThresholds{});

    double t = 0.0;
    for (double h : {12.0, 6.0, 2.0, 0.0, 0.0, 3.0, 12.0}) {
        t += 10.0;
        const HandTraceRecord rec = one_finger(30.0, 5.0, h, t);

        const auto full = full_sensor.process(renderer.render(rec));

        std::vector<std::uint8_t> buf(
            static_cast<std::size_t>(scene.camera.width) *
                static_cast<std::size_t>(scene.camera.height),
            kIntensityBackground);
        const PixelRect roi = renderer.paint(rec, buf);
        const auto fast = roi_sensor.process(buf.data(), scene.camera.width, scene.camera.height,
                                             rec.t_ms, &roi);

        REQUIRE(full.size() == fast.size());
        for (std::size_t i = 0; i < full.size(); ++i) {
            CHECK(full[i].finger_id == fast[i].finger_id);
            CHECK(full[i].tip_px.x == fast[i].tip_px.x);
            CHECK(full[i].tip_px.y == fast[i].tip_px.y);
            CHECK(full[i].merged == fast[i].merged);
            CHECK(full[i].gap_mm.value_or(-1.0) == fast[i].gap_mm.value_or(-1.0));
        }
    }
}

TEST_CASE("two fingers pair with their own shadows") {
    const SceneConfig scene{};
    HandTraceRecord rec;
    rec.t_ms = 0.0;
    rec.fingers.push_back({kFingerThumb, {-10.0, 0.0, 10.0}, false});
    rec.fingers.push_back({kFingerIndex, {30.0, 0.0, 10.0}, false});
    ShadowSensor sensor(scene, SegmentationThresholds{});
    const auto obs = sensor.process(render_frame(rec, scene, no_noise()));
    REQUIRE(obs.size() == 2);
    CHECK(obs[0].finger_id == 0); // left-to-right id assignment
    CHECK(obs[1].finger_id == 1);
    for (const auto& o : obs) {
        REQUIRE(o.gap_mm.has_value());
        CHECK_FALSE(o.merged);
    }
    const double want0 = apparent_gap_mm({-10.0, 0.0, 10.0}, scene);
    const double want1 = apparent_gap_mm({30.0, 0.0, 10.0}, scene);
    CHECK(std::abs(*obs[0].gap_mm - want0) <= 1.0);
    CHECK(std::abs(*obs[1].gap_mm - want1) <= 1.0);
}

TEST_CASE("track identities persist and expire") {
    const SceneConfig scene{};
    ShadowSensor sensor(scene, SegmentationThresholds{});
    double t = 0.0;
    auto frame_of = [&](std::vector<Vec2> tips) {
        HandTraceRecord rec;
        rec.t_ms = (t += 10.0);
        int id = 0;
        for (const auto& p : tips) rec.fingers.push_back({id++, {p.x, p.y, 8.0}, false});
        return render_frame(rec, scene, no_noise());
    };

    auto obs = sensor.process(frame_of({{-20.0, 0.0}, {25.0, 0.0}}));
    REQUIRE(obs.size() == 2);
    CHECK(obs[0].finger_id == 0);
    CHECK(obs[1].finger_id == 1);
    const double left_u = obs[0].tip_px.x;

    // Drift both fingers; identities must follow.
    obs = sensor.process(frame_of({{-18.0, 2.0}, {27.0, -2.0}}));
    REQUIRE(obs.size() == 2);
    CHECK(obs[0].finger_id == 0);
    CHECK(obs[0].tip_px.x > left_u);

    // Left finger vanishes; the survivor keeps id 1.
    for (int i = 0; i < 3; ++i) {
        obs = sensor.process(frame_of({{27.0, -2.0}}));
        REQUIRE(obs.size() == 1);
        CHECK(obs[0].finger_id == 1);
    }

    // Reappearing quickly near the old spot resumes id 0 (within miss limit).
    obs = sensor.process(frame_of({{-18.0, 2.0}, {27.0, -2.0}}));
    REQUIRE(obs.size() == 2);
    CHECK(obs[0].finger_id == 0);

    // Gone long enough for the track to expire: a newcomer gets a fresh id.
    for (int i = 0; i < 12; ++i) obs = sensor.process(frame_of({{27.0, -2.0}}));
    obs = sensor.process(frame_of({{-18.0, 2.0}, {27.0, -2.0}}));
    REQUIRE(obs.size() == 2);
    CHECK(obs[0].finger_id == 1);
    CHECK(obs[1].finger_id == 2); // fresh id for the returning left finger
}

TEST_CASE("finger-shadow matching respects the light direction") {
    const SceneConfig scene{};
    // Finger tip at image center; true shadow to the right, decoy to the left
    // (toward the light) — decoy must not pair even though it is closer.
    const std::vector<Vec2> fingers{{320.0, 240.0}};
    const std::vector<Vec2> decoy_left{{310.0, 240.0}};
    const std::vector<Vec2> true_right{{340.0, 240.0}};

    auto pairs = match_fingers_to_shadows(fingers, decoy_left, scene);
    CHECK(pairs.empty());

    pairs = match_fingers_to_shadows(fingers, true_right, scene);
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0] == std::pair<int, int>{0, 0});

    // Nearby shadows pair regardless of direction (sub-2 mm slack).
    const std::vector<Vec2> near_left{{317.0, 240.0}};
    pairs = match_fingers_to_shadows(fingers, near_left, scene);
    REQUIRE(pairs.size() == 1);

    // One shadow serves at most one finger; the closer finger wins.
    const std::vector<Vec2> two_fingers{{320.0, 240.0}, {330.0, 240.0}};
    const std::vector<Vec2> one_shadow{{344.0, 240.0}};
    pairs = match_fingers_to_shadows(two_fingers, one_shadow, scene);
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0].first == 1);
}

TEST_CASE("shadow assignment never crosses between neighbouring fingers") {
    // Two fingers hovering side by side on the light axis: the left finger's
    // shadow lands closer to the right finger than the right finger's own
    // shadow does. Nearest-first matching would swap them; the overall
    // optimum must not (plain distance sums tie on this collinear layout,
    // which is exactly why the cost is convex).
    const SceneConfig scene{};
    const std::vector<Vec2> fingers{{340.0, 240.0}, {390.0, 240.0}};
    const std::vector<Vec2> shadows{{422.0, 240.0}, {490.0, 240.0}};
    const auto pairs = match_fingers_to_shadows(fingers, shadows, scene);
    REQUIRE(pairs.size() == 2);
    CHECK(pairs[0] == std::pair<int, int>{0, 0});
    CHECK(pairs[1] == std::pair<int, int>{1, 1});
}

TEST_CASE("gap measurement composes the surface homography") {
    const CameraModel cam{};
    // 2 px apart on the surface plane = 1 mm at the default scale.
    const auto gap = measure_gap({320.0, 240.0}, Vec2{322.0, 240.0}, false, cam);
    REQUIRE(gap.has_value());
    CHECK(*gap == doctest::Approx(1.0).epsilon(1e-12));

    CHECK(measure_gap({320.0, 240.0}, Vec2{322.0, 240.0}, true, cam).value() == 0.0);
    CHECK_FALSE(measure_gap({320.0, 240.0}, std::nullopt, false, cam).has_value());
}

TEST_CASE("observations round-trip through the text format") {
    std::vector<FingerObservation> obs;
    FingerObservation a;
    a.finger_id = 0;
    a.t_ms = 120.0;
    a.tip_px = {410.25, 233.5};
    a.shadow_tip_px = Vec2{428.5, 239.0};
    a.gap_mm = 5.4321;
    a.merged = false;
    obs.push_back(a);
    FingerObservation b;
    b.finger_id = 1;
    b.t_ms = 120.0;
    b.tip_px = {200.0, 100.0};
    b.merged = true;
    b.gap_mm = 0.0;
    obs.push_back(b);
    FingerObservation c;
    c.finger_id = 2;
    c.t_ms = 130.0;
    c.tip_px = {50.0, 60.0};
    c.merged = false; // no shadow information at all
    obs.push_back(c);

    std::stringstream buf;
    write_observations(buf, obs);
    const auto back = read_observations(buf);
    REQUIRE(back.size() == 3);
    CHECK(back[0].finger_id == 0);
    CHECK(back[0].tip_px.x == doctest::Approx(410.25));
    REQUIRE(back[0].shadow_tip_px.has_value());
    CHECK(back[0].shadow_tip_px->x == doctest::Approx(428.5));
    CHECK(back[0].gap_mm.value() == doctest::Approx(5.4321));
    CHECK_FALSE(back[0].merged);
    CHECK(back[1].merged);
    CHECK(back[1].gap_mm.value() == 0.0);
    CHECK_FALSE(back[1].shadow_tip_px.has_value());
    CHECK_FALSE(back[2].shadow_tip_px.has_value());
    CHECK_FALSE(back[2].gap_mm.has_value());

    std::stringstream bad("1 2 3\n");
    CHECK_THROWS_AS(read_observations(bad), DataError);
}
