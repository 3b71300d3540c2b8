#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "shadowtouch/errors.hpp"
#include "shadowtouch/pipeline.hpp"
#include "shadowtouch/sweep.hpp"

using namespace shadowtouch;

namespace {

GestureScript quick_tap() {
    GestureScript s;
    s.kind = ScriptKind::tap;
    s.starts = {{20.0, 0.0}};
    s.pre_hover_ms = 400.0;
    s.post_hover_ms = 400.0;
    s.approach_ms = 60.0;
    s.contact_ms = 150.0;
    s.hover_ceiling_mm = 12.0;
    s.seed = 11;
    return s;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

TEST_CASE("noise class preservation matches the threshold arithmetic") {
    const SegmentationThresholds t; // 230 / 140
    CHECK(noise_preserves_classes(0, t));
    CHECK(noise_preserves_classes(24, t));
    CHECK(noise_preserves_classes(25, t));
    CHECK_FALSE(noise_preserves_classes(30, t)); // 255-30 drops below finger_min
    CHECK_FALSE(noise_preserves_classes(41, t)); // 100+41 exceeds shadow_max
}

TEST_CASE("truth events rise and fall with the contact flag") {
    std::vector<HandTraceRecord> records;
    auto rec = [&](double t, bool contact) {
        HandTraceRecord r;
        r.t_ms = t;
        FingerSample f;
        f.finger_id = kFingerIndex;
        f.tip = {20.0, 0.0, contact ? 0.0 : 5.0};
        f.contact = contact;
        r.fingers = {f};
        records.push_back(r);
    };
    rec(0.0, false);
    rec(10.0, true);
    rec(20.0, true);
    rec(30.0, false);
    rec(40.0, true);
    rec(50.0, false);

    const auto events = truth_events(records);
    REQUIRE(events.size() == 4);
    CHECK(events[0].kind == TouchKind::Down);
    CHECK(events[0].t_ms == doctest::Approx(10.0));
    CHECK(events[1].kind == TouchKind::Up);
    CHECK(events[1].t_ms == doctest::Approx(30.0));
    CHECK(events[2].kind == TouchKind::Down);
    CHECK(events[3].kind == TouchKind::Up);
}

TEST_CASE("script kinds map to their scored gesture labels") {
    CHECK(expected_gesture_label(ScriptKind::tap) == "tap");
    CHECK(expected_gesture_label(ScriptKind::type_key) == "tap");
    CHECK(expected_gesture_label(ScriptKind::swipe) == "swipe");
    CHECK(expected_gesture_label(ScriptKind::cursor_swipe) == "swipe");
    CHECK(expected_gesture_label(ScriptKind::pinch) == "pinch");
}

TEST_CASE("a tap trace runs end to end and scores cleanly") {
    PipelineConfig config;
    config.seed = 5;
    const GestureScript script = quick_tap();
    const TraceRun run = run_trace(script, config, 0);

    REQUIRE(run.records.size() == run.frames.size());
    REQUIRE(run.timelines.size() == 1);
    CHECK(run.timelines[0].samples.size() + static_cast<std::size_t>(
              run.timelines[0].first_frame) == run.records.size());

    int downs = 0, ups = 0;
    for (const auto& e : run.events) {
        downs += e.kind == TouchKind::Down ? 1 : 0;
        ups += e.kind == TouchKind::Up ? 1 : 0;
    }
    CHECK(downs == 1);
    CHECK(ups == 1);

    const TraceScore score = score_trace(script, run, config);
    CHECK(score.expected == "tap");
    CHECK(score.predicted == "tap");
    CHECK(score.contact.accuracy() > 0.95);
    CHECK(score.events.matched == 2);
    CHECK(score.events.false_pos == 0);
    CHECK(score.events.false_neg == 0);
    // Debounce delays detection by n_down frames.
    CHECK(score.events.mean_down_latency_ms() >= 0.0);
    CHECK(score.events.mean_down_latency_ms() <= 50.0);
}

TEST_CASE("identical configs reproduce a run exactly") {
    PipelineConfig config;
    config.seed = 17;
    const GestureScript script = quick_tap();
    const TraceRun a = run_trace(script, config, 3);
    const TraceRun b = run_trace(script, config, 3);
    REQUIRE(a.events.size() == b.events.size());
    for (std::size_t i = 0; i < a.events.size(); ++i) {
        CHECK(a.events[i].t_ms == b.events[i].t_ms);
        CHECK(a.events[i].kind == b.events[i].kind);
    }
    REQUIRE(a.frames.size() == b.frames.size());
    for (std::size_t i = 0; i < a.frames.size(); ++i) {
        REQUIRE(a.frames[i].size() == b.frames[i].size());
        for (std::size_t j = 0; j < a.frames[i].size(); ++j) {
            CHECK(a.frames[i][j].tip_px.x == b.frames[i][j].tip_px.x);
            CHECK(a.frames[i][j].gap_mm.has_value() == b.frames[i][j].gap_mm.has_value());
        }
    }

    // A different noise salt changes pixels but not the observations, since
    // bounded noise cannot cross the segmentation thresholds.
    const TraceRun c = run_trace(script, config, 4);
    REQUIRE(c.events.size() == a.events.size());
    for (std::size_t i = 0; i < a.events.size(); ++i)
        CHECK(a.events[i].t_ms == c.events[i].t_ms);
}

TEST_CASE("the painted fast path matches full rendering") {
    PipelineConfig config;
    config.seed = 23;
    const GestureScript script = quick_tap();

    const TraceRun fast = run_trace(script, config, 1);
    int sunk = 0;
    const TraceRun slow = run_trace(script, config, 1,
                                    [&sunk](int, const Frame&) { ++sunk; });
    CHECK(sunk == static_cast<int>(slow.records.size()));

    REQUIRE(fast.frames.size() == slow.frames.size());
    for (std::size_t i = 0; i < fast.frames.size(); ++i) {
        REQUIRE(fast.frames[i].size() == slow.frames[i].size());
        for (std::size_t j = 0; j < fast.frames[i].size(); ++j) {
            const auto& a = fast.frames[i][j];
            const auto& b = slow.frames[i][j];
            CHECK(a.tip_px.x == b.tip_px.x);
            CHECK(a.tip_px.y == b.tip_px.y);
            CHECK(a.merged == b.merged);
            REQUIRE(a.gap_mm.has_value() == b.gap_mm.has_value());
            if (a.gap_mm) CHECK(*a.gap_mm == *b.gap_mm);
        }
    }
    REQUIRE(fast.events.size() == slow.events.size());
    for (std::size_t i = 0; i < fast.events.size(); ++i)
        CHECK(fast.events[i].t_ms == slow.events[i].t_ms);
}

TEST_CASE("a small corpus evaluates with high marks") {
    PipelineConfig config;
    config.seed = 40;
    const auto scripts = make_corpus(4, config.seed);
    const EvalReport report = evaluate_corpus(scripts, config);
    CHECK(report.traces == 4);
    CHECK(report.gesture_total == 4);
    CHECK(report.gesture_correct == 4);
    CHECK(report.frame_accuracy() > 0.97);
    CHECK(report.events.false_pos == 0);
    CHECK(report.events.false_neg == 0);
}

TEST_CASE("the file pipeline writes a self-consistent output tree") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "st_pipe_test";
    fs::remove_all(dir);

    PipelineConfig config;
    config.seed = 9;
    config.frame_period_ms = 20.0; // halve the frame count to keep this quick
    run_pipeline(dir, config, 1);

    CHECK(fs::exists(dir / "config.txt"));
    CHECK(fs::exists(dir / "report.txt"));
    CHECK(fs::exists(dir / "trace_000" / "trace.txt"));
    CHECK(fs::exists(dir / "trace_000" / "observations.txt"));
    CHECK(fs::exists(dir / "trace_000" / "events.txt"));
    CHECK(fs::exists(dir / "trace_000" / "gestures.txt"));
    CHECK(fs::exists(dir / "trace_000" / "frames" / "frame_000000.pgm"));

    const std::string report = slurp(dir / "report.txt");
    CHECK(report.find("frame_accuracy=") != std::string::npos);
    CHECK(report.find("gesture_accuracy=1.000000") != std::string::npos);

    // Re-running with the same config reproduces the text outputs exactly.
    const fs::path dir2 = fs::temp_directory_path() / "st_pipe_test2";
    fs::remove_all(dir2);
    run_pipeline(dir2, config, 1);
    CHECK(slurp(dir / "report.txt") == slurp(dir2 / "report.txt"));
    CHECK(slurp(dir / "trace_000" / "observations.txt") ==
          slurp(dir2 / "trace_000" / "observations.txt"));
    CHECK(slurp(dir / "trace_000" / "frames" / "frame_000010.pgm") ==
          slurp(dir2 / "trace_000" / "frames" / "frame_000010.pgm"));
    fs::remove_all(dir);
    fs::remove_all(dir2);

    CHECK_THROWS_AS(run_pipeline(fs::temp_directory_path() / "st_none", config, 0),
                    ConfigError);
}

TEST_CASE("sweep report formatting and option validation") {
    SweepResult r;
    r.heights_mm = {1.0, 2.0};
    r.shadow.accuracy = {1.0, 1.0};
    r.shadow.minimal_separable_mm = 1.0;
    r.finger_only.accuracy = {0.5, 0.6};
    r.frames_scored = 1234;
    r.warmup_frames = 10;
    std::stringstream buf;
    write_sweep_report(buf, r);
    const std::string text = buf.str();
    CHECK(text.find("sweep shadow h=1.0 acc=1.000000") != std::string::npos);
    CHECK(text.find("sweep finger_only h=2.0 acc=0.600000") != std::string::npos);
    CHECK(text.find("minimal_separable_mm_shadow=1.0") != std::string::npos);
    CHECK(text.find("minimal_separable_mm_finger_only=none") != std::string::npos);

    PipelineConfig config;
    SweepOptions bad;
    bad.heights_mm = {};
    CHECK_THROWS_AS(hover_resolution_sweep(config, bad), ConfigError);
    bad.heights_mm = {-1.0};
    CHECK_THROWS_AS(hover_resolution_sweep(config, bad), ConfigError);
    bad = {};
    bad.traces_per_height = 0;
    CHECK_THROWS_AS(hover_resolution_sweep(config, bad), ConfigError);
}

TEST_CASE("a tiny sweep separates shadow sensing from the monocular cue") {
    PipelineConfig config;
    config.seed = 77;
    SweepOptions options;
    options.heights_mm = {2.0, 8.0};
    options.traces_per_height = 2;
    const SweepResult r = hover_resolution_sweep(config, options);
    REQUIRE(r.shadow.accuracy.size() == 2);
    CHECK(r.shadow.accuracy[0] >= 0.99);
    CHECK(r.shadow.accuracy[1] >= 0.99);
    REQUIRE(r.shadow.minimal_separable_mm.has_value());
    CHECK(*r.shadow.minimal_separable_mm == 2.0);
    // At 2 mm the monocular parallax cue is far below the contact threshold,
    // so the baseline cannot tell hover from touch.
    CHECK(r.finger_only.accuracy[0] < 0.9);
    // 2 heights x 2 classes x 2 traces x (60 - 10 warmup) frames.
    CHECK(r.frames_scored == 400);
}
