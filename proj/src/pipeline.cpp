#include "shadowtouch/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>

#include "shadowtouch/errors.hpp"
#include "shadowtouch/pgm.hpp"
#include "shadowtouch/rng.hpp"

namespace shadowtouch {

bool noise_preserves_classes(int noise_bound, const SegmentationThresholds& thresholds) {
    const int b = noise_bound;
    return 255 - b >= thresholds.finger_min &&
           static_cast<int>(kIntensityBackground) + b < thresholds.finger_min &&
           static_cast<int>(kIntensityBackground) - b > thresholds.shadow_max &&
           static_cast<int>(kIntensityShadow) + b <= thresholds.shadow_max;
}

TraceRun run_trace(const GestureScript& script, const PipelineConfig& config,
                   std::uint64_t noise_salt,
                   const std::function<void(int, const Frame&)>& frame_sink) {
    return run_records(generate_trace(script, config.frame_period_ms, config.noise.jitter_sigma_mm,
                                      config.scene),
                       config, noise_salt, frame_sink);
}

TraceRun run_records(std::vector<HandTraceRecord> records, const PipelineConfig& config,
                     std::uint64_t noise_salt,
                     const std::function<void(int, const Frame&)>& frame_sink) {
    config.validate();
    TraceRun run;
    run.records = std::move(records);

    NoiseModel noise = config.noise;
    noise.seed = derive_seed(config.seed, 0xf0000000ULL + noise_salt);
    const FrameRenderer renderer(config.scene, noise);
    ShadowSensor sensor(config.scene, config.segmentation);
    const int width = config.scene.camera.width;
    const int height = config.scene.camera.height;
    const bool fast = !frame_sink && noise_preserves_classes(renderer.noise_bound(),
                                                             config.segmentation);

    std::vector<std::uint8_t> buf;
    if (fast)
        buf.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height),
                   kIntensityBackground);

    struct Partial {
        TrackedTimeline timeline;
        Vec2 last_pos;
    };
    std::map<int, Partial> partials;

    run.frames.reserve(run.records.size());
    for (int i = 0; i < static_cast<int>(run.records.size()); ++i) {
        const HandTraceRecord& rec = run.records[static_cast<std::size_t>(i)];
        std::vector<FingerObservation> obs;
        if (fast) {
            const PixelRect roi = renderer.paint(rec, buf);
            obs = sensor.process(buf.data(), width, height, rec.t_ms, &roi);
            for (int v = roi.v0; v < roi.v1; ++v) {
                std::uint8_t* row = buf.data() + static_cast<std::size_t>(v) *
                                                     static_cast<std::size_t>(width);
                std::fill(row + roi.u0, row + roi.u1, kIntensityBackground);
            }
        } else {
            const Frame frame = renderer.render(rec);
            if (frame_sink) frame_sink(i, frame);
            obs = sensor.process(frame);
        }
        for (const auto& o : obs) {
            auto it = partials.find(o.finger_id);
            if (it == partials.end()) {
                Partial p;
                p.timeline.track_id = o.finger_id;
                p.timeline.first_frame = i;
                it = partials.emplace(o.finger_id, std::move(p)).first;
            }
            Partial& p = it->second;
            // Backfill unobserved frames so samples stay frame-aligned.
            const int have = p.timeline.first_frame +
                             static_cast<int>(p.timeline.samples.size());
            for (int miss = have; miss < i; ++miss)
                p.timeline.samples.push_back(
                    {run.records[static_cast<std::size_t>(miss)].t_ms, std::nullopt, p.last_pos});
            p.last_pos = unproject_on_surface(o.tip_px, config.scene.camera);
            p.timeline.samples.push_back({o.t_ms, o.gap_mm, p.last_pos});
        }
        run.frames.push_back(std::move(obs));
    }

    std::vector<FingerTimeline> fsm_input;
    for (auto& [id, p] : partials) {
        run.timelines.push_back(std::move(p.timeline));
        fsm_input.push_back({id, run.timelines.back().samples});
    }
    TraceClassification cls = classify_trace(fsm_input, config.touch);
    run.contact = std::move(cls.contact);
    run.events = std::move(cls.events);
    run.gestures = recognize(run.events, config.gesture);
    return run;
}

std::string expected_gesture_label(ScriptKind kind) {
    switch (kind) {
        case ScriptKind::tap:
        case ScriptKind::type_key: return "tap";
        case ScriptKind::swipe:
        case ScriptKind::cursor_swipe: return "swipe";
        case ScriptKind::pinch: return "pinch";
    }
    return "tap";
}

std::vector<TouchEvent> truth_events(const std::vector<HandTraceRecord>& records) {
    std::map<int, bool> down;
    std::vector<TouchEvent> events;
    for (const auto& rec : records) {
        for (const auto& f : rec.fingers) {
            bool& state = down[f.finger_id];
            if (f.contact && !state) {
                state = true;
                events.push_back({TouchKind::Down, f.finger_id, rec.t_ms, f.tip.xy()});
            } else if (!f.contact && state) {
                state = false;
                events.push_back({TouchKind::Up, f.finger_id, rec.t_ms, f.tip.xy()});
            }
        }
    }
    return events;
}

TraceScore score_trace(const GestureScript& script, const TraceRun& run,
                       const PipelineConfig& config) {
    TraceScore score;
    score.expected = expected_gesture_label(script.kind);
    score.predicted = dominant_gesture(run.gestures);

    // Rank truth fingers and tracks by mean lateral position; equal ranks map
    // to each other. Corpus geometries keep the order stable over a trace.
    const std::size_t n_frames = run.records.size();
    std::map<int, double> truth_mean_x;
    std::map<int, int> truth_count;
    for (const auto& rec : run.records)
        for (const auto& f : rec.fingers) {
            truth_mean_x[f.finger_id] += f.tip.x;
            ++truth_count[f.finger_id];
        }
    for (auto& [id, sum] : truth_mean_x) sum /= truth_count[id];

    std::vector<std::pair<double, int>> truth_rank;
    for (const auto& [id, mx] : truth_mean_x) truth_rank.emplace_back(mx, id);
    std::sort(truth_rank.begin(), truth_rank.end());

    std::vector<std::pair<double, int>> track_rank;
    for (std::size_t k = 0; k < run.timelines.size(); ++k) {
        const auto& tl = run.timelines[k];
        double sum = 0.0;
        for (const auto& s : tl.samples) sum += s.pos_mm.x;
        track_rank.emplace_back(sum / static_cast<double>(tl.samples.size()), tl.track_id);
    }
    std::sort(track_rank.begin(), track_rank.end());

    std::map<int, int> track_to_truth; // track id -> truth finger id
    for (std::size_t k = 0; k < truth_rank.size() && k < track_rank.size(); ++k)
        track_to_truth[track_rank[k].second] = truth_rank[k].second;

    // Frame-level contact labels per (frame, truth finger).
    std::map<int, const TrackedTimeline*> truth_timeline;
    std::map<int, const std::vector<bool>*> truth_labels;
    for (std::size_t k = 0; k < run.timelines.size(); ++k) {
        const int track = run.timelines[k].track_id;
        const auto it = track_to_truth.find(track);
        if (it == track_to_truth.end()) continue;
        truth_timeline[it->second] = &run.timelines[k];
        truth_labels[it->second] = &run.contact[k];
    }
    for (std::size_t i = 0; i < n_frames; ++i) {
        for (const auto& f : run.records[i].fingers) {
            bool predicted = false;
            const auto it = truth_timeline.find(f.finger_id);
            if (it != truth_timeline.end()) {
                const TrackedTimeline& tl = *it->second;
                const int rel = static_cast<int>(i) - tl.first_frame;
                if (rel >= 0 && rel < static_cast<int>(tl.samples.size()))
                    predicted = (*truth_labels[f.finger_id])[static_cast<std::size_t>(rel)];
            }
            score.contact.add(f.contact, predicted);
        }
    }

    // Event matching in truth finger ids; events from unmapped tracks keep a
    // synthetic id so they surface as false positives.
    std::vector<TouchEvent> remapped;
    remapped.reserve(run.events.size());
    for (TouchEvent e : run.events) {
        const auto it = track_to_truth.find(e.finger_id);
        e.finger_id = it != track_to_truth.end() ? it->second : 1000 + e.finger_id;
        remapped.push_back(e);
    }
    // Three-frame matching window, in line with the event-matching contract.
    score.events = match_events(remapped, truth_events(run.records), 3.0 * config.frame_period_ms);
    return score;
}

EvalReport evaluate_corpus(const std::vector<GestureScript>& scripts,
                           const PipelineConfig& config) {
    EvalReport report;
    report.seed = config.seed;
    report.traces = static_cast<int>(scripts.size());
    for (std::size_t i = 0; i < scripts.size(); ++i) {
        const TraceRun run = run_trace(scripts[i], config, i);
        const TraceScore score = score_trace(scripts[i], run, config);
        report.contact += score.contact;
        report.events += score.events;
        ++report.gesture_total;
        if (score.expected == score.predicted) ++report.gesture_correct;
        ++report.confusion[{score.expected, score.predicted}];
    }
    return report;
}

void run_pipeline(const std::filesystem::path& out_dir, const PipelineConfig& config,
                  int n_traces) {
    namespace fs = std::filesystem;
    config.validate();
    if (n_traces < 1) throw ConfigError("pipeline needs at least one trace");
    fs::create_directories(out_dir);
    {
        std::ofstream out(out_dir / "config.txt");
        if (!out) throw DataError("cannot write " + (out_dir / "config.txt").string());
        serialize_config(out, config);
    }

    const auto scripts = make_corpus(n_traces, config.seed);
    EvalReport report;
    report.seed = config.seed;
    report.traces = n_traces;

    for (int i = 0; i < n_traces; ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "trace_%03d", i);
        const fs::path trace_dir = out_dir / name;
        const fs::path frames_dir = trace_dir / "frames";
        fs::create_directories(frames_dir);

        const auto sink = [&frames_dir](int index, const Frame& frame) {
            write_pgm((frames_dir / frame_filename(index)).string(), frame);
        };
        const TraceRun run = run_trace(scripts[static_cast<std::size_t>(i)], config,
                                       static_cast<std::uint64_t>(i), sink);

        {
            std::ofstream out(trace_dir / "trace.txt");
            TraceFile tf;
            tf.label = scripts[static_cast<std::size_t>(i)].label;
            tf.frame_period_ms = config.frame_period_ms;
            tf.records = run.records;
            write_trace(out, tf);
        }
        {
            std::ofstream out(trace_dir / "observations.txt");
            std::vector<FingerObservation> flat;
            for (const auto& frame_obs : run.frames)
                flat.insert(flat.end(), frame_obs.begin(), frame_obs.end());
            write_observations(out, flat);
        }
        {
            std::ofstream out(trace_dir / "events.txt");
            write_events(out, run.events);
        }
        {
            std::ofstream out(trace_dir / "gestures.txt");
            write_gestures(out, run.gestures);
        }

        const TraceScore score = score_trace(scripts[static_cast<std::size_t>(i)], run, config);
        report.contact += score.contact;
        report.events += score.events;
        ++report.gesture_total;
        if (score.expected == score.predicted) ++report.gesture_correct;
        ++report.confusion[{score.expected, score.predicted}];
    }

    std::ofstream out(out_dir / "report.txt");
    if (!out) throw DataError("cannot write " + (out_dir / "report.txt").string());
    write_report(out, report);
}

} // namespace shadowtouch
