#include "shadowtouch/sweep.hpp"

#include <cstdio>
#include <ostream>

#include "shadowtouch/errors.hpp"
#include "shadowtouch/pipeline.hpp"
#include "shadowtouch/rng.hpp"

namespace shadowtouch {

namespace {

// A finger parked at constant height: lateral tremor while airborne, planted
// when touching, exactly like the scripted traces behave in steady state.
std::vector<HandTraceRecord> steady_records(Vec2 anchor, double height_mm, int frames,
                                            double period_ms, double jitter_sigma_mm, Rng& rng) {
    std::vector<HandTraceRecord> records;
    records.reserve(static_cast<std::size_t>(frames));
    const bool contact = height_mm <= kContactEpsMm;
    for (int i = 0; i < frames; ++i) {
        FingerSample finger;
        finger.finger_id = kFingerIndex;
        Vec2 pos = anchor;
        if (!contact) {
            pos.x += rng.normal(0.0, jitter_sigma_mm);
            pos.y += rng.normal(0.0, jitter_sigma_mm);
        }
        finger.tip = {pos.x, pos.y, contact ? 0.0 : height_mm};
        finger.contact = contact;
        records.push_back({static_cast<double>(i) * period_ms, {finger}});
    }
    return records;
}

} // namespace

SweepResult hover_resolution_sweep(const PipelineConfig& config, const SweepOptions& options) {
    config.validate();
    if (options.traces_per_height < 1)
        throw ConfigError("sweep needs at least one trace per height");
    if (options.heights_mm.empty()) throw ConfigError("sweep needs at least one height");
    for (double h : options.heights_mm)
        if (!(h > kContactEpsMm)) throw ConfigError("sweep heights must exceed the contact zone");
    if (options.trace_frames <= options.warmup_frames)
        throw ConfigError("sweep traces must outlast the warmup");

    SweepResult result;
    result.heights_mm = options.heights_mm;
    result.warmup_frames = options.warmup_frames;

    for (std::size_t hi = 0; hi < options.heights_mm.size(); ++hi) {
        const double h = options.heights_mm[hi];
        FrameCounts shadow_counts, finger_counts;
        for (int k = 0; k < options.traces_per_height; ++k) {
            for (int regime = 0; regime < 2; ++regime) { // 0 = hover at h, 1 = contact
                const std::uint64_t salt =
                    hi * 0x1000ULL + static_cast<std::uint64_t>(k) * 2ULL +
                    static_cast<std::uint64_t>(regime);
                Rng rng(derive_seed(config.seed, 0x50ee0000ULL + salt));
                const Vec2 anchor{rng.uniform(-15.0, 60.0), rng.uniform(-55.0, 55.0)};
                const TraceRun run = run_records(
                    steady_records(anchor, regime == 0 ? h : 0.0, options.trace_frames,
                                   config.frame_period_ms, config.noise.jitter_sigma_mm, rng),
                    config, 0xee0000ULL + salt);

                const TrackedTimeline* timeline = nullptr;
                if (!run.timelines.empty()) timeline = &run.timelines.front();

                ContactFsm shadow_fsm(config.touch, 0);
                ContactFsm finger_fsm(config.touch, 0);
                for (std::size_t i = 0; i < run.records.size(); ++i) {
                    const bool truth = run.records[i].fingers[0].contact;
                    GapSample shadow_sample{run.records[i].t_ms, std::nullopt, anchor};
                    GapSample finger_sample{run.records[i].t_ms, std::nullopt, anchor};
                    if (timeline != nullptr) {
                        const int rel = static_cast<int>(i) - timeline->first_frame;
                        if (rel >= 0 && rel < static_cast<int>(timeline->samples.size())) {
                            const GapSample& s = timeline->samples[static_cast<std::size_t>(rel)];
                            shadow_sample = s;
                            // Apparent lateral displacement from the anchor is
                            // the height cue available without shadows.
                            finger_sample = {s.t_ms, (s.pos_mm - anchor).norm(), s.pos_mm};
                        }
                    }
                    shadow_fsm.step(shadow_sample);
                    finger_fsm.step(finger_sample);
                    if (static_cast<int>(i) < options.warmup_frames) continue;
                    shadow_counts.add(truth, shadow_fsm.in_contact());
                    finger_counts.add(truth, finger_fsm.in_contact());
                }
            }
        }
        result.shadow.accuracy.push_back(shadow_counts.accuracy());
        result.finger_only.accuracy.push_back(finger_counts.accuracy());
        result.frames_scored += shadow_counts.total();
    }

    auto finalize = [&](SweepMethodResult& m) {
        for (std::size_t i = 0; i < m.accuracy.size(); ++i) {
            if (!m.minimal_separable_mm && m.accuracy[i] >= 0.99)
                m.minimal_separable_mm = result.heights_mm[i];
            if (i > 0 && m.accuracy[i] < m.accuracy[i - 1] - 1e-9) ++m.monotonicity_violations;
        }
    };
    finalize(result.shadow);
    finalize(result.finger_only);
    return result;
}

void write_sweep_report(std::ostream& out, const SweepResult& result) {
    char buf[96];
    out << "# shadowtouch-sweep v1\n";
    out << "surrogate=synthetic\n";
    out << "warmup_frames=" << result.warmup_frames << "\n";
    out << "frames_scored=" << result.frames_scored << "\n";
    for (std::size_t i = 0; i < result.heights_mm.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "sweep shadow h=%.1f acc=%.6f\n", result.heights_mm[i],
                      result.shadow.accuracy[i]);
        out << buf;
    }
    for (std::size_t i = 0; i < result.heights_mm.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "sweep finger_only h=%.1f acc=%.6f\n",
                      result.heights_mm[i], result.finger_only.accuracy[i]);
        out << buf;
    }
    auto emit_min = [&](const char* name, const SweepMethodResult& m) {
        if (m.minimal_separable_mm) {
            std::snprintf(buf, sizeof(buf), "minimal_separable_mm_%s=%.1f\n", name,
                          *m.minimal_separable_mm);
            out << buf;
        } else {
            out << "minimal_separable_mm_" << name << "=none\n";
        }
        out << "monotonicity_violations_" << name << "=" << m.monotonicity_violations << "\n";
    };
    emit_min("shadow", result.shadow);
    emit_min("finger_only", result.finger_only);
}

} // namespace shadowtouch
