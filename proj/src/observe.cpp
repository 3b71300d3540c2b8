#include "shadowtouch/observe.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "shadowtouch/errors.hpp"

namespace shadowtouch {

namespace {

constexpr double kTrackGatePx = 30.0;
constexpr int kTrackMissLimit = 10;
constexpr double kNearMatchMm = 2.0;
constexpr double kDirectionCos = 0.5;

// A neighbouring finger's sprite paints over shadow pixels, so a shadow can
// vanish while the finger is still raised. The occluder probe asks whether any
// other finger blob sits close enough to the shadow's expected path (a ray
// away from the light, up to the displacement a plausible height produces) to
// have swallowed it. Without an occluder, a missing shadow is a merge.
constexpr double kOccluderReachMm = 100.0;
constexpr double kOccluderBodyMm = 40.0; // finger sprite length prior
constexpr double kOccluderPadMm = 16.0;  // capsule radius + shadow width + slack

// With an occluder present, a missing shadow is only read as a merge when the
// gap evidence was recent, already close, and still closing; anything else is
// occlusion and the gap stays unknown. Gap memory itself is rate-limited:
// a residual sliver of a half-covered shadow can pair at a wildly wrong
// distance, and one such reading must not rewrite the history.
constexpr double kGapRateMmPerFrame = 20.0;
constexpr int kGapStaleFrames = 3;
constexpr double kMergeWindowMm = 15.0;
// A lifting finger's gap climbs several mm per frame; a landing finger's
// crescent of shadow can wobble a reading upward once. Only a rise that
// persists across the history window reads as a lift.
constexpr double kOpenStepMm = 0.6; // above one tip-quantization step
constexpr double kOpenTrendMm = 1.2;

double segment_distance(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1) {
    const Vec2 u = a1 - a0;
    const Vec2 v = b1 - b0;
    const Vec2 w = a0 - b0;
    const double a = u.dot(u), b = u.dot(v), c = v.dot(v);
    const double d = u.dot(w), e = v.dot(w);
    const double den = a * c - b * b;
    double s = den > 1e-12 ? std::clamp((b * e - c * d) / den, 0.0, 1.0) : 0.0;
    double t = c > 1e-12 ? std::clamp((b * s + e) / c, 0.0, 1.0) : 0.0;
    // Re-clamp s against the chosen t (closest-point iteration converges in
    // one pass for segments).
    s = a > 1e-12 ? std::clamp((b * t - d) / a, 0.0, 1.0) : 0.0;
    const Vec2 diff = (a0 + u * s) - (b0 + v * t);
    return diff.norm();
}

} // namespace

std::vector<std::pair<int, int>> match_fingers_to_shadows(const std::vector<Vec2>& finger_tips,
                                                          const std::vector<Vec2>& shadow_tips,
                                                          const SceneConfig& scene) {
    std::vector<std::vector<std::pair<int, double>>> options(finger_tips.size());
    const Vec2 light_ground = scene.light.position.xy();
    for (int fi = 0; fi < static_cast<int>(finger_tips.size()); ++fi) {
        const Vec2 tip_mm = unproject_on_surface(finger_tips[static_cast<std::size_t>(fi)],
                                                 scene.camera);
        Vec2 away = tip_mm - light_ground;
        const double away_len = away.norm();
        if (away_len > 1e-12) away = away * (1.0 / away_len);
        for (int si = 0; si < static_cast<int>(shadow_tips.size()); ++si) {
            const Vec2 sh_mm = unproject_on_surface(shadow_tips[static_cast<std::size_t>(si)],
                                                    scene.camera);
            const Vec2 delta = sh_mm - tip_mm;
            const double dist = delta.norm();
            if (dist > kNearMatchMm && away_len > 1e-12 &&
                delta.dot(away) < kDirectionCos * dist)
                continue;
            options[static_cast<std::size_t>(fi)].emplace_back(si, dist);
        }
    }
    // Exact one-to-one assignment: most pairs first, then least total
    // squared distance. Greedy nearest-first can cross-pair two hovering
    // fingers whose shadows fall near each other's neighbour; the crossed
    // exchange costs more under a convex cost (strictly, even when the
    // scene is collinear and plain distances tie), so the optimum keeps
    // shadows with their own fingers. Finger count is tiny, so the search
    // is exhaustive.
    const int n = static_cast<int>(finger_tips.size());
    std::vector<char> used(shadow_tips.size(), 0);
    std::vector<std::pair<int, int>> cur, best;
    double best_sum = 0.0;
    auto search = [&](auto&& self, int fi, double sum) -> void {
        if (fi == n) {
            if (cur.size() > best.size() ||
                (cur.size() == best.size() && !cur.empty() && sum < best_sum)) {
                best = cur;
                best_sum = sum;
            }
            return;
        }
        for (const auto& [si, dist] : options[static_cast<std::size_t>(fi)]) {
            if (used[static_cast<std::size_t>(si)]) continue;
            used[static_cast<std::size_t>(si)] = 1;
            cur.emplace_back(fi, si);
            self(self, fi + 1, sum + dist * dist);
            cur.pop_back();
            used[static_cast<std::size_t>(si)] = 0;
        }
        self(self, fi + 1, sum);
    };
    search(search, 0, 0.0);
    std::sort(best.begin(), best.end());
    return best;
}

std::optional<double> measure_gap(const Vec2& tip_px, const std::optional<Vec2>& shadow_tip_px,
                                  bool merged, const CameraModel& camera) {
    if (merged) return 0.0;
    if (!shadow_tip_px) return std::nullopt;
    const Vec2 tip_mm = unproject_on_surface(tip_px, camera);
    const Vec2 sh_mm = unproject_on_surface(*shadow_tip_px, camera);
    return (sh_mm - tip_mm).norm();
}

ShadowSensor::ShadowSensor(const SceneConfig& scene, const SegmentationThresholds& thresholds)
    : scene_(scene), thresholds_(thresholds) {
    scene_.validate();
    thresholds_.validate();
}

void ShadowSensor::reset() {
    tracks_.clear();
    next_id_ = 0;
    frame_no_ = 0;
}

std::vector<FingerObservation> ShadowSensor::process(const Frame& frame) {
    return process(frame.pixels.data(), frame.width, frame.height, frame.t_ms, nullptr);
}

std::vector<FingerObservation> ShadowSensor::process(const std::uint8_t* pixels, int width,
                                                     int height, double t_ms,
                                                     const PixelRect* roi) {
    const SegmentationResult seg = segment(pixels, width, height, thresholds_, roi);
    const std::vector<Vec2> tips = refined_tips(seg.fingers);
    const std::vector<Vec2> shadow_tips = refined_tips(seg.shadows);

    // Nearest-neighbour track assignment, closest pairs first.
    struct Candidate {
        double dist;
        int ti;
        int fi;
    };
    std::vector<Candidate> candidates;
    for (int ti = 0; ti < static_cast<int>(tracks_.size()); ++ti)
        for (int fi = 0; fi < static_cast<int>(tips.size()); ++fi) {
            const double d = (tips[static_cast<std::size_t>(fi)] - tracks_[static_cast<std::size_t>(ti)].last_px).norm();
            if (d <= kTrackGatePx) candidates.push_back({d, ti, fi});
        }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.dist != b.dist) return a.dist < b.dist;
        if (a.ti != b.ti) return a.ti < b.ti;
        return a.fi < b.fi;
    });
    std::vector<int> tip_id(tips.size(), -1);
    std::vector<bool> track_used(tracks_.size(), false);
    for (const auto& c : candidates) {
        if (track_used[static_cast<std::size_t>(c.ti)] || tip_id[static_cast<std::size_t>(c.fi)] >= 0)
            continue;
        track_used[static_cast<std::size_t>(c.ti)] = true;
        Track& track = tracks_[static_cast<std::size_t>(c.ti)];
        tip_id[static_cast<std::size_t>(c.fi)] = track.id;
        track.last_px = tips[static_cast<std::size_t>(c.fi)];
        track.missed = 0;
    }
    // New tracks for unmatched tips, ids assigned left-to-right.
    std::vector<int> fresh;
    for (int fi = 0; fi < static_cast<int>(tips.size()); ++fi)
        if (tip_id[static_cast<std::size_t>(fi)] < 0) fresh.push_back(fi);
    std::sort(fresh.begin(), fresh.end(), [&](int a, int b) {
        const Vec2& pa = tips[static_cast<std::size_t>(a)];
        const Vec2& pb = tips[static_cast<std::size_t>(b)];
        if (pa.x != pb.x) return pa.x < pb.x;
        return pa.y < pb.y;
    });
    for (int fi : fresh) {
        tip_id[static_cast<std::size_t>(fi)] = next_id_;
        tracks_.push_back({next_id_++, tips[static_cast<std::size_t>(fi)], 0, {}, 0});
        track_used.push_back(true);
    }
    for (std::size_t ti = 0; ti < tracks_.size(); ++ti)
        if (!track_used[ti]) ++tracks_[ti].missed;
    std::erase_if(tracks_, [](const Track& t) { return t.missed > kTrackMissLimit; });

    const auto pairs = match_fingers_to_shadows(tips, shadow_tips, scene_);
    std::vector<int> finger_shadow(tips.size(), -1);
    for (const auto& [fi, si] : pairs) finger_shadow[static_cast<std::size_t>(fi)] = si;

    ++frame_no_;
    const Vec2 light_ground = scene_.light.position.xy();
    std::vector<Vec2> tips_mm(tips.size());
    for (std::size_t k = 0; k < tips.size(); ++k)
        tips_mm[k] = unproject_on_surface(tips[k], scene_.camera);

    std::vector<FingerObservation> observations;
    observations.reserve(tips.size());
    for (int fi = 0; fi < static_cast<int>(tips.size()); ++fi) {
        FingerObservation obs;
        obs.finger_id = tip_id[static_cast<std::size_t>(fi)];
        obs.t_ms = t_ms;
        obs.tip_px = tips[static_cast<std::size_t>(fi)];
        Track* track = nullptr;
        for (auto& t : tracks_)
            if (t.id == obs.finger_id) track = &t;
        const int si = finger_shadow[static_cast<std::size_t>(fi)];
        if (si >= 0) {
            obs.shadow_tip_px = shadow_tips[static_cast<std::size_t>(si)];
            obs.merged = false;
            obs.gap_mm = measure_gap(obs.tip_px, obs.shadow_tip_px, false, scene_.camera);
            if (track) {
                const double window = kGapRateMmPerFrame *
                                      static_cast<double>(std::max(1, frame_no_ - track->gap_frame));
                if (!track->gap_mm[0] || std::abs(*obs.gap_mm - *track->gap_mm[0]) <= window) {
                    track->gap_mm = {*obs.gap_mm, track->gap_mm[0], track->gap_mm[1]};
                    track->gap_frame = frame_no_;
                }
            }
        } else {
            // No shadow in sight: merged, unless another finger sits in this
            // one's shadow path and the gap evidence had not closed in yet.
            const Vec2& tip_mm = tips_mm[static_cast<std::size_t>(fi)];
            Vec2 away = tip_mm - light_ground;
            const double away_len = away.norm();
            bool occluder = false;
            if (away_len > 1e-12) {
                away = away * (1.0 / away_len);
                const Vec2 cast_end{tip_mm.x + away.x * kOccluderReachMm,
                                    tip_mm.y + away.y * kOccluderReachMm};
                for (std::size_t fj = 0; fj < tips.size(); ++fj) {
                    if (static_cast<int>(fj) == fi) continue;
                    const Vec2 body_end{tips_mm[fj].x, tips_mm[fj].y - kOccluderBodyMm};
                    if (segment_distance(tip_mm, cast_end, tips_mm[fj], body_end) <=
                        kOccluderPadMm) {
                        occluder = true;
                        break;
                    }
                }
            }
            bool merged;
            if (!occluder) {
                merged = true;
            } else if (track && track->gap_mm[0] &&
                       frame_no_ - track->gap_frame <= kGapStaleFrames) {
                const auto& g = track->gap_mm;
                const bool opening = g[2] ? *g[0] > *g[2] + kOpenTrendMm
                                          : g[1] && *g[0] > *g[1] + kOpenStepMm;
                merged = *g[0] <= kMergeWindowMm && !opening;
            } else {
                merged = false;
            }
            obs.merged = merged;
            obs.gap_mm = measure_gap(obs.tip_px, std::nullopt, merged, scene_.camera);
            if (merged && track) {
                track->gap_mm = {0.0, track->gap_mm[0], track->gap_mm[1]};
                track->gap_frame = frame_no_;
            }
        }
        observations.push_back(obs);
    }
    std::sort(observations.begin(), observations.end(),
              [](const FingerObservation& a, const FingerObservation& b) {
                  return a.finger_id < b.finger_id;
              });
    return observations;
}

namespace {

std::string fmt(double v) {
    char buf[40];
    if (std::isnan(v)) return "nan";
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

} // namespace

void write_observations(std::ostream& out, const std::vector<FingerObservation>& observations) {
    out << "# shadowtouch-observations v1\n";
    out << "# t_ms finger_id tip_u tip_v shadow_u shadow_v gap_mm merged\n";
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const auto& o : observations) {
        const Vec2 sh = o.shadow_tip_px.value_or(Vec2{nan, nan});
        const double gap = o.gap_mm.value_or(nan);
        out << fmt(o.t_ms) << ' ' << o.finger_id << ' ' << fmt(o.tip_px.x) << ' '
            << fmt(o.tip_px.y) << ' ' << fmt(sh.x) << ' ' << fmt(sh.y) << ' ' << fmt(gap) << ' '
            << (o.merged ? 1 : 0) << '\n';
    }
}

std::vector<FingerObservation> read_observations(std::istream& in) {
    std::vector<FingerObservation> observations;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        FingerObservation o;
        double shu = 0.0, shv = 0.0, gap = 0.0;
        int merged = 0;
        std::string shu_s, shv_s, gap_s;
        if (!(row >> o.t_ms >> o.finger_id >> o.tip_px.x >> o.tip_px.y >> shu_s >> shv_s >>
              gap_s >> merged))
            throw DataError("observations line " + std::to_string(line_no) + ": malformed row");
        auto parse = [&](const std::string& s, double& v) {
            if (s == "nan") {
                v = std::numeric_limits<double>::quiet_NaN();
                return;
            }
            try {
                v = std::stod(s);
            } catch (const std::exception&) {
                throw DataError("observations line " + std::to_string(line_no) +
                                ": bad number '" + s + "'");
            }
        };
        parse(shu_s, shu);
        parse(shv_s, shv);
        parse(gap_s, gap);
        if (!std::isnan(shu) && !std::isnan(shv)) o.shadow_tip_px = Vec2{shu, shv};
        if (!std::isnan(gap)) o.gap_mm = gap;
        if (merged != 0 && merged != 1)
            throw DataError("observations line " + std::to_string(line_no) +
                            ": merged flag must be 0 or 1");
        o.merged = merged == 1;
        observations.push_back(o);
    }
    return observations;
}

} // namespace shadowtouch
