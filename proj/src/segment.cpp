#include "shadowtouch/segment.hpp"

#include <algorithm>

#include "shadowtouch/errors.hpp"

namespace shadowtouch {

void SegmentationThresholds::validate() const {
    if (finger_min < 1 || finger_min > 255)
        throw ConfigError("finger_min must be in [1, 255]");
    if (shadow_max < 0 || shadow_max > 254)
        throw ConfigError("shadow_max must be in [0, 254]");
    if (shadow_max >= finger_min)
        throw ConfigError("shadow_max must be below finger_min");
    if (min_component_px < 1)
        throw ConfigError("min_component_px must be positive");
}

namespace {

struct Run {
    int v;
    int u0; // inclusive
    int u1; // exclusive
    int comp;
};

class UnionFind {
public:
    int make() {
        parent_.push_back(static_cast<int>(parent_.size()));
        return parent_.back();
    }
    int find(int x) {
        while (parent_[static_cast<std::size_t>(x)] != x) {
            parent_[static_cast<std::size_t>(x)] =
                parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(x)])];
            x = parent_[static_cast<std::size_t>(x)];
        }
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    }

private:
    std::vector<int> parent_;
};

// Per-class run extraction and row-to-row linking (8-connectivity).
class RunTracker {
public:
    void next_row() {
        prev_.swap(cur_);
        cur_.clear();
        scan_ = 0;
    }

    void add_run(int v, int u0, int u1, UnionFind& uf, std::vector<Run>& all) {
        int comp = -1;
        // Runs touch under 8-connectivity when column spans, each widened by
        // one, overlap: u0 <= p.u1 and p.u0 <= u1 for half-open spans.
        while (scan_ < prev_.size() && prev_[scan_].u1 < u0) ++scan_;
        for (std::size_t i = scan_; i < prev_.size() && prev_[i].u0 <= u1; ++i) {
            if (comp < 0) comp = prev_[i].comp;
            else uf.unite(comp, prev_[i].comp);
        }
        if (comp < 0) comp = uf.make();
        cur_.push_back({v, u0, u1, comp});
        all.push_back(cur_.back());
    }

private:
    std::vector<Run> prev_, cur_;
    std::size_t scan_ = 0;
};

} // namespace

SegmentationResult segment(const std::uint8_t* pixels, int width, int height,
                           const SegmentationThresholds& thresholds, const PixelRect* roi) {
    thresholds.validate();
    if (width <= 0 || height <= 0) throw DataError("segment: empty frame");

    int u_begin = 0, u_end = width, v_begin = 0, v_end = height;
    if (roi != nullptr) {
        u_begin = std::clamp(roi->u0, 0, width);
        u_end = std::clamp(roi->u1, 0, width);
        v_begin = std::clamp(roi->v0, 0, height);
        v_end = std::clamp(roi->v1, 0, height);
    }

    const auto finger_min = static_cast<std::uint8_t>(thresholds.finger_min);
    const auto shadow_max = static_cast<std::uint8_t>(thresholds.shadow_max);

    UnionFind uf_f, uf_s;
    RunTracker rt_f, rt_s;
    std::vector<Run> runs_f, runs_s;

    for (int v = v_begin; v < v_end; ++v) {
        rt_f.next_row();
        rt_s.next_row();
        const std::uint8_t* row = pixels + static_cast<std::size_t>(v) * static_cast<std::size_t>(width);
        int u = u_begin;
        while (u < u_end) {
            const std::uint8_t px = row[u];
            if (px >= finger_min) {
                const int start = u;
                do { ++u; } while (u < u_end && row[u] >= finger_min);
                rt_f.add_run(v, start, u, uf_f, runs_f);
            } else if (px <= shadow_max) {
                const int start = u;
                do { ++u; } while (u < u_end && row[u] <= shadow_max);
                rt_s.add_run(v, start, u, uf_s, runs_s);
            } else {
                ++u;
            }
        }
    }

    auto collect = [&](UnionFind& uf, const std::vector<Run>& runs) {
        std::vector<int> root_slot;
        std::vector<Component> comps;
        for (const auto& run : runs) {
            const int root = uf.find(run.comp);
            if (root >= static_cast<int>(root_slot.size()))
                root_slot.resize(static_cast<std::size_t>(root) + 1, -1);
            int slot = root_slot[static_cast<std::size_t>(root)];
            if (slot < 0) {
                slot = static_cast<int>(comps.size());
                root_slot[static_cast<std::size_t>(root)] = slot;
                Component c;
                c.u_min = run.u0;
                c.u_max = run.u1 - 1;
                c.v_min = run.v;
                c.v_max = run.v;
                c.tip_u = run.u1 - 1;
                c.tip_v = run.v;
                c.tip_row_u0 = run.u0;
                c.tip_row_u1 = run.u1 - 1;
                comps.push_back(c);
            }
            Component& c = comps[static_cast<std::size_t>(slot)];
            const int len = run.u1 - run.u0;
            c.area += len;
            c.u_min = std::min(c.u_min, run.u0);
            c.u_max = std::max(c.u_max, run.u1 - 1);
            c.v_min = std::min(c.v_min, run.v);
            c.v_max = std::max(c.v_max, run.v);
            // Row sums; divided through by area below.
            c.centroid_u += 0.5 * static_cast<double>(len) * static_cast<double>(run.u0 + run.u1 - 1);
            c.centroid_v += static_cast<double>(len) * static_cast<double>(run.v);
            if (run.v > c.tip_v) {
                c.tip_v = run.v;
                c.tip_u = run.u1 - 1;
                c.tip_row_u0 = run.u0;
                c.tip_row_u1 = run.u1 - 1;
            } else if (run.v == c.tip_v) {
                c.tip_u = std::max(c.tip_u, run.u1 - 1);
                c.tip_row_u0 = std::min(c.tip_row_u0, run.u0);
                c.tip_row_u1 = std::max(c.tip_row_u1, run.u1 - 1);
            }
        }
        std::vector<Component> kept;
        for (auto& c : comps) {
            if (c.area < thresholds.min_component_px) continue;
            c.centroid_u /= static_cast<double>(c.area);
            c.centroid_v /= static_cast<double>(c.area);
            kept.push_back(c);
        }
        std::sort(kept.begin(), kept.end(), [](const Component& a, const Component& b) {
            if (a.centroid_u != b.centroid_u) return a.centroid_u < b.centroid_u;
            return a.centroid_v < b.centroid_v;
        });
        return kept;
    };

    SegmentationResult result;
    result.fingers = collect(uf_f, runs_f);
    result.shadows = collect(uf_s, runs_s);
    return result;
}

SegmentationResult segment(const Frame& frame, const SegmentationThresholds& thresholds) {
    return segment(frame.pixels.data(), frame.width, frame.height, thresholds, nullptr);
}

Vec2 locate_tip(const Component& c) {
    return {static_cast<double>(c.tip_u), static_cast<double>(c.tip_v)};
}

std::vector<Vec2> locate_tips(const std::vector<Component>& components) {
    std::vector<Vec2> tips;
    tips.reserve(components.size());
    for (const auto& c : components) tips.push_back(locate_tip(c));
    return tips;
}

Vec2 refined_tip(const Component& c) {
    return {0.5 * static_cast<double>(c.tip_row_u0 + c.tip_row_u1),
            static_cast<double>(c.tip_v)};
}

std::vector<Vec2> refined_tips(const std::vector<Component>& components) {
    std::vector<Vec2> tips;
    tips.reserve(components.size());
    for (const auto& c : components) tips.push_back(refined_tip(c));
    return tips;
}

} // namespace shadowtouch
