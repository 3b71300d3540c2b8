#include "shadowtouch/gesture.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "shadowtouch/errors.hpp"

namespace shadowtouch {

void GestureParams::validate() const {
    if (!(tap_max_ms > 0.0)) throw ConfigError("tap_max_ms must be positive");
    if (!(tap_max_disp_mm > 0.0)) throw ConfigError("tap_max_disp_mm must be positive");
    if (!(swipe_min_mm > tap_max_disp_mm))
        throw ConfigError("swipe_min_mm must exceed tap_max_disp_mm");
    if (!(two_finger_overlap_ms >= 0.0))
        throw ConfigError("two_finger_overlap_ms must be non-negative");
    if (!(pinch_min_scale_delta > 0.0) || !(pinch_min_rot_rad > 0.0) || !(pinch_min_pan_mm > 0.0))
        throw ConfigError("pinch activation deltas must be positive");
}

PinchComponents pinch_transform(const Vec2& a_start, const Vec2& b_start, const Vec2& a_now,
                                const Vec2& b_now) {
    const Vec2 d0 = b_start - a_start;
    const Vec2 d1 = b_now - a_now;
    const double len0 = d0.norm();
    if (len0 < 1e-9) throw GeometryError("pinch reference points coincide");
    PinchComponents t;
    t.scale = d1.norm() / len0;
    t.rotation_rad = std::atan2(d0.x * d1.y - d0.y * d1.x, d0.x * d1.x + d0.y * d1.y);
    const Vec2 c0 = (a_start + b_start) * 0.5;
    const Vec2 c1 = (a_now + b_now) * 0.5;
    t.pan = c1 - c0;
    return t;
}

Vec2 apply_pinch(const PinchComponents& t, const Vec2& centroid_start, const Vec2& p) {
    const Vec2 r = p - centroid_start;
    const double c = std::cos(t.rotation_rad);
    const double s = std::sin(t.rotation_rad);
    return {centroid_start.x + t.scale * (c * r.x - s * r.y) + t.pan.x,
            centroid_start.y + t.scale * (s * r.x + c * r.y) + t.pan.y};
}

const char* to_string(GestureKind kind) {
    switch (kind) {
        case GestureKind::Tap: return "tap";
        case GestureKind::Swipe: return "swipe";
        case GestureKind::PinchUpdate: return "pinch_update";
        case GestureKind::PinchEnd: return "pinch_end";
    }
    return "tap";
}

namespace {

SwipeDir dominant_direction(const Vec2& delta) {
    if (std::abs(delta.x) >= std::abs(delta.y))
        return delta.x < 0.0 ? SwipeDir::left : SwipeDir::right;
    return delta.y < 0.0 ? SwipeDir::up : SwipeDir::down;
}

} // namespace

GestureRecognizer::GestureRecognizer(const GestureParams& params) : params_(params) {
    params_.validate();
}

void GestureRecognizer::bind_finger_tools(
    const std::vector<std::pair<int, std::string>>& bindings) {
    for (const auto& [finger, tag] : bindings) tools_[finger] = tag;
}

std::vector<std::string> GestureRecognizer::tools_for(const std::vector<int>& fingers) const {
    std::vector<std::string> tags;
    tags.reserve(fingers.size());
    for (int f : fingers) {
        const auto it = tools_.find(f);
        tags.push_back(it == tools_.end() ? "-" : it->second);
    }
    return tags;
}

GestureEvent GestureRecognizer::base_event(GestureKind kind, double t,
                                           const std::vector<int>& fingers) const {
    GestureEvent e;
    e.kind = kind;
    e.t_ms = t;
    e.fingers = fingers;
    e.tools = tools_for(fingers);
    return e;
}

void GestureRecognizer::resolve_single(const Episode& ep, std::vector<GestureEvent>& out) const {
    if (ep.consumed) return;
    const double duration = ep.up_t - ep.down_t;
    const Vec2 delta = ep.up_pos - ep.down_pos;
    if (duration <= params_.tap_max_ms && ep.max_disp <= params_.tap_max_disp_mm) {
        GestureEvent e = base_event(GestureKind::Tap, ep.up_t, {ep.finger});
        e.pos_mm = ep.down_pos;
        e.duration_ms = duration;
        out.push_back(std::move(e));
        return;
    }
    if (delta.norm() >= params_.swipe_min_mm) {
        GestureEvent e = base_event(GestureKind::Swipe, ep.up_t, {ep.finger});
        e.pos_mm = ep.down_pos;
        e.delta_mm = delta;
        e.direction = dominant_direction(delta);
        e.duration_ms = duration;
        out.push_back(std::move(e));
    }
}

void GestureRecognizer::resolve_pair_release(std::vector<GestureEvent>& out) {
    PairState& pair = *pair_;
    const Episode& a = pair.released[0];
    const Episode& b = pair.released[1];
    const double overlap = std::min(a.up_t, b.up_t) - std::max(a.down_t, b.down_t);
    const Vec2 delta_a = a.up_pos - a.down_pos;
    const Vec2 delta_b = b.up_pos - b.down_pos;
    const bool both_swipe = delta_a.norm() >= params_.swipe_min_mm &&
                            delta_b.norm() >= params_.swipe_min_mm &&
                            dominant_direction(delta_a) == dominant_direction(delta_b) &&
                            overlap >= params_.two_finger_overlap_ms;
    const double t_end = std::max(a.up_t, b.up_t);
    std::vector<int> fingers{a.finger, b.finger};
    std::sort(fingers.begin(), fingers.end());
    if (both_swipe) {
        GestureEvent e = base_event(GestureKind::Swipe, t_end, fingers);
        e.pos_mm = (a.down_pos + b.down_pos) * 0.5;
        e.delta_mm = (delta_a + delta_b) * 0.5;
        e.direction = dominant_direction(e.delta_mm);
        e.duration_ms = t_end - std::min(a.down_t, b.down_t);
        out.push_back(std::move(e));
        pair_.reset();
        return;
    }
    const Episode& first = a.finger == pair.finger_a ? a : b;
    const Episode& second = a.finger == pair.finger_a ? b : a;
    // A pan-only pinch lifts both fingers together; when the releases are far
    // apart the trailing finger moved on its own, so the pair resolves
    // per finger instead.
    const bool joint_release = std::abs(a.up_t - b.up_t) <= params_.two_finger_overlap_ms;
    const PinchComponents t =
        pinch_transform(pair.start_a, pair.start_b, first.up_pos, second.up_pos);
    if (joint_release && t.pan.norm() >= params_.pinch_min_pan_mm) {
        GestureEvent e = base_event(GestureKind::PinchEnd, t_end, fingers);
        e.pinch = t;
        e.duration_ms = t_end - pair.start_t;
        out.push_back(std::move(e));
        pair_.reset();
        return;
    }
    resolve_single(a, out);
    resolve_single(b, out);
    pair_.reset();
}

std::vector<GestureEvent> GestureRecognizer::process_group() {
    std::vector<GestureEvent> out;
    bool pair_released_member = false;
    for (const TouchEvent& ev : pending_) {
        switch (ev.kind) {
            case TouchKind::Down: {
                Episode ep;
                ep.finger = ev.finger_id;
                ep.down_t = ev.t_ms;
                ep.down_pos = ev.pos_mm;
                ep.last_pos = ev.pos_mm;
                episodes_[ev.finger_id] = ep;
                if (!pair_) {
                    std::vector<const Episode*> open;
                    for (const auto& [f, e] : episodes_)
                        if (e.open && !e.consumed) open.push_back(&e);
                    if (open.size() == 2) {
                        PairState p;
                        p.finger_a = open[0]->finger;
                        p.finger_b = open[1]->finger;
                        p.start_t = ev.t_ms;
                        p.start_a = open[0]->last_pos;
                        p.start_b = open[1]->last_pos;
                        pair_ = p;
                    }
                }
                break;
            }
            case TouchKind::Move: {
                const auto it = episodes_.find(ev.finger_id);
                if (it == episodes_.end() || !it->second.open) break;
                it->second.last_pos = ev.pos_mm;
                it->second.max_disp = std::max(it->second.max_disp,
                                               (ev.pos_mm - it->second.down_pos).norm());
                if (pair_ && (ev.finger_id == pair_->finger_a || ev.finger_id == pair_->finger_b))
                    pair_->moved = true;
                break;
            }
            case TouchKind::Up: {
                const auto it = episodes_.find(ev.finger_id);
                if (it == episodes_.end() || !it->second.open) break;
                Episode& ep = it->second;
                ep.open = false;
                ep.up_t = ev.t_ms;
                ep.up_pos = ev.pos_mm;
                if (pair_ &&
                    (ev.finger_id == pair_->finger_a || ev.finger_id == pair_->finger_b)) {
                    pair_->released.push_back(ep);
                    pair_released_member = true;
                } else {
                    resolve_single(ep, out);
                }
                if (!pair_ || (ev.finger_id != pair_->finger_a && ev.finger_id != pair_->finger_b))
                    episodes_.erase(it);
                break;
            }
        }
    }

    if (pair_) {
        const auto it_a = episodes_.find(pair_->finger_a);
        const auto it_b = episodes_.find(pair_->finger_b);
        const bool a_open = it_a != episodes_.end() && it_a->second.open;
        const bool b_open = it_b != episodes_.end() && it_b->second.open;
        if (a_open && b_open) {
            const PinchComponents t = pinch_transform(pair_->start_a, pair_->start_b,
                                                      it_a->second.last_pos,
                                                      it_b->second.last_pos);
            // The pair commits to whichever signal crosses first and stays
            // committed: a shape change (scale or rotation) while the pair
            // has barely translated means pinch; translation crossing the
            // pan threshold first means the hand is dragging or swiping and
            // later shape wobble must not start a pinch.
            if (!pair_->active && !pair_->panning) {
                const bool shape = std::abs(t.scale - 1.0) >= params_.pinch_min_scale_delta ||
                                   std::abs(t.rotation_rad) >= params_.pinch_min_rot_rad;
                const double pan = t.pan.norm();
                if (shape && pan < params_.pinch_min_pan_mm)
                    pair_->active = true;
                else if (pan >= params_.pinch_min_pan_mm)
                    pair_->panning = true;
            }
            if (pair_->active && pair_->moved) {
                std::vector<int> fingers{pair_->finger_a, pair_->finger_b};
                std::sort(fingers.begin(), fingers.end());
                GestureEvent e = base_event(GestureKind::PinchUpdate, pending_t_, fingers);
                e.pinch = t;
                e.duration_ms = pending_t_ - pair_->start_t;
                out.push_back(std::move(e));
                pair_->moved = false;
            }
        } else if (pair_released_member && pair_->active) {
            // Pinch ends at the first release; the survivor produces nothing.
            const Episode& gone = pair_->released.front();
            const bool gone_is_a = gone.finger == pair_->finger_a;
            Vec2 final_a = gone_is_a ? gone.up_pos : Vec2{};
            Vec2 final_b = gone_is_a ? Vec2{} : gone.up_pos;
            if (pair_->released.size() == 2) {
                const Episode& other = pair_->released.back();
                (gone_is_a ? final_b : final_a) = other.up_pos;
            } else {
                const auto it_other = episodes_.find(gone_is_a ? pair_->finger_b : pair_->finger_a);
                (gone_is_a ? final_b : final_a) = it_other->second.last_pos;
                it_other->second.consumed = true;
            }
            std::vector<int> fingers{pair_->finger_a, pair_->finger_b};
            std::sort(fingers.begin(), fingers.end());
            GestureEvent e = base_event(GestureKind::PinchEnd, pending_t_, fingers);
            e.pinch = pinch_transform(pair_->start_a, pair_->start_b, final_a, final_b);
            e.duration_ms = pending_t_ - pair_->start_t;
            out.push_back(std::move(e));
            for (int f : {pair_->finger_a, pair_->finger_b}) {
                const auto it = episodes_.find(f);
                if (it != episodes_.end() && !it->second.open) episodes_.erase(it);
            }
            pair_.reset();
        } else if (pair_->released.size() == 2) {
            const int fa = pair_->finger_a;
            const int fb = pair_->finger_b;
            resolve_pair_release(out);
            for (int f : {fa, fb}) {
                const auto it = episodes_.find(f);
                if (it != episodes_.end() && !it->second.open) episodes_.erase(it);
            }
        }
    }

    pending_.clear();
    return out;
}

std::vector<GestureEvent> GestureRecognizer::update(const TouchEvent& event) {
    std::vector<GestureEvent> out;
    if (!pending_.empty() && event.t_ms != pending_t_) out = process_group();
    pending_t_ = event.t_ms;
    pending_.push_back(event);
    return out;
}

std::vector<GestureEvent> GestureRecognizer::finish() {
    std::vector<GestureEvent> out = process_group();
    if (pair_ && !pair_->released.empty() && !pair_->active) {
        // Stream ended with one pair finger still down: resolve what closed.
        for (const Episode& ep : pair_->released) resolve_single(ep, out);
        pair_.reset();
    }
    episodes_.clear();
    return out;
}

std::vector<GestureEvent> recognize(const std::vector<TouchEvent>& events,
                                    const GestureParams& params,
                                    const std::vector<std::pair<int, std::string>>& bindings) {
    GestureRecognizer rec(params);
    rec.bind_finger_tools(bindings);
    std::vector<GestureEvent> out;
    for (const auto& e : events) {
        auto got = rec.update(e);
        out.insert(out.end(), got.begin(), got.end());
    }
    auto got = rec.finish();
    out.insert(out.end(), got.begin(), got.end());
    std::stable_sort(out.begin(), out.end(), [](const GestureEvent& a, const GestureEvent& b) {
        return a.t_ms < b.t_ms;
    });
    return out;
}

namespace {

std::string join_ints(const std::vector<int>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i > 0) s.push_back(',');
        s += std::to_string(xs[i]);
    }
    return s.empty() ? "-" : s;
}

std::string join_strs(const std::vector<std::string>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i > 0) s.push_back(',');
        s += xs[i];
    }
    return s.empty() ? "-" : s;
}

} // namespace

void write_gestures(std::ostream& out, const std::vector<GestureEvent>& gestures) {
    out << "# shadowtouch-gestures v1\n";
    out << "# tap:          t_ms tap x y duration_ms fingers tools\n";
    out << "# swipe:        t_ms swipe dir dx dy x y duration_ms fingers tools\n";
    out << "# pinch_update: t_ms pinch_update scale rot pan_x pan_y duration_ms fingers tools\n";
    out << "# pinch_end:    t_ms pinch_end scale rot pan_x pan_y duration_ms fingers tools\n";
    char buf[256];
    for (const auto& g : gestures) {
        switch (g.kind) {
            case GestureKind::Tap:
                std::snprintf(buf, sizeof(buf), "%.4f tap %.4f %.4f %.4f", g.t_ms, g.pos_mm.x,
                              g.pos_mm.y, g.duration_ms);
                break;
            case GestureKind::Swipe:
                std::snprintf(buf, sizeof(buf), "%.4f swipe %s %.4f %.4f %.4f %.4f %.4f", g.t_ms,
                              to_string(g.direction), g.delta_mm.x, g.delta_mm.y, g.pos_mm.x,
                              g.pos_mm.y, g.duration_ms);
                break;
            case GestureKind::PinchUpdate:
            case GestureKind::PinchEnd:
                std::snprintf(buf, sizeof(buf), "%.4f %s %.4f %.4f %.4f %.4f %.4f", g.t_ms,
                              to_string(g.kind), g.pinch.scale, g.pinch.rotation_rad, g.pinch.pan.x,
                              g.pinch.pan.y, g.duration_ms);
                break;
        }
        out << buf << ' ' << join_ints(g.fingers) << ' ' << join_strs(g.tools) << '\n';
    }
}

namespace {

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    if (s == "-") return out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

} // namespace

std::vector<GestureEvent> read_gestures(std::istream& in) {
    std::vector<GestureEvent> gestures;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        GestureEvent g;
        std::string kind;
        if (!(row >> g.t_ms >> kind))
            throw DataError("gestures line " + std::to_string(line_no) + ": malformed row");
        std::string fingers, tools;
        bool ok = true;
        if (kind == "tap") {
            g.kind = GestureKind::Tap;
            ok = static_cast<bool>(row >> g.pos_mm.x >> g.pos_mm.y >> g.duration_ms);
        } else if (kind == "swipe") {
            g.kind = GestureKind::Swipe;
            std::string dir;
            ok = static_cast<bool>(row >> dir >> g.delta_mm.x >> g.delta_mm.y >> g.pos_mm.x >>
                                   g.pos_mm.y >> g.duration_ms);
            if (ok) {
                if (dir == "left") g.direction = SwipeDir::left;
                else if (dir == "right") g.direction = SwipeDir::right;
                else if (dir == "up") g.direction = SwipeDir::up;
                else if (dir == "down") g.direction = SwipeDir::down;
                else ok = false;
            }
        } else if (kind == "pinch_update" || kind == "pinch_end") {
            g.kind = kind == "pinch_update" ? GestureKind::PinchUpdate : GestureKind::PinchEnd;
            ok = static_cast<bool>(row >> g.pinch.scale >> g.pinch.rotation_rad >> g.pinch.pan.x >>
                                   g.pinch.pan.y >> g.duration_ms);
        } else {
            throw DataError("gestures line " + std::to_string(line_no) + ": unknown kind '" +
                            kind + "'");
        }
        if (!ok || !(row >> fingers >> tools))
            throw DataError("gestures line " + std::to_string(line_no) + ": malformed row");
        for (const auto& f : split_csv(fingers)) {
            try {
                g.fingers.push_back(std::stoi(f));
            } catch (const std::exception&) {
                throw DataError("gestures line " + std::to_string(line_no) + ": bad finger id");
            }
        }
        g.tools = split_csv(tools);
        gestures.push_back(std::move(g));
    }
    return gestures;
}

} // namespace shadowtouch
