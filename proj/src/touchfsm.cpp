#include "shadowtouch/touchfsm.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "shadowtouch/errors.hpp"

namespace shadowtouch {

void TouchParams::validate() const {
    if (!(t_down_mm > 0.0)) throw ConfigError("t_down_mm must be positive");
    if (!(t_up_mm > t_down_mm)) throw ConfigError("t_up_mm must exceed t_down_mm");
    if (n_down < 1 || n_up < 1) throw ConfigError("debounce counts must be at least 1");
    if (!(move_eps_mm > 0.0)) throw ConfigError("move_eps_mm must be positive");
}

const char* to_string(TouchKind kind) {
    switch (kind) {
        case TouchKind::Down: return "down";
        case TouchKind::Move: return "move";
        case TouchKind::Up: return "up";
    }
    return "down";
}

ContactFsm::ContactFsm(const TouchParams& params, int finger_id)
    : params_(params), finger_id_(finger_id) {
    params_.validate();
}

std::vector<TouchEvent> ContactFsm::step(const GapSample& sample) {
    if (has_last_t_ && sample.t_ms <= last_t_)
        throw DataError("touch samples out of order at t=" + std::to_string(sample.t_ms));
    last_t_ = sample.t_ms;
    has_last_t_ = true;

    std::vector<TouchEvent> events;
    if (!sample.gap_mm) {
        // No gap evidence: debounce counters freeze, but the tip is still
        // tracked, so a touching finger keeps reporting motion.
        if (contact_ && (sample.pos_mm - last_emit_).norm() >= params_.move_eps_mm) {
            last_emit_ = sample.pos_mm;
            events.push_back({TouchKind::Move, finger_id_, sample.t_ms, sample.pos_mm});
        }
        return events;
    }
    const double gap = *sample.gap_mm;
    if (!contact_) {
        if (gap <= params_.t_down_mm) {
            if (++down_run_ >= params_.n_down) {
                contact_ = true;
                down_run_ = 0;
                up_run_ = 0;
                last_emit_ = sample.pos_mm;
                events.push_back({TouchKind::Down, finger_id_, sample.t_ms, sample.pos_mm});
            }
        } else {
            down_run_ = 0;
        }
        return events;
    }
    if (gap >= params_.t_up_mm) {
        if (++up_run_ >= params_.n_up) {
            contact_ = false;
            up_run_ = 0;
            down_run_ = 0;
            events.push_back({TouchKind::Up, finger_id_, sample.t_ms, sample.pos_mm});
            return events;
        }
    } else {
        up_run_ = 0;
    }
    if ((sample.pos_mm - last_emit_).norm() >= params_.move_eps_mm) {
        last_emit_ = sample.pos_mm;
        events.push_back({TouchKind::Move, finger_id_, sample.t_ms, sample.pos_mm});
    }
    return events;
}

TraceClassification classify_trace(const std::vector<FingerTimeline>& timelines,
                                   const TouchParams& params) {
    TraceClassification result;
    result.contact.reserve(timelines.size());
    for (const auto& timeline : timelines) {
        ContactFsm fsm(params, timeline.finger_id);
        std::vector<bool> contact;
        contact.reserve(timeline.samples.size());
        for (const auto& sample : timeline.samples) {
            auto events = fsm.step(sample);
            result.events.insert(result.events.end(), events.begin(), events.end());
            contact.push_back(fsm.in_contact());
        }
        result.contact.push_back(std::move(contact));
    }
    std::stable_sort(result.events.begin(), result.events.end(),
                     [](const TouchEvent& a, const TouchEvent& b) {
                         if (a.t_ms != b.t_ms) return a.t_ms < b.t_ms;
                         return a.finger_id < b.finger_id;
                     });
    return result;
}

void write_events(std::ostream& out, const std::vector<TouchEvent>& events) {
    out << "# shadowtouch-events v1\n";
    out << "# t_ms finger_id kind x_mm y_mm\n";
    char buf[128];
    for (const auto& e : events) {
        std::snprintf(buf, sizeof(buf), "%.4f %d %s %.4f %.4f\n", e.t_ms, e.finger_id,
                      to_string(e.kind), e.pos_mm.x, e.pos_mm.y);
        out << buf;
    }
}

std::vector<TouchEvent> read_events(std::istream& in) {
    std::vector<TouchEvent> events;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        TouchEvent e;
        std::string kind;
        if (!(row >> e.t_ms >> e.finger_id >> kind >> e.pos_mm.x >> e.pos_mm.y))
            throw DataError("events line " + std::to_string(line_no) + ": malformed row");
        if (kind == "down") e.kind = TouchKind::Down;
        else if (kind == "move") e.kind = TouchKind::Move;
        else if (kind == "up") e.kind = TouchKind::Up;
        else
            throw DataError("events line " + std::to_string(line_no) + ": unknown kind '" +
                            kind + "'");
        events.push_back(e);
    }
    return events;
}

} // namespace shadowtouch
