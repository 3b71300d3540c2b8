#include "shadowtouch/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace shadowtouch {

double FrameCounts::accuracy() const {
    const long long n = total();
    return n == 0 ? 0.0 : static_cast<double>(tp + tn) / static_cast<double>(n);
}

double FrameCounts::precision() const {
    const long long n = tp + fp;
    return n == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(n);
}

double FrameCounts::recall() const {
    const long long n = tp + fn;
    return n == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(n);
}

void FrameCounts::add(bool truth, bool predicted) {
    if (truth && predicted) ++tp;
    else if (!truth && predicted) ++fp;
    else if (truth && !predicted) ++fn;
    else ++tn;
}

FrameCounts& FrameCounts::operator+=(const FrameCounts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    tn += o.tn;
    return *this;
}

double EventMatchResult::f1() const {
    const double denom = 2.0 * matched + false_pos + false_neg;
    return denom == 0.0 ? 0.0 : 2.0 * matched / denom;
}

double EventMatchResult::mean_down_latency_ms() const {
    return matched_down == 0 ? std::numeric_limits<double>::quiet_NaN()
                             : latency_sum_down_ms / matched_down;
}

double EventMatchResult::mean_up_latency_ms() const {
    return matched_up == 0 ? std::numeric_limits<double>::quiet_NaN()
                           : latency_sum_up_ms / matched_up;
}

EventMatchResult& EventMatchResult::operator+=(const EventMatchResult& o) {
    matched += o.matched;
    false_pos += o.false_pos;
    false_neg += o.false_neg;
    latency_sum_down_ms += o.latency_sum_down_ms;
    latency_sum_up_ms += o.latency_sum_up_ms;
    matched_down += o.matched_down;
    matched_up += o.matched_up;
    return *this;
}

EventMatchResult match_events(const std::vector<TouchEvent>& predicted,
                              const std::vector<TouchEvent>& truth, double tolerance_ms) {
    EventMatchResult result;
    auto lane = [](const std::vector<TouchEvent>& events, int finger, TouchKind kind) {
        std::vector<double> ts;
        for (const auto& e : events)
            if (e.finger_id == finger && e.kind == kind) ts.push_back(e.t_ms);
        std::sort(ts.begin(), ts.end());
        return ts;
    };
    std::vector<int> fingers;
    for (const auto& e : predicted)
        if (e.kind != TouchKind::Move) fingers.push_back(e.finger_id);
    for (const auto& e : truth)
        if (e.kind != TouchKind::Move) fingers.push_back(e.finger_id);
    std::sort(fingers.begin(), fingers.end());
    fingers.erase(std::unique(fingers.begin(), fingers.end()), fingers.end());

    for (int finger : fingers) {
        for (TouchKind kind : {TouchKind::Down, TouchKind::Up}) {
            const auto p = lane(predicted, finger, kind);
            const auto t = lane(truth, finger, kind);
            std::size_t pi = 0, ti = 0;
            while (pi < p.size() && ti < t.size()) {
                const double d = p[pi] - t[ti];
                if (std::abs(d) <= tolerance_ms) {
                    ++result.matched;
                    if (kind == TouchKind::Down) {
                        result.latency_sum_down_ms += d;
                        ++result.matched_down;
                    } else {
                        result.latency_sum_up_ms += d;
                        ++result.matched_up;
                    }
                    ++pi;
                    ++ti;
                } else if (d < 0.0) {
                    ++result.false_pos;
                    ++pi;
                } else {
                    ++result.false_neg;
                    ++ti;
                }
            }
            result.false_pos += static_cast<int>(p.size() - pi);
            result.false_neg += static_cast<int>(t.size() - ti);
        }
    }
    return result;
}

std::string dominant_gesture(const std::vector<GestureEvent>& gestures) {
    std::string best = "none";
    double best_duration = -1.0;
    for (const auto& g : gestures) {
        std::string label;
        switch (g.kind) {
            case GestureKind::Tap: label = "tap"; break;
            case GestureKind::Swipe: label = "swipe"; break;
            case GestureKind::PinchEnd: label = "pinch"; break;
            case GestureKind::PinchUpdate: continue;
        }
        if (g.duration_ms > best_duration) {
            best_duration = g.duration_ms;
            best = label;
        }
    }
    return best;
}

double EvalReport::gesture_accuracy() const {
    return gesture_total == 0 ? 0.0
                              : static_cast<double>(gesture_correct) /
                                    static_cast<double>(gesture_total);
}

void write_report(std::ostream& out, const EvalReport& report) {
    char buf[96];
    out << "# shadowtouch-report v1\n";
    out << "seed=" << report.seed << "\n";
    out << "traces=" << report.traces << "\n";
    out << "frames_scored=" << report.contact.total() << "\n";
    std::snprintf(buf, sizeof(buf), "frame_accuracy=%.6f\n", report.contact.accuracy());
    out << buf;
    out << "contact_tp=" << report.contact.tp << "\n";
    out << "contact_fp=" << report.contact.fp << "\n";
    out << "contact_fn=" << report.contact.fn << "\n";
    out << "contact_tn=" << report.contact.tn << "\n";
    std::snprintf(buf, sizeof(buf), "contact_precision=%.6f\n", report.contact.precision());
    out << buf;
    std::snprintf(buf, sizeof(buf), "contact_recall=%.6f\n", report.contact.recall());
    out << buf;
    out << "events_matched=" << report.events.matched << "\n";
    out << "events_false_pos=" << report.events.false_pos << "\n";
    out << "events_false_neg=" << report.events.false_neg << "\n";
    std::snprintf(buf, sizeof(buf), "event_f1=%.6f\n", report.events.f1());
    out << buf;
    std::snprintf(buf, sizeof(buf), "mean_down_latency_ms=%.4f\n",
                  report.events.mean_down_latency_ms());
    out << buf;
    std::snprintf(buf, sizeof(buf), "mean_up_latency_ms=%.4f\n",
                  report.events.mean_up_latency_ms());
    out << buf;
    out << "gesture_total=" << report.gesture_total << "\n";
    out << "gesture_correct=" << report.gesture_correct << "\n";
    std::snprintf(buf, sizeof(buf), "gesture_accuracy=%.6f\n", report.gesture_accuracy());
    out << buf;
    for (const auto& [cell, count] : report.confusion)
        out << "confusion " << cell.first << " " << cell.second << " " << count << "\n";
}

} // namespace shadowtouch
