#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "shadowtouch/gesture.hpp"
#include "shadowtouch/touchfsm.hpp"

namespace shadowtouch {

struct FrameCounts {
    long long tp = 0;
    long long fp = 0;
    long long fn = 0;
    long long tn = 0;

    long long total() const { return tp + fp + fn + tn; }
    double accuracy() const;
    double precision() const;
    double recall() const;

    void add(bool truth, bool predicted);
    FrameCounts& operator+=(const FrameCounts& o);
};

struct EventMatchResult {
    int matched = 0;
    int false_pos = 0;
    int false_neg = 0;
    double latency_sum_down_ms = 0.0;
    double latency_sum_up_ms = 0.0;
    int matched_down = 0;
    int matched_up = 0;

    double f1() const;
    double mean_down_latency_ms() const;
    double mean_up_latency_ms() const;
    EventMatchResult& operator+=(const EventMatchResult& o);
};

/// Greedy chronological matching of Down/Up events per (finger, kind);
/// a predicted event matches the nearest unconsumed truth event within
/// tolerance_ms. Move events are ignored. Latency is predicted minus truth.
EventMatchResult match_events(const std::vector<TouchEvent>& predicted,
                              const std::vector<TouchEvent>& truth, double tolerance_ms);

/// Collapses a trace's recognized gestures to one label for scoring:
/// the completing gesture (tap / swipe / pinch_end) with the longest
/// duration wins; "none" when nothing completed.
std::string dominant_gesture(const std::vector<GestureEvent>& gestures);

struct EvalReport {
    std::uint64_t seed = 0;
    int traces = 0;
    FrameCounts contact;
    EventMatchResult events;
    int gesture_correct = 0;
    int gesture_total = 0;
    std::map<std::pair<std::string, std::string>, int> confusion;

    double frame_accuracy() const { return contact.accuracy(); }
    double gesture_accuracy() const;
};

/// key=value lines plus one "confusion <expected> <predicted> <count>" line
/// per non-empty cell.
void write_report(std::ostream& out, const EvalReport& report);

} // namespace shadowtouch
