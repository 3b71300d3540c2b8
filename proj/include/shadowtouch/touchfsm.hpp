#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "shadowtouch/geometry.hpp"

namespace shadowtouch {

struct TouchParams {
    double t_down_mm = 1.0;
    double t_up_mm = 2.5;
    int n_down = 2;
    int n_up = 2;
    double move_eps_mm = 1.0;

    void validate() const;
};

enum class TouchKind { Down, Move, Up };

const char* to_string(TouchKind kind);

struct TouchEvent {
    TouchKind kind = TouchKind::Down;
    int finger_id = 0;
    double t_ms = 0.0;
    Vec2 pos_mm;
};

/// One gap measurement for one finger. An absent gap freezes the detector's
/// debounce counters and contact state; a touching finger still reports Move
/// from pos_mm, which tracks the fingertip unprojected onto the surface.
struct GapSample {
    double t_ms = 0.0;
    std::optional<double> gap_mm;
    Vec2 pos_mm;
};

/// Hysteresis contact detector with run-length debouncing: Down after
/// n_down consecutive samples with gap <= t_down, Up after n_up consecutive
/// samples with gap >= t_up, Move while in contact whenever the position
/// drifts move_eps from the last emitted position. The dead band between
/// the thresholds suppresses chatter.
class ContactFsm {
public:
    ContactFsm(const TouchParams& params, int finger_id);

    /// Consumes one sample; returns the events it triggers (at most one).
    /// Throws DataError on non-increasing timestamps.
    std::vector<TouchEvent> step(const GapSample& sample);

    bool in_contact() const { return contact_; }

private:
    TouchParams params_;
    int finger_id_;
    bool contact_ = false;
    int down_run_ = 0;
    int up_run_ = 0;
    Vec2 last_emit_;
    double last_t_ = 0.0;
    bool has_last_t_ = false;
};

struct FingerTimeline {
    int finger_id = 0;
    std::vector<GapSample> samples;
};

struct TraceClassification {
    /// Per timeline, per sample: contact state after consuming that sample.
    std::vector<std::vector<bool>> contact;
    /// All events across fingers, ordered by (t_ms, finger_id).
    std::vector<TouchEvent> events;
};

TraceClassification classify_trace(const std::vector<FingerTimeline>& timelines,
                                   const TouchParams& params);

void write_events(std::ostream& out, const std::vector<TouchEvent>& events);

std::vector<TouchEvent> read_events(std::istream& in);

} // namespace shadowtouch
