#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shadowtouch/script.hpp"
#include "shadowtouch/touchfsm.hpp"

namespace shadowtouch {

struct GestureParams {
    double tap_max_ms = 300.0;
    double tap_max_disp_mm = 5.0;
    double swipe_min_mm = 20.0;
    double two_finger_overlap_ms = 100.0;
    double pinch_min_scale_delta = 0.05;
    double pinch_min_rot_rad = 0.1;
    double pinch_min_pan_mm = 5.0;

    void validate() const;
};

/// Similarity decomposition of a two-point correspondence about the initial
/// centroid: p -> c0 + scale * R(rotation) * (p - c0) + pan.
struct PinchComponents {
    double scale = 1.0;
    double rotation_rad = 0.0;
    Vec2 pan;
};

/// Throws GeometryError when the reference points coincide.
PinchComponents pinch_transform(const Vec2& a_start, const Vec2& b_start, const Vec2& a_now,
                                const Vec2& b_now);

/// Inverse check helper: applies components to a start point.
Vec2 apply_pinch(const PinchComponents& t, const Vec2& centroid_start, const Vec2& p);

enum class GestureKind { Tap, Swipe, PinchUpdate, PinchEnd };

const char* to_string(GestureKind kind);

struct GestureEvent {
    GestureKind kind = GestureKind::Tap;
    double t_ms = 0.0;
    std::vector<int> fingers;
    std::vector<std::string> tools;
    Vec2 pos_mm;                      // tap anchor / swipe start
    Vec2 delta_mm;                    // swipe displacement
    SwipeDir direction = SwipeDir::right;
    double duration_ms = 0.0;
    PinchComponents pinch;
};

/// Streaming recognizer over time-ordered touch events.
///
/// Single-finger episodes resolve at release: short, stationary contact is a
/// Tap; a long enough net displacement is a Swipe; everything else is
/// dropped. The first two concurrently held fingers form a pair: once the
/// pair's similarity transform accumulates enough scale or rotation it is a
/// pinch (PinchUpdate stream while held, PinchEnd at first release).
/// Translation alone never activates the pinch; a pan-only pair resolves at
/// release as a single two-finger Swipe when both fingers swiped the same
/// direction with enough temporal overlap, as a pan PinchEnd when the
/// common translation is large enough, or falls back to per-finger
/// resolution. A gesture therefore produces exactly one interpretation.
class GestureRecognizer {
public:
    explicit GestureRecognizer(const GestureParams& params);

    /// Associates a tool tag with a finger id; events carry the tags of the
    /// participating fingers ("-" when unbound).
    void bind_finger_tools(const std::vector<std::pair<int, std::string>>& bindings);

    /// Feed events in non-decreasing t_ms order.
    std::vector<GestureEvent> update(const TouchEvent& event);

    /// Finalizes pending state at end of stream. Fingers still down yield
    /// no gesture.
    std::vector<GestureEvent> finish();

private:
    struct Episode {
        int finger = 0;
        double down_t = 0.0;
        Vec2 down_pos;
        Vec2 last_pos;
        double max_disp = 0.0;
        bool open = true;
        bool consumed = false;
        double up_t = 0.0;
        Vec2 up_pos;
    };

    struct PairState {
        int finger_a = 0;
        int finger_b = 0;
        double start_t = 0.0;
        Vec2 start_a;
        Vec2 start_b;
        bool active = false;  // committed to pinch: shape change seen first
        bool panning = false; // committed to translation: pan crossed first
        bool moved = false;
        std::vector<Episode> released;
    };

    std::vector<GestureEvent> process_group();
    void resolve_single(const Episode& ep, std::vector<GestureEvent>& out) const;
    void resolve_pair_release(std::vector<GestureEvent>& out);
    std::vector<std::string> tools_for(const std::vector<int>& fingers) const;
    GestureEvent base_event(GestureKind kind, double t, const std::vector<int>& fingers) const;

    GestureParams params_;
    std::map<int, std::string> tools_;
    std::map<int, Episode> episodes_;
    std::optional<PairState> pair_;
    std::vector<TouchEvent> pending_;
    double pending_t_ = 0.0;
};

/// Batch wrapper: feeds all events through a GestureRecognizer and returns
/// the gestures sorted by (t_ms, kind).
std::vector<GestureEvent> recognize(const std::vector<TouchEvent>& events,
                                    const GestureParams& params,
                                    const std::vector<std::pair<int, std::string>>& bindings = {});

void write_gestures(std::ostream& out, const std::vector<GestureEvent>& gestures);

std::vector<GestureEvent> read_gestures(std::istream& in);

} // namespace shadowtouch
