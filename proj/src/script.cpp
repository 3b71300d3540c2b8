#include "shadowtouch/script.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "shadowtouch/errors.hpp"
#include "shadowtouch/rng.hpp"

namespace shadowtouch {

namespace {

Vec2 dir_vec(SwipeDir d) {
    switch (d) {
        case SwipeDir::left: return {-1.0, 0.0};
        case SwipeDir::right: return {1.0, 0.0};
        case SwipeDir::up: return {0.0, -1.0};
        case SwipeDir::down: return {0.0, 1.0};
    }
    return {1.0, 0.0};
}

// Raised-cosine ease: 0 -> 1 with zero slope at both ends.
double ease(double tau) {
    tau = std::clamp(tau, 0.0, 1.0);
    return 0.5 * (1.0 - std::cos(tau * 3.14159265358979323846));
}

double smoothstep01(double t) {
    t = std::clamp(t, 0.0, 1.0);
    return t * t * (3.0 - 2.0 * t);
}

Vec2 rotate(const Vec2& p, double a) {
    const double c = std::cos(a);
    const double s = std::sin(a);
    return {c * p.x - s * p.y, s * p.x + c * p.y};
}

bool wants_two_fingers(ScriptKind kind, std::size_t n) {
    return kind == ScriptKind::pinch || (kind == ScriptKind::swipe && n == 2);
}

} // namespace

const char* to_string(ScriptKind kind) {
    switch (kind) {
        case ScriptKind::tap: return "tap";
        case ScriptKind::swipe: return "swipe";
        case ScriptKind::pinch: return "pinch";
        case ScriptKind::type_key: return "type_key";
        case ScriptKind::cursor_swipe: return "cursor_swipe";
    }
    return "tap";
}

const char* to_string(SwipeDir dir) {
    switch (dir) {
        case SwipeDir::left: return "left";
        case SwipeDir::right: return "right";
        case SwipeDir::up: return "up";
        case SwipeDir::down: return "down";
    }
    return "right";
}

double GestureScript::duration_ms() const {
    const double extra = stagger_ms * static_cast<double>(fingers.size() - 1);
    return pre_hover_ms + extra + approach_ms + contact_ms + approach_ms + post_hover_ms;
}

void GestureScript::validate() const {
    if (fingers.empty() || fingers.size() > static_cast<std::size_t>(kMaxFingers))
        throw ConfigError("script '" + label + "': finger count must be 1.." +
                          std::to_string(kMaxFingers));
    if (fingers.size() != starts.size())
        throw ConfigError("script '" + label + "': starts must match fingers");
    std::set<int> seen;
    for (int f : fingers) {
        if (f < 0 || f >= kMaxFingers)
            throw ConfigError("script '" + label + "': finger id out of range");
        if (!seen.insert(f).second)
            throw ConfigError("script '" + label + "': duplicate finger id");
    }
    switch (kind) {
        case ScriptKind::pinch:
            if (fingers.size() != 2)
                throw ConfigError("script '" + label + "': pinch needs exactly two fingers");
            break;
        case ScriptKind::swipe:
            if (fingers.size() > 2)
                throw ConfigError("script '" + label + "': swipe supports one or two fingers");
            break;
        default:
            if (fingers.size() != 1)
                throw ConfigError("script '" + label + "': gesture needs exactly one finger");
            break;
    }
    if (kind == ScriptKind::swipe || kind == ScriptKind::cursor_swipe) {
        if (!(amplitude_mm > 0.0))
            throw ConfigError("script '" + label + "': swipe amplitude must be positive");
    }
    if (kind == ScriptKind::pinch) {
        if (!(pinch.scale > 0.0))
            throw ConfigError("script '" + label + "': pinch scale must be positive");
        const double sep = (starts[1] - starts[0]).norm();
        if (sep < 2.5 * kFingerRadiusMm + 3.0 || sep * pinch.scale < 2.5 * kFingerRadiusMm + 3.0)
            throw ConfigError("script '" + label + "': pinch fingers too close to resolve");
    }
    if (!(pre_hover_ms >= 0.0) || !(post_hover_ms >= 0.0) || !(approach_ms > 0.0) ||
        !(contact_ms > 0.0) || !(stagger_ms >= 0.0))
        throw ConfigError("script '" + label + "': phase durations must be positive");
    if (stagger_ms * static_cast<double>(fingers.size() - 1) >= contact_ms)
        throw ConfigError("script '" + label + "': stagger leaves no shared contact window");
    if (!(hover_ceiling_mm > 0.0) || !(hover_ceiling_mm <= 25.0))
        throw ConfigError("script '" + label + "': hover ceiling must be in (0, 25] mm");
}

std::vector<HandTraceRecord> generate_trace(const GestureScript& script,
                                            double frame_period_ms,
                                            double jitter_sigma_mm,
                                            const SceneConfig& scene) {
    script.validate();
    scene.validate();
    if (!(frame_period_ms > 0.0))
        throw ConfigError("frame period must be positive");
    if (!(jitter_sigma_mm >= 0.0))
        throw ConfigError("jitter sigma must be non-negative");
    if (!(script.hover_ceiling_mm < scene.light.position.z))
        throw ConfigError("script '" + script.label + "': ceiling above light height");

    const std::size_t n = script.fingers.size();
    const bool pair_motion = wants_two_fingers(script.kind, n);
    const double stagger = pair_motion && script.kind == ScriptKind::swipe ? script.stagger_ms : 0.0;

    // Per-finger phase boundaries.
    std::vector<double> descend_at(n), touch_at(n), lift_at(n), clear_at(n);
    for (std::size_t k = 0; k < n; ++k) {
        descend_at[k] = script.pre_hover_ms + stagger * static_cast<double>(k);
        touch_at[k] = descend_at[k] + script.approach_ms;
        lift_at[k] = touch_at[k] + script.contact_ms;
        clear_at[k] = lift_at[k] + script.approach_ms;
    }
    const double total_ms = script.duration_ms();
    const int frames = static_cast<int>(std::lround(total_ms / frame_period_ms));
    if (frames < 4) throw ConfigError("script '" + script.label + "': trace too short");

    Vec2 centroid{};
    if (script.kind == ScriptKind::pinch)
        centroid = (script.starts[0] + script.starts[1]) * 0.5;
    const Vec2 swipe_disp = dir_vec(script.direction) * script.amplitude_mm;

    // Contact motion runs on one hand clock spanning the window where every
    // finger is down: staggered fingers land and lift offset, but the hand
    // moves as a unit, so no finger leads or trails along the path.
    const double motion_start = touch_at[n - 1];
    const double motion_end = lift_at[0];

    auto lateral_at = [&](std::size_t k, double tau) -> Vec2 {
        const double lam = ease(tau);
        switch (script.kind) {
            case ScriptKind::tap:
            case ScriptKind::type_key:
                return script.starts[k];
            case ScriptKind::swipe:
            case ScriptKind::cursor_swipe:
                return script.starts[k] + swipe_disp * lam;
            case ScriptKind::pinch: {
                const double s = 1.0 + (script.pinch.scale - 1.0) * lam;
                const double rot = script.pinch.rotation_rad * lam;
                const Vec2 pan = script.pinch.pan * lam;
                return centroid + rotate((script.starts[k] - centroid) * s, rot) + pan;
            }
        }
        return script.starts[k];
    };

    // OU-smoothed lateral jitter, stationary sd = jitter_sigma per axis.
    const double tau_ou = 80.0;
    const double alpha = std::exp(-frame_period_ms / tau_ou);
    const double kick = jitter_sigma_mm * std::sqrt(1.0 - alpha * alpha);
    std::vector<Vec2> jitter(n);
    Rng rng(derive_seed(script.seed, 0x6a17u));
    for (auto& j : jitter) j = {rng.normal(0.0, jitter_sigma_mm), rng.normal(0.0, jitter_sigma_mm)};

    std::vector<HandTraceRecord> records;
    records.reserve(static_cast<std::size_t>(frames));
    const double fw = static_cast<double>(scene.camera.width);
    const double fh = static_cast<double>(scene.camera.height);
    const double tip_margin_px = 16.0;
    const double shadow_margin_px = 3.0;

    for (int i = 0; i < frames; ++i) {
        const double t = static_cast<double>(i) * frame_period_ms;
        HandTraceRecord rec;
        rec.t_ms = t;
        const double tau = (t - motion_start) / (motion_end - motion_start);
        for (std::size_t k = 0; k < n; ++k) {
            jitter[k] = {alpha * jitter[k].x + kick * rng.normal(),
                         alpha * jitter[k].y + kick * rng.normal()};
            double z;
            if (t < descend_at[k]) {
                z = script.hover_ceiling_mm;
            } else if (t < touch_at[k]) {
                z = script.hover_ceiling_mm * (1.0 - ease((t - descend_at[k]) / script.approach_ms));
            } else if (t < lift_at[k]) {
                z = 0.0;
            } else if (t < clear_at[k]) {
                z = script.hover_ceiling_mm * ease((t - lift_at[k]) / script.approach_ms);
            } else {
                z = script.hover_ceiling_mm;
            }
            Vec2 p = lateral_at(k, tau);
            const double w = smoothstep01(z / 2.0);
            p = p + jitter[k] * w;

            FingerSample f;
            f.finger_id = script.fingers[k];
            f.tip = {p.x, p.y, z};
            f.contact = z <= kContactEpsMm;
            rec.fingers.push_back(f);

            const Vec2 tip_px = project_to_image(f.tip, scene.camera);
            const Vec2 sh = shadow_project(f.tip, scene.light);
            const Vec2 sh_px = project_to_image({sh.x, sh.y, 0.0}, scene.camera);
            if (tip_px.x < tip_margin_px || tip_px.x > fw - 1.0 - tip_margin_px ||
                tip_px.y < tip_margin_px || tip_px.y > fh - 1.0 - tip_margin_px ||
                sh_px.x < shadow_margin_px || sh_px.x > fw - 1.0 - shadow_margin_px ||
                sh_px.y < shadow_margin_px || sh_px.y > fh - 1.0 - shadow_margin_px)
                throw ConfigError("script '" + script.label +
                                  "': trajectory leaves the camera field of view at t=" +
                                  std::to_string(t) + " ms");
        }
        records.push_back(std::move(rec));
    }
    return records;
}

namespace {

struct Box {
    double x0, x1, y0, y1;
};

Vec2 sample_in(Rng& rng, const Box& b) {
    return {rng.uniform(b.x0, b.x1), rng.uniform(b.y0, b.y1)};
}

// Workspace where fingertips and their shadows stay inside the field of view
// at ceilings up to 16 mm under the default scene, with margin for jitter.
constexpr Box kAnchorBox{-20.0, 65.0, -62.0, 62.0};

GestureScript corpus_script(ScriptKind kind, int index, std::uint64_t seed) {
    Rng rng(derive_seed(seed, 0xc09b0000u + static_cast<std::uint64_t>(index)));
    GestureScript s;
    s.kind = kind;
    s.seed = derive_seed(seed, 0x7ace0000u + static_cast<std::uint64_t>(index));
    s.hover_ceiling_mm = rng.uniform(12.0, 16.0);
    s.approach_ms = rng.uniform(50.0, 80.0);
    s.pre_hover_ms = rng.uniform(2000.0, 2600.0);
    s.post_hover_ms = rng.uniform(1600.0, 2200.0);

    const SwipeDir dirs[4] = {SwipeDir::left, SwipeDir::right, SwipeDir::up, SwipeDir::down};
    switch (kind) {
        case ScriptKind::tap: {
            s.fingers = {kFingerIndex};
            s.starts = {sample_in(rng, kAnchorBox)};
            s.contact_ms = rng.uniform(80.0, 160.0);
            break;
        }
        case ScriptKind::type_key: {
            s.fingers = {kFingerIndex};
            const double kx = -10.0 + 10.0 * static_cast<double>(rng.next_below(8));
            const double ky = -50.0 + 10.0 * static_cast<double>(rng.next_below(11));
            s.starts = {{kx, ky}};
            s.contact_ms = rng.uniform(70.0, 140.0);
            break;
        }
        case ScriptKind::cursor_swipe:
        case ScriptKind::swipe: {
            const int slot = index % 20;
            const bool two = kind == ScriptKind::swipe && (slot == 4 || slot == 12 || slot == 18);
            s.direction = dirs[rng.next_below(4)];
            s.amplitude_mm = rng.uniform(24.0, 34.0);
            s.contact_ms = rng.uniform(500.0, 800.0);
            const Vec2 d = dir_vec(s.direction) * s.amplitude_mm;
            Box b = kAnchorBox;
            b.x0 = std::max(b.x0, kAnchorBox.x0 - std::min(d.x, 0.0));
            b.x1 = std::min(b.x1, kAnchorBox.x1 - std::max(d.x, 0.0));
            b.y0 = std::max(b.y0, kAnchorBox.y0 - std::min(d.y, 0.0));
            b.y1 = std::min(b.y1, kAnchorBox.y1 - std::max(d.y, 0.0));
            if (two) {
                // Adjacent fingers of one hand sit side by side across the
                // pointing axis, so the pair always separates along x no
                // matter which way the swipe goes.
                const double sep = rng.uniform(20.0, 28.0);
                Box bb = b;
                bb.x0 += sep / 2.0;
                bb.x1 -= sep / 2.0;
                const Vec2 base = sample_in(rng, bb);
                s.fingers = {kFingerIndex, kFingerMiddle};
                s.starts = {base - Vec2{sep / 2.0, 0.0}, base + Vec2{sep / 2.0, 0.0}};
                s.stagger_ms = rng.uniform(0.0, 40.0);
            } else {
                s.fingers = {kind == ScriptKind::cursor_swipe ? kFingerMiddle : kFingerIndex};
                s.starts = {sample_in(rng, b)};
            }
            break;
        }
        case ScriptKind::pinch: {
            s.fingers = {kFingerThumb, kFingerIndex};
            s.contact_ms = rng.uniform(700.0, 1100.0);
            const Vec2 c{rng.uniform(-10.0, 28.0), rng.uniform(-30.0, 30.0)};
            const double sep = rng.uniform(26.0, 38.0);
            const double theta = rng.uniform(-0.55, 0.55);
            const Vec2 axis{std::cos(theta), std::sin(theta)};
            s.starts = {c - axis * (sep / 2.0), c + axis * (sep / 2.0)};
            if (rng.next_below(2) == 0) {
                s.pinch.scale = rng.uniform(1.30, std::min(1.55, 54.0 / sep));
            } else {
                s.pinch.scale = rng.uniform(std::max(0.62, 19.0 / sep), 0.78);
            }
            if (rng.next_below(2) == 0) {
                const double mag = rng.uniform(0.18, 0.45);
                s.pinch.rotation_rad = rng.next_below(2) == 0 ? mag : -mag;
            }
            if (rng.next_below(100) < 35) {
                const double ang = rng.uniform(0.0, 6.28318530717958647692);
                const double mag = rng.uniform(3.0, 8.0);
                s.pinch.pan = {mag * std::cos(ang), mag * std::sin(ang)};
            }
            break;
        }
    }
    s.label = std::string(to_string(kind)) +
              (kind == ScriptKind::swipe && s.fingers.size() == 2 ? "2" : "") + "_" +
              std::to_string(index);
    return s;
}

} // namespace

std::vector<GestureScript> make_corpus(int count, std::uint64_t seed) {
    if (count < 0) throw ConfigError("corpus size must be non-negative");
    // Fixed mixture per block of 20 scripts: 4 taps, 4 single swipes,
    // 3 two-finger swipes, 4 pinches, 3 key taps, 2 cursor swipes.
    static constexpr ScriptKind pattern[20] = {
        ScriptKind::tap,          ScriptKind::swipe, ScriptKind::pinch, ScriptKind::type_key,
        ScriptKind::swipe,        ScriptKind::tap,   ScriptKind::pinch, ScriptKind::cursor_swipe,
        ScriptKind::swipe,        ScriptKind::type_key, ScriptKind::pinch, ScriptKind::tap,
        ScriptKind::swipe,        ScriptKind::pinch, ScriptKind::type_key, ScriptKind::swipe,
        ScriptKind::tap,          ScriptKind::cursor_swipe, ScriptKind::swipe, ScriptKind::swipe,
    };
    std::vector<GestureScript> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        out.push_back(corpus_script(pattern[i % 20], i, seed));
    return out;
}

} // namespace shadowtouch
