#include "shadowtouch/config.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "shadowtouch/errors.hpp"

namespace shadowtouch {

void PipelineConfig::validate() const {
    scene.validate();
    segmentation.validate();
    touch.validate();
    gesture.validate();
    if (!(noise.pixel_sigma >= 0.0)) throw ConfigError("pixel_sigma must be non-negative");
    if (!(noise.jitter_sigma_mm >= 0.0)) throw ConfigError("jitter_sigma_mm must be non-negative");
    if (!(frame_period_ms > 0.0)) throw ConfigError("frame_period_ms must be positive");
}

namespace {

enum class KeyType { Double, Int, U64 };

struct KeySpec {
    const char* name;
    KeyType type;
    std::function<void(PipelineConfig&, double)> set_d;
    std::function<double(const PipelineConfig&)> get_d;
    std::function<void(PipelineConfig&, std::uint64_t)> set_u;
    std::function<std::uint64_t(const PipelineConfig&)> get_u;
};

std::vector<KeySpec> make_specs() {
    std::vector<KeySpec> specs;
    auto add = [&](const char* name, KeyType type,
                   std::function<void(PipelineConfig&, double)> set,
                   std::function<double(const PipelineConfig&)> get) {
        specs.push_back({name, type, std::move(set), std::move(get), nullptr, nullptr});
    };

    add("light_x", KeyType::Double, [](PipelineConfig& c, double v) { c.scene.light.position.x = v; },
        [](const PipelineConfig& c) { return c.scene.light.position.x; });
    add("light_y", KeyType::Double, [](PipelineConfig& c, double v) { c.scene.light.position.y = v; },
        [](const PipelineConfig& c) { return c.scene.light.position.y; });
    add("light_z", KeyType::Double, [](PipelineConfig& c, double v) { c.scene.light.position.z = v; },
        [](const PipelineConfig& c) { return c.scene.light.position.z; });
    add("camera_x", KeyType::Double, [](PipelineConfig& c, double v) { c.scene.camera.center.x = v; },
        [](const PipelineConfig& c) { return c.scene.camera.center.x; });
    add("camera_y", KeyType::Double, [](PipelineConfig& c, double v) { c.scene.camera.center.y = v; },
        [](const PipelineConfig& c) { return c.scene.camera.center.y; });
    add("camera_z", KeyType::Double, [](PipelineConfig& c, double v) { c.scene.camera.center.z = v; },
        [](const PipelineConfig& c) { return c.scene.camera.center.z; });
    add("focal_px", KeyType::Double, [](PipelineConfig& c, double v) { c.scene.camera.focal_px = v; },
        [](const PipelineConfig& c) { return c.scene.camera.focal_px; });
    add("principal_u", KeyType::Double,
        [](PipelineConfig& c, double v) { c.scene.camera.principal.x = v; },
        [](const PipelineConfig& c) { return c.scene.camera.principal.x; });
    add("principal_v", KeyType::Double,
        [](PipelineConfig& c, double v) { c.scene.camera.principal.y = v; },
        [](const PipelineConfig& c) { return c.scene.camera.principal.y; });
    add("image_width", KeyType::Int,
        [](PipelineConfig& c, double v) { c.scene.camera.width = static_cast<int>(v); },
        [](const PipelineConfig& c) { return static_cast<double>(c.scene.camera.width); });
    add("image_height", KeyType::Int,
        [](PipelineConfig& c, double v) { c.scene.camera.height = static_cast<int>(v); },
        [](const PipelineConfig& c) { return static_cast<double>(c.scene.camera.height); });
    add("pixel_sigma", KeyType::Double, [](PipelineConfig& c, double v) { c.noise.pixel_sigma = v; },
        [](const PipelineConfig& c) { return c.noise.pixel_sigma; });
    add("jitter_sigma_mm", KeyType::Double,
        [](PipelineConfig& c, double v) { c.noise.jitter_sigma_mm = v; },
        [](const PipelineConfig& c) { return c.noise.jitter_sigma_mm; });
    add("finger_min", KeyType::Int,
        [](PipelineConfig& c, double v) { c.segmentation.finger_min = static_cast<int>(v); },
        [](const PipelineConfig& c) { return static_cast<double>(c.segmentation.finger_min); });
    add("shadow_max", KeyType::Int,
        [](PipelineConfig& c, double v) { c.segmentation.shadow_max = static_cast<int>(v); },
        [](const PipelineConfig& c) { return static_cast<double>(c.segmentation.shadow_max); });
    add("min_component_px", KeyType::Int,
        [](PipelineConfig& c, double v) { c.segmentation.min_component_px = static_cast<int>(v); },
        [](const PipelineConfig& c) {
            return static_cast<double>(c.segmentation.min_component_px);
        });
    add("t_down_mm", KeyType::Double, [](PipelineConfig& c, double v) { c.touch.t_down_mm = v; },
        [](const PipelineConfig& c) { return c.touch.t_down_mm; });
    add("t_up_mm", KeyType::Double, [](PipelineConfig& c, double v) { c.touch.t_up_mm = v; },
        [](const PipelineConfig& c) { return c.touch.t_up_mm; });
    add("n_down", KeyType::Int,
        [](PipelineConfig& c, double v) { c.touch.n_down = static_cast<int>(v); },
        [](const PipelineConfig& c) { return static_cast<double>(c.touch.n_down); });
    add("n_up", KeyType::Int, [](PipelineConfig& c, double v) { c.touch.n_up = static_cast<int>(v); },
        [](const PipelineConfig& c) { return static_cast<double>(c.touch.n_up); });
    add("move_eps_mm", KeyType::Double, [](PipelineConfig& c, double v) { c.touch.move_eps_mm = v; },
        [](const PipelineConfig& c) { return c.touch.move_eps_mm; });
    add("tap_max_ms", KeyType::Double, [](PipelineConfig& c, double v) { c.gesture.tap_max_ms = v; },
        [](const PipelineConfig& c) { return c.gesture.tap_max_ms; });
    add("tap_max_disp_mm", KeyType::Double,
        [](PipelineConfig& c, double v) { c.gesture.tap_max_disp_mm = v; },
        [](const PipelineConfig& c) { return c.gesture.tap_max_disp_mm; });
    add("swipe_min_mm", KeyType::Double,
        [](PipelineConfig& c, double v) { c.gesture.swipe_min_mm = v; },
        [](const PipelineConfig& c) { return c.gesture.swipe_min_mm; });
    add("two_finger_overlap_ms", KeyType::Double,
        [](PipelineConfig& c, double v) { c.gesture.two_finger_overlap_ms = v; },
        [](const PipelineConfig& c) { return c.gesture.two_finger_overlap_ms; });
    add("pinch_min_scale_delta", KeyType::Double,
        [](PipelineConfig& c, double v) { c.gesture.pinch_min_scale_delta = v; },
        [](const PipelineConfig& c) { return c.gesture.pinch_min_scale_delta; });
    add("pinch_min_rot_rad", KeyType::Double,
        [](PipelineConfig& c, double v) { c.gesture.pinch_min_rot_rad = v; },
        [](const PipelineConfig& c) { return c.gesture.pinch_min_rot_rad; });
    add("pinch_min_pan_mm", KeyType::Double,
        [](PipelineConfig& c, double v) { c.gesture.pinch_min_pan_mm = v; },
        [](const PipelineConfig& c) { return c.gesture.pinch_min_pan_mm; });
    add("frame_period_ms", KeyType::Double,
        [](PipelineConfig& c, double v) { c.frame_period_ms = v; },
        [](const PipelineConfig& c) { return c.frame_period_ms; });

    KeySpec seed{"seed", KeyType::U64, nullptr, nullptr,
                 [](PipelineConfig& c, std::uint64_t v) { c.seed = v; },
                 [](const PipelineConfig& c) { return c.seed; }};
    specs.push_back(std::move(seed));
    return specs;
}

const std::vector<KeySpec>& specs() {
    static const std::vector<KeySpec> s = make_specs();
    return s;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

} // namespace

PipelineConfig parse_config(std::istream& in) {
    PipelineConfig config;
    std::set<std::string> seen;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected 'key = value'");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected 'key = value'");
        if (!seen.insert(key).second)
            throw ConfigError("config line " + std::to_string(line_no) + ": duplicate key '" +
                              key + "'");
        const KeySpec* spec = nullptr;
        for (const auto& s : specs())
            if (key == s.name) {
                spec = &s;
                break;
            }
        if (spec == nullptr)
            throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + key +
                              "'");
        try {
            std::size_t used = 0;
            if (spec->type == KeyType::U64) {
                const std::uint64_t v = std::stoull(value, &used);
                if (used != value.size()) throw std::invalid_argument(value);
                spec->set_u(config, v);
            } else {
                const double v = std::stod(value, &used);
                if (used != value.size()) throw std::invalid_argument(value);
                if (spec->type == KeyType::Int &&
                    v != static_cast<double>(static_cast<long long>(v)))
                    throw ConfigError("config line " + std::to_string(line_no) + ": key '" + key +
                                      "' wants an integer");
                spec->set_d(config, v);
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            throw ConfigError("config line " + std::to_string(line_no) + ": bad value '" + value +
                              "' for key '" + key + "'");
        }
    }
    try {
        config.validate();
    } catch (const GeometryError& e) {
        throw ConfigError(e.what()); // scene problems in a config file are config errors
    }
    return config;
}

PipelineConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    try {
        return parse_config(in);
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

void serialize_config(std::ostream& out, const PipelineConfig& config) {
    char buf[64];
    for (const auto& s : specs()) {
        switch (s.type) {
            case KeyType::Double:
                std::snprintf(buf, sizeof(buf), "%.6g", s.get_d(config));
                out << s.name << " = " << buf << "\n";
                break;
            case KeyType::Int:
                out << s.name << " = " << static_cast<long long>(s.get_d(config)) << "\n";
                break;
            case KeyType::U64:
                out << s.name << " = " << s.get_u(config) << "\n";
                break;
        }
    }
}

} // namespace shadowtouch
