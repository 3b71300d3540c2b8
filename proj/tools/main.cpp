#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "shadowtouch/config.hpp"
#include "shadowtouch/errors.hpp"
#include "shadowtouch/observe.hpp"
#include "shadowtouch/pgm.hpp"
#include "shadowtouch/pipeline.hpp"
#include "shadowtouch/rng.hpp"
#include "shadowtouch/sweep.hpp"

namespace fs = std::filesystem;
using namespace shadowtouch;

namespace {

std::uint64_t parse_seed(const std::string& text, const std::string& origin) {
    try {
        std::size_t used = 0;
        const std::uint64_t seed = std::stoull(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return seed;
    } catch (const std::exception&) {
        throw ConfigError(origin + ": bad seed value '" + text + "'");
    }
}

void cmd_synth(const PipelineConfig& config, const fs::path& out_dir, int count) {
    fs::create_directories(out_dir);
    const auto scripts = make_corpus(count, config.seed);
    for (int i = 0; i < count; ++i) {
        TraceFile tf;
        tf.label = scripts[static_cast<std::size_t>(i)].label;
        tf.frame_period_ms = config.frame_period_ms;
        tf.records = generate_trace(scripts[static_cast<std::size_t>(i)], config.frame_period_ms,
                                    config.noise.jitter_sigma_mm, config.scene);
        char name[32];
        std::snprintf(name, sizeof(name), "trace_%03d.txt", i);
        std::ofstream out(out_dir / name);
        if (!out) throw DataError("cannot write " + (out_dir / name).string());
        write_trace(out, tf);
    }
    std::cout << "wrote " << count << " traces to " << out_dir.string() << "\n";
}

void cmd_render(const PipelineConfig& config, const fs::path& out_dir,
                const std::string& trace_path) {
    std::ifstream in(trace_path);
    if (!in) throw DataError("cannot open trace file '" + trace_path + "'");
    const TraceFile trace = read_trace(in);
    fs::create_directories(out_dir);
    NoiseModel noise = config.noise;
    noise.seed = derive_seed(config.seed, 0);
    const FrameRenderer renderer(config.scene, noise);
    for (int i = 0; i < static_cast<int>(trace.records.size()); ++i) {
        const Frame frame = renderer.render(trace.records[static_cast<std::size_t>(i)]);
        write_pgm((out_dir / frame_filename(i)).string(), frame);
    }
    std::cout << "rendered " << trace.records.size() << " frames to " << out_dir.string() << "\n";
}

void cmd_sense(const PipelineConfig& config, const fs::path& out_dir,
               const std::string& frames_dir) {
    if (!fs::is_directory(frames_dir))
        throw DataError("'" + frames_dir + "' is not a directory");
    std::vector<fs::path> paths;
    for (const auto& entry : fs::directory_iterator(frames_dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string name = entry.path().filename().string();
        if (name.size() > 4 && name.substr(name.size() - 4) == ".pgm")
            paths.push_back(entry.path());
    }
    std::sort(paths.begin(), paths.end());
    if (paths.empty()) throw DataError("no .pgm frames in '" + frames_dir + "'");

    ShadowSensor sensor(config.scene, config.segmentation);
    std::vector<FingerObservation> all;
    for (int i = 0; i < static_cast<int>(paths.size()); ++i) {
        Frame frame = read_pgm(paths[static_cast<std::size_t>(i)].string());
        if (std::isnan(frame.t_ms))
            frame.t_ms = static_cast<double>(i) * config.frame_period_ms;
        const auto obs = sensor.process(frame);
        all.insert(all.end(), obs.begin(), obs.end());
    }
    fs::create_directories(out_dir);
    std::ofstream out(out_dir / "observations.txt");
    if (!out) throw DataError("cannot write " + (out_dir / "observations.txt").string());
    write_observations(out, all);
    std::cout << "sensed " << paths.size() << " frames, " << all.size() << " observations to "
              << (out_dir / "observations.txt").string() << "\n";
}

void cmd_eval(const PipelineConfig& config, const fs::path& out_dir, int traces) {
    const auto scripts = make_corpus(traces, config.seed);
    const EvalReport report = evaluate_corpus(scripts, config);
    fs::create_directories(out_dir);
    {
        std::ofstream out(out_dir / "config.txt");
        serialize_config(out, config);
    }
    std::ofstream out(out_dir / "report.txt");
    if (!out) throw DataError("cannot write " + (out_dir / "report.txt").string());
    write_report(out, report);
    char buf[96];
    std::snprintf(buf, sizeof(buf), "frame_accuracy=%.6f gesture_accuracy=%.6f\n",
                  report.frame_accuracy(), report.gesture_accuracy());
    std::cout << "evaluated " << traces << " traces: " << buf;
}

void cmd_sweep(const PipelineConfig& config, const fs::path& out_dir, int traces_per_height) {
    SweepOptions options;
    options.traces_per_height = traces_per_height;
    const SweepResult result = hover_resolution_sweep(config, options);
    fs::create_directories(out_dir);
    std::ofstream out(out_dir / "sweep.txt");
    if (!out) throw DataError("cannot write " + (out_dir / "sweep.txt").string());
    write_sweep_report(out, result);
    std::cout << "sweep written to " << (out_dir / "sweep.txt").string() << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"shadow-assisted near-surface touch sensing pipeline"};
    app.require_subcommand(1);
    app.fallthrough(); // accept --seed/--config/--out after the subcommand too

    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed_flag;
    app.add_option("--config", config_path, "configuration file (key = value lines)");
    app.add_option("--seed", seed_flag, "RNG seed; overrides SHADOWTOUCH_SEED and the config");
    app.add_option("--out", out_dir, "output directory (default: out)");

    auto* synth = app.add_subcommand("synth", "generate gesture trace files");
    int synth_count = 4;
    synth->add_option("--count", synth_count, "number of traces")->check(CLI::PositiveNumber);

    auto* render = app.add_subcommand("render", "render a trace file to PGM frames");
    std::string trace_path;
    render->add_option("--trace", trace_path, "trace file")->required();

    auto* sense = app.add_subcommand("sense", "extract observations from PGM frames");
    std::string frames_dir;
    sense->add_option("--frames", frames_dir, "directory of frame_*.pgm files")->required();

    auto* pipeline = app.add_subcommand("pipeline",
                                        "synth + render + sense + events + gestures + report");
    int pipeline_traces = 4;
    pipeline->add_option("--traces", pipeline_traces, "number of traces")
        ->check(CLI::PositiveNumber);

    auto* eval = app.add_subcommand("eval", "in-memory corpus evaluation report");
    int eval_traces = 500;
    eval->add_option("--traces", eval_traces, "corpus size")->check(CLI::PositiveNumber);

    auto* sweep = app.add_subcommand("sweep", "hover resolution comparison report");
    int sweep_traces = SweepOptions{}.traces_per_height;
    sweep->add_option("--traces-per-height", sweep_traces,
                      "traces per tested height and class")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        PipelineConfig config;
        if (!config_path.empty()) config = load_config_file(config_path);
        if (!seed_flag) {
            if (const char* env = std::getenv("SHADOWTOUCH_SEED"))
                config.seed = parse_seed(env, "SHADOWTOUCH_SEED");
        } else {
            config.seed = *seed_flag;
        }
        config.validate();

        const fs::path out(out_dir);
        if (synth->parsed()) cmd_synth(config, out, synth_count);
        else if (render->parsed()) cmd_render(config, out, trace_path);
        else if (sense->parsed()) cmd_sense(config, out, frames_dir);
        else if (pipeline->parsed()) run_pipeline(out, config, pipeline_traces);
        else if (eval->parsed()) cmd_eval(config, out, eval_traces);
        else if (sweep->parsed()) cmd_sweep(config, out, sweep_traces);
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const GeometryError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
