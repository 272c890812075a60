#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "reidrank/curriculum.hpp"
#include "reidrank/distance.hpp"
#include "reidrank/errors.hpp"
#include "reidrank/kreciprocal.hpp"
#include "reidrank/metrics.hpp"
#include "reidrank/parallel.hpp"
#include "reidrank/split_io.hpp"
#include "reidrank/synth.hpp"
#include "reidrank/temporal.hpp"
#include "reidrank/tracklet.hpp"

namespace {

using namespace reidrank;
namespace fs = std::filesystem;

// Current pipeline stage, used to tag error messages.
std::string g_stage = "startup";

class StageTimer {
public:
    StageTimer() : start_(std::chrono::steady_clock::now()) {}
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                         start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

enum class RerankMode { None, KReciprocal, Temporal };

RerankMode parse_mode(const std::string& s) {
    if (s == "none") return RerankMode::None;
    if (s == "kreciprocal") return RerankMode::KReciprocal;
    if (s == "temporal") return RerankMode::Temporal;
    throw ConfigError("unknown rerank mode '" + s + "' (expected none|kreciprocal|temporal)");
}

struct SynthOpts {
    SynthConfig config;
    std::string direction = "visible_to_infrared";

    EvalSplit make() const {
        g_stage = "synth";
        EvalSplit split = generate(config);
        if (direction == "infrared_to_visible") {
            split = swapped(split);
        } else if (direction != "visible_to_infrared") {
            throw ConfigError("unknown direction '" + direction + "'");
        }
        return split;
    }

    void add_flags(CLI::App* cmd) {
        cmd->add_option("--seed", config.seed, "PRNG seed");
        cmd->add_option("--num-ids", config.num_ids, "number of identities");
        cmd->add_option("--cams-per-id", config.cams_per_id, "cameras per identity");
        cmd->add_option("--frames", config.frames_per_tracklet, "frames per tracklet (T)");
        cmd->add_option("--dim", config.dim, "feature dimension (D)");
        cmd->add_option("--identity-spread", config.identity_spread, "identity center sigma");
        cmd->add_option("--modality-offset", config.modality_offset_scale,
                        "per identity-modality offset scale");
        cmd->add_option("--camera-offset", config.camera_offset_scale,
                        "per identity-camera offset scale");
        cmd->add_option("--frame-noise", config.frame_noise, "per-frame noise sigma");
        cmd->add_option("--direction", direction,
                        "which modality is the query side "
                        "(visible_to_infrared|infrared_to_visible)");
    }
};

struct RerankOpts {
    RerankConfig config;
    std::string mode_name = "none";
    bool plain_sets = false;

    RerankMode mode() const { return parse_mode(mode_name); }
    RerankConfig make() const {
        RerankConfig c = config;
        c.use_expanded_sets = !plain_sets;
        c.validate();
        return c;
    }

    void add_flags(CLI::App* cmd, bool with_mode = true) {
        if (with_mode) {
            cmd->add_option("--mode", mode_name, "re-ranking mode (none|kreciprocal|temporal)");
        }
        cmd->add_option("--k1", config.k1, "k-reciprocal neighborhood size");
        cmd->add_option("--k2", config.k2, "local query expansion size");
        cmd->add_option("--lambda1", config.lambda1, "feature distance weight");
        cmd->add_option("--lambda2", config.lambda2, "cross-temporal weight");
        cmd->add_option("--groups", config.num_groups, "temporal group count (L)");
        cmd->add_flag("--plain-sets", plain_sets,
                      "use plain reciprocal sets instead of expanded sets for the Jaccard");
    }
};

struct StageOutput {
    DistanceMatrix feature;
    DistanceMatrix jaccard;  // empty for mode none
    DistanceMatrix final_dist;
    bool has_jaccard = false;
};

StageOutput run_mode(const EvalSplit& split, RerankMode mode, const RerankConfig& config,
                     std::map<std::string, double>& timing) {
    StageOutput out;
    if (mode == RerankMode::None) {
        g_stage = "dist";
        StageTimer t;
        out.feature = feature_distances(split);
        out.final_dist = out.feature;
        timing["dist"] = t.ms();
        return out;
    }
    g_stage = "rerank";
    StageTimer t;
    RerankOutput ranked = mode == RerankMode::KReciprocal ? rerank_kreciprocal(split, config)
                                                          : temporal_rerank(split, config);
    timing["rerank"] = t.ms();
    out.feature = std::move(ranked.feature);
    out.jaccard = std::move(ranked.jaccard);
    out.final_dist = std::move(ranked.reranked);
    out.has_jaccard = true;
    return out;
}

EvalSplit load_input(const std::string& path) {
    g_stage = "load";
    return load_split(path);
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
    out << text;
}

int run_synth(const SynthOpts& opts, const std::string& out_dir) {
    EvalSplit split = opts.make();
    g_stage = "save";
    save_split(split, out_dir);
    std::cerr << "wrote " << split.queries.size() << " query and " << split.gallery.size()
              << " gallery tracklets to " << out_dir << "\n";
    return 0;
}

int run_dist(const std::string& in, const std::string& out_prefix, bool emit_unsquared) {
    EvalSplit split = load_input(in);
    g_stage = "dist";
    DistanceMatrix dist = feature_distances(split);
    if (emit_unsquared) dist = unsquared(std::move(dist));
    g_stage = "save";
    save_matrix(dist, out_prefix);
    std::cerr << "wrote " << dist.values.rows() << "x" << dist.values.cols() << " matrix to "
              << out_prefix << ".bin\n";
    return 0;
}

int run_rerank(const std::string& in, const RerankOpts& opts, const std::string& out_prefix,
               bool dump_stages) {
    EvalSplit split = load_input(in);
    std::map<std::string, double> timing;
    StageOutput out = run_mode(split, opts.mode(), opts.make(), timing);
    g_stage = "save";
    save_matrix(out.final_dist, out_prefix);
    if (dump_stages) {
        save_matrix(out.feature, out_prefix + "_feature");
        if (out.has_jaccard) save_matrix(out.jaccard, out_prefix + "_jaccard");
    }
    std::cerr << "wrote " << out.final_dist.values.rows() << "x" << out.final_dist.values.cols()
              << " matrix to " << out_prefix << ".bin\n";
    return 0;
}

int run_eval(const std::string& in, const RerankOpts& opts, bool exclude_same_camera,
             const std::string& report_path, const std::string& matrix_prefix, bool timing_flag) {
    EvalSplit split = load_input(in);
    std::map<std::string, double> timing;
    DistanceMatrix dist;
    RerankConfig config = opts.make();
    if (!matrix_prefix.empty()) {
        g_stage = "load";
        dist = load_matrix(matrix_prefix);
    } else {
        dist = run_mode(split, opts.mode(), config, timing).final_dist;
    }
    g_stage = "eval";
    StageTimer t;
    EvalReport report = evaluate(dist, split, {.exclude_same_camera = exclude_same_camera});
    timing["eval"] = t.ms();
    report.config_echo = config;
    report.timing_ms = timing;
    g_stage = "report";
    std::cout << report_table({report});
    if (!report_path.empty()) write_text(report_path, report_json(report, timing_flag));
    return 0;
}

int run_schedule(const std::string& strategy, double fixed_alpha, double tau, double phi,
                 int epochs, const std::string& csv_path) {
    g_stage = "schedule";
    if (epochs < 1) throw ConfigError("--epochs must be >= 1");
    curriculum::ScheduleConfig config;
    if (strategy == "fixed") {
        config = curriculum::Fixed{fixed_alpha};
    } else if (strategy == "exponential") {
        config = curriculum::Exponential{tau};
    } else if (strategy == "cosine") {
        config = curriculum::Cosine{phi};
    } else {
        throw ConfigError("unknown strategy '" + strategy +
                          "' (expected fixed|exponential|cosine)");
    }
    curriculum::validate(config);

    std::string csv = "epoch,normalized_epoch,alpha\n";
    char line[96];
    std::printf("%8s %18s %10s\n", "epoch", "normalized_epoch", "alpha");
    for (int e = 0; e <= epochs; ++e) {
        const double frac = static_cast<double>(e) / epochs;
        const double a = curriculum::alpha(config, frac);
        std::printf("%8d %18.6f %10.6f\n", e, frac, a);
        std::snprintf(line, sizeof(line), "%d,%.6f,%.6f\n", e, frac, a);
        csv += line;
    }
    if (!csv_path.empty()) write_text(csv_path, csv);
    return 0;
}

struct PipelineOpts {
    std::string in;
    bool use_synth = false;
    SynthOpts synth;
    RerankOpts rerank;
    bool exclude_same_camera = false;
    std::string directions = "forward";  // forward|reverse|both
    std::string out_dir;
    bool timing = false;
    bool dump_matrices = false;
};

int run_pipeline(const PipelineOpts& opts) {
    if (opts.use_synth == !opts.in.empty()) {
        throw ConfigError("exactly one input source required: --in DIR or --synth");
    }
    if (opts.out_dir.empty()) throw ConfigError("--out-dir is required");
    fs::create_directories(opts.out_dir);

    EvalSplit base = opts.use_synth ? opts.synth.make() : load_input(opts.in);

    std::vector<EvalSplit> splits;
    if (opts.directions == "forward") {
        splits.push_back(std::move(base));
    } else if (opts.directions == "reverse") {
        splits.push_back(swapped(base));
    } else if (opts.directions == "both") {
        splits.push_back(base);
        splits.push_back(swapped(base));
    } else {
        throw ConfigError("unknown --directions '" + opts.directions +
                          "' (expected forward|reverse|both)");
    }

    const RerankConfig config = opts.rerank.make();
    std::vector<EvalReport> reports;
    for (const EvalSplit& split : splits) {
        std::map<std::string, double> timing;
        StageOutput out = run_mode(split, opts.rerank.mode(), config, timing);
        g_stage = "eval";
        StageTimer t;
        EvalReport report =
            evaluate(out.final_dist, split, {.exclude_same_camera = opts.exclude_same_camera});
        timing["eval"] = t.ms();
        report.config_echo = config;
        report.timing_ms = timing;

        g_stage = "report";
        const std::string dir_name = to_string(split.direction);
        write_text(fs::path(opts.out_dir) / ("report_" + dir_name + ".json"),
                   report_json(report, opts.timing));
        if (opts.dump_matrices) {
            const fs::path prefix = fs::path(opts.out_dir) / dir_name;
            save_matrix(out.final_dist, prefix.string() + "_reranked");
            save_matrix(out.feature, prefix.string() + "_feature");
            if (out.has_jaccard) save_matrix(out.jaccard, prefix.string() + "_jaccard");
        }
        reports.push_back(std::move(report));
    }
    const std::string table = report_table(reports);
    std::cout << table;
    write_text(fs::path(opts.out_dir) / "table.txt", table);
    return 0;
}

// Values from --config JSON fill in options the command line left untouched.
class ConfigDefaults {
public:
    template <typename T>
    void bind(CLI::Option* opt, std::string key, T& var) {
        appliers_.emplace_back([opt, key = std::move(key), &var](const nlohmann::json& j) {
            if (opt->count() == 0 && j.contains(key)) var = j.at(key).get<T>();
        });
    }
    void apply(const std::string& config_path) const {
        if (config_path.empty()) return;
        std::ifstream in(config_path);
        if (!in) throw ConfigError("cannot open config file '" + config_path + "'");
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("malformed config file '" + config_path + "': " + e.what());
        }
        for (const auto& apply : appliers_) apply(j);
    }

private:
    std::vector<std::function<void(const nlohmann::json&)>> appliers_;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"retrieval re-ranking and evaluation for video cross-modality re-identification"};
    app.require_subcommand(1);
    int threads = 0;

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic split");
    SynthOpts synth_opts;
    std::string synth_out;
    synth_opts.add_flags(synth_cmd);
    synth_cmd->add_option("--out", synth_out, "output directory")->required();
    synth_cmd->add_option("--threads", threads, "worker thread count (0 = auto)");

    // dist
    auto* dist_cmd = app.add_subcommand("dist", "compute feature distances");
    std::string dist_in, dist_out;
    bool dist_unsquared = false;
    dist_cmd->add_option("--in", dist_in, "split directory or manifest path")->required();
    dist_cmd->add_option("--out", dist_out, "output matrix prefix")->required();
    dist_cmd->add_flag("--unsquared", dist_unsquared, "emit sqrt distances");
    dist_cmd->add_option("--threads", threads, "worker thread count (0 = auto)");

    // rerank
    auto* rerank_cmd = app.add_subcommand("rerank", "compute a re-ranked distance matrix");
    std::string rerank_in, rerank_out;
    bool rerank_dump_stages = false;
    RerankOpts rerank_opts;
    rerank_cmd->add_option("--in", rerank_in, "split directory or manifest path")->required();
    rerank_opts.add_flags(rerank_cmd);
    rerank_cmd->add_option("--out", rerank_out, "output matrix prefix")->required();
    rerank_cmd->add_flag("--dump-stages", rerank_dump_stages,
                         "also dump feature and Jaccard matrices");
    rerank_cmd->add_option("--threads", threads, "worker thread count (0 = auto)");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "score a split");
    std::string eval_in, eval_report, eval_matrix;
    bool eval_exclude = false, eval_timing = false;
    RerankOpts eval_opts;
    eval_cmd->add_option("--in", eval_in, "split directory or manifest path")->required();
    eval_opts.add_flags(eval_cmd);
    eval_cmd->add_flag("--exclude-same-camera", eval_exclude,
                       "drop same-person same-camera gallery items per query");
    eval_cmd->add_option("--report", eval_report, "write the JSON report here");
    eval_cmd->add_option("--matrix", eval_matrix, "score this dumped matrix instead of computing");
    eval_cmd->add_flag("--timing", eval_timing, "include wall-clock timing in the JSON report");
    eval_cmd->add_option("--threads", threads, "worker thread count (0 = auto)");

    // schedule
    auto* sched_cmd = app.add_subcommand("schedule", "print curriculum weight schedule");
    std::string sched_strategy = "cosine", sched_csv;
    double sched_alpha = 0.3, sched_tau = 1.0, sched_phi = 3.0;
    int sched_epochs = 100;
    sched_cmd->add_option("--strategy", sched_strategy, "fixed|exponential|cosine");
    sched_cmd->add_option("--alpha", sched_alpha, "constant for the fixed strategy");
    sched_cmd->add_option("--tau", sched_tau, "decay rate for the exponential strategy");
    sched_cmd->add_option("--phi", sched_phi, "offset for the cosine strategy");
    sched_cmd->add_option("--epochs", sched_epochs, "total epochs");
    sched_cmd->add_option("--csv", sched_csv, "also write the schedule as CSV");

    // pipeline
    auto* pipe_cmd = app.add_subcommand("pipeline", "load/synth, re-rank, evaluate, report");
    PipelineOpts pipe;
    std::string pipe_config;
    ConfigDefaults defaults;
    auto* o_in = pipe_cmd->add_option("--in", pipe.in, "split directory or manifest path");
    auto* o_synth = pipe_cmd->add_flag("--synth", pipe.use_synth, "generate synthetic input");
    defaults.bind(o_in, "in", pipe.in);
    defaults.bind(o_synth, "synth", pipe.use_synth);
    {
        auto* c = pipe_cmd;
        auto& s = pipe.synth;
        defaults.bind(c->add_option("--seed", s.config.seed, "PRNG seed"), "seed", s.config.seed);
        defaults.bind(c->add_option("--num-ids", s.config.num_ids, "identities"), "num-ids",
                      s.config.num_ids);
        defaults.bind(c->add_option("--cams-per-id", s.config.cams_per_id, "cameras per id"),
                      "cams-per-id", s.config.cams_per_id);
        defaults.bind(c->add_option("--frames", s.config.frames_per_tracklet, "frames (T)"),
                      "frames", s.config.frames_per_tracklet);
        defaults.bind(c->add_option("--dim", s.config.dim, "feature dimension (D)"), "dim",
                      s.config.dim);
        defaults.bind(c->add_option("--identity-spread", s.config.identity_spread, "id sigma"),
                      "identity-spread", s.config.identity_spread);
        defaults.bind(
            c->add_option("--modality-offset", s.config.modality_offset_scale, "offset scale"),
            "modality-offset", s.config.modality_offset_scale);
        defaults.bind(
            c->add_option("--camera-offset", s.config.camera_offset_scale, "offset scale"),
            "camera-offset", s.config.camera_offset_scale);
        defaults.bind(c->add_option("--frame-noise", s.config.frame_noise, "noise sigma"),
                      "frame-noise", s.config.frame_noise);
        auto& r = pipe.rerank;
        defaults.bind(c->add_option("--mode", r.mode_name, "none|kreciprocal|temporal"), "mode",
                      r.mode_name);
        defaults.bind(c->add_option("--k1", r.config.k1, "neighborhood size"), "k1", r.config.k1);
        defaults.bind(c->add_option("--k2", r.config.k2, "expansion size"), "k2", r.config.k2);
        defaults.bind(c->add_option("--lambda1", r.config.lambda1, "feature weight"), "lambda1",
                      r.config.lambda1);
        defaults.bind(c->add_option("--lambda2", r.config.lambda2, "cross-temporal weight"),
                      "lambda2", r.config.lambda2);
        defaults.bind(c->add_option("--groups", r.config.num_groups, "temporal groups (L)"),
                      "groups", r.config.num_groups);
        defaults.bind(c->add_flag("--plain-sets", r.plain_sets, "plain reciprocal sets"),
                      "plain-sets", r.plain_sets);
        defaults.bind(c->add_flag("--exclude-same-camera", pipe.exclude_same_camera,
                                  "drop same-person same-camera gallery items"),
                      "exclude-same-camera", pipe.exclude_same_camera);
        defaults.bind(c->add_option("--directions", pipe.directions, "forward|reverse|both"),
                      "directions", pipe.directions);
        defaults.bind(c->add_option("--out-dir", pipe.out_dir, "output directory"), "out-dir",
                      pipe.out_dir);
        defaults.bind(c->add_flag("--timing", pipe.timing, "include timing in JSON reports"),
                      "timing", pipe.timing);
        defaults.bind(c->add_flag("--dump-matrices", pipe.dump_matrices, "dump stage matrices"),
                      "dump-matrices", pipe.dump_matrices);
        defaults.bind(c->add_option("--threads", threads, "worker thread count (0 = auto)"),
                      "threads", threads);
    }
    pipe_cmd->add_option("--config", pipe_config, "JSON config file (flags win)");

    try {
        app.parse(argc, argv);
        if (pipe_cmd->parsed()) defaults.apply(pipe_config);
        if (threads > 0) set_thread_count(threads);

        if (synth_cmd->parsed()) return run_synth(synth_opts, synth_out);
        if (dist_cmd->parsed()) return run_dist(dist_in, dist_out, dist_unsquared);
        if (rerank_cmd->parsed())
            return run_rerank(rerank_in, rerank_opts, rerank_out, rerank_dump_stages);
        if (eval_cmd->parsed())
            return run_eval(eval_in, eval_opts, eval_exclude, eval_report, eval_matrix,
                            eval_timing);
        if (sched_cmd->parsed())
            return run_schedule(sched_strategy, sched_alpha, sched_tau, sched_phi, sched_epochs,
                                sched_csv);
        if (pipe_cmd->parsed()) return run_pipeline(pipe);
        return 2;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ConfigError& e) {
        std::cerr << "[" << g_stage << "] config error: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "[" << g_stage << "] data error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "[" << g_stage << "] internal error: " << e.what() << "\n";
        return 4;
    }
}
