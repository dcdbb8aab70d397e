// longdiff command-line driver.
//
// Exit codes: 0 success, 1 validation error, 2 I/O error.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "longdiff/attention.hpp"
#include "longdiff/config.hpp"
#include "longdiff/error.hpp"
#include "longdiff/keyframe.hpp"
#include "longdiff/pipeline.hpp"
#include "longdiff/position_mapping.hpp"
#include "longdiff/tensor_io.hpp"
#include "longdiff/theory.hpp"

namespace fs = std::filesystem;
using namespace longdiff;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

struct Globals {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
};

std::string require_out(const Globals& g) {
    require(!g.out.empty(), "--out is required for this subcommand");
    return g.out;
}

fs::path ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) fail(ErrorCode::Io, "cannot create directory " + dir + ": " + ec.message());
    return fs::path(dir);
}

RunConfig config_or_default(const Globals& g) {
    RunConfig cfg = g.config.empty() ? RunConfig{} : load_run_config(g.config);
    if (g.seed) cfg.seed = *g.seed;
    return cfg;
}

std::vector<std::size_t> parse_index_list(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            std::size_t used = 0;
            const long long v = std::stoll(item, &used);
            require(used == item.size() && v >= 0, "bad index '" + item + "'");
            out.push_back(static_cast<std::size_t>(v));
        } catch (const std::logic_error&) {
            fail(ErrorCode::InvalidArgument, "bad index '" + item + "'");
        }
    }
    return out;
}

json theorem1_json(const Theorem1Report& r) {
    return json{{"sup_logit", r.sup_logit}, {"epsilon_uni", r.epsilon_uni}, {"r", r.r},
                {"g", r.g},                 {"rhs", r.rhs},                 {"satisfied", r.satisfied}};
}

// --- subcommands -----------------------------------------------------------

struct GenFeaturesArgs {
    std::size_t n = 16, c = 4, hw = 64;
};

void cmd_gen_features(const Globals& g, const GenFeaturesArgs& a) {
    write_tensor(synth_features(a.n, a.c, a.hw, g.seed.value_or(0)), require_out(g));
}

struct PositionMapArgs {
    std::size_t n = 0, g = 0;
    bool absolute = false;
};

void cmd_position_map(const Globals& g, const PositionMapArgs& a) {
    const auto dir = ensure_dir(require_out(g));
    const GroupConfig cfg = group_config(a.n, a.g);
    const PositionSchedule sched = schedule(cfg);
    for (std::size_t m = 0; m < sched.matrices.size(); ++m) {
        write_tensor(sched.matrices[m].to_tensor(), dir / ("position_m" + std::to_string(m) + ".ldt"));
    }
    json meta{{"N", cfg.frames}, {"G", cfg.groups}, {"S", cfg.group_size}, {"M", cfg.shifts},
              {"files", sched.matrices.size()}};
    if (a.absolute) {
        const auto vectors = absolute_schedule(cfg);
        Tensor t({vectors.size(), cfg.frames});
        for (std::size_t m = 0; m < vectors.size(); ++m) {
            for (std::size_t i = 0; i < cfg.frames; ++i) {
                t.data[m * cfg.frames + i] = static_cast<double>(vectors[m][i]);
            }
        }
        write_tensor(t, dir / "absolute.ldt");
    }
    save_json(meta, dir / "schedule.json");
}

struct AttendArgs {
    std::string q, k, v, mask, variant = "longdiff", mask_mode = "renormalize";
    long p_max = 16;
    double pretrain_max = 16.0;
    bool per_shift = false;
};

void cmd_attend(const Globals& g, const AttendArgs& a) {
    const auto dir = ensure_dir(require_out(g));
    const RunConfig cfg = config_or_default(g);
    const Matrix q = Matrix::from_tensor(read_tensor(a.q));
    const Matrix k = Matrix::from_tensor(read_tensor(a.k));
    const Matrix v = Matrix::from_tensor(read_tensor(a.v));
    require(q.rows() == cfg.N, "Q frame count does not match config N", ErrorCode::ShapeMismatch);
    std::optional<AttentionMask> mask;
    if (!a.mask.empty()) mask = AttentionMask::from_tensor(read_tensor(a.mask));
    const AttentionMask* mask_ptr = mask ? &*mask : nullptr;
    const MaskMode mode = parse_mask_mode(a.mask_mode);

    Matrix averaged, output;
    if (a.variant == "longdiff") {
        const auto sched = schedule(group_config(cfg.N, cfg.G));
        auto r = longdiff_attention(q, k, v, sched, mask_ptr, cfg.rpe, {mode, a.per_shift});
        for (std::size_t m = 0; m < r.per_shift_attention.size(); ++m) {
            write_tensor(r.per_shift_attention[m].to_tensor(),
                         dir / ("attention_m" + std::to_string(m) + ".ldt"));
        }
        averaged = std::move(r.averaged_attention);
        output = std::move(r.output);
    } else {
        SingleAttention r;
        if (a.variant == "vanilla") {
            r = vanilla_attention(q, k, v, mask_ptr, cfg.rpe, mode);
        } else if (a.variant == "clip") {
            r = clipped_attention(q, k, v, a.p_max, mask_ptr, cfg.rpe, mode);
        } else if (a.variant == "interpolate") {
            r = interpolated_attention(q, k, v, a.pretrain_max, mask_ptr, cfg.rpe, mode);
        } else if (a.variant == "group") {
            r = group_only_attention(q, k, v, group_config(cfg.N, cfg.G), mask_ptr, cfg.rpe, mode);
        } else {
            fail(ErrorCode::InvalidArgument, "unknown attention variant '" + a.variant + "'");
        }
        averaged = std::move(r.weights);
        output = std::move(r.output);
    }
    write_tensor(averaged.to_tensor(), dir / "averaged_attention.ldt");
    write_tensor(output.to_tensor(), dir / "output.ldt");
}

struct KeyframesArgs {
    std::string features, sad_mode = "mean", mask_out;
    std::size_t n = 8;
    double alpha = 2.0;
    std::optional<std::size_t> neighbor_range;
};

void cmd_keyframes(const Globals& g, const KeyframesArgs& a) {
    const std::string out = require_out(g);
    const Tensor features = read_tensor(a.features);
    const PseudoVideo video = make_pseudo_video(features);
    const SadMode mode = parse_sad_mode(a.sad_mode);
    const auto scores = score_frames(video, a.alpha, mode);
    const auto keys = select_keyframes(scores, a.n);

    json frames = json::array();
    for (const auto& s : scores) {
        frames.push_back({{"index", s.index}, {"entropy", s.entropy}, {"sad", s.sad}, {"score", s.score}});
    }
    save_json(json{{"N", video.frames()},
                   {"n", a.n},
                   {"alpha", a.alpha},
                   {"sad_mode", to_string(mode)},
                   {"frames", std::move(frames)},
                   {"key_frames", keys}},
              out);
    if (!a.mask_out.empty()) {
        const auto mask = build_ifs_mask(video.frames(), a.neighbor_range.value_or(8), keys);
        write_tensor(mask.allowed.to_tensor(), a.mask_out);
    }
}

struct MaskArgs {
    std::size_t n = 0, l = 0;
    std::string keys;
};

void cmd_mask(const Globals& g, const MaskArgs& a) {
    const auto keys = parse_index_list(a.keys);
    write_tensor(build_ifs_mask(a.n, a.l, keys).allowed.to_tensor(), require_out(g));
}

struct Theorem1Args {
    std::string heads;
    std::size_t n = 128;
    std::size_t synthetic = 0;
    std::size_t samples = 64;
};

std::vector<HeadSamples> load_heads(const fs::path& dir, const RPEKind& fallback) {
    const json index = load_json(dir / "heads.json");
    require(index.contains("heads") && index["heads"].is_array(),
            "heads.json must contain a 'heads' array");
    std::vector<HeadSamples> heads;
    for (const auto& h : index["heads"]) {
        require(h.contains("q") && h.contains("k"), "each head needs 'q' and 'k' tensor files");
        HeadSamples head{h.contains("rpe") ? rpe_from_json(h["rpe"]) : fallback,
                         Matrix::from_tensor(read_tensor(dir / h["q"].get<std::string>())),
                         Matrix::from_tensor(read_tensor(dir / h["k"].get<std::string>()))};
        heads.push_back(std::move(head));
    }
    return heads;
}

void cmd_theorem1(const Globals& g, const Theorem1Args& a) {
    const std::string out = require_out(g);
    std::vector<HeadSamples> heads;
    if (a.synthetic > 0) {
        heads = synthetic_head_suite(a.synthetic, a.samples, g.seed.value_or(3));
    } else {
        require(!a.heads.empty(), "analyze-theorem1 needs --heads <dir> or --synthetic <count>");
        heads = load_heads(a.heads, config_or_default(g).rpe);
    }
    const SurveyReport survey = head_survey(heads, a.n);
    json per_head = json::array();
    for (const auto& h : survey.heads) {
        json j = theorem1_json(h.theorem1);
        j["sample_count"] = h.sample_count;
        j["sup_is_sample_lower_bound"] = true;
        j["epsilon_probe"] = h.adjacent_pair_epsilon ? "adjacent_pairs" : "half_offsets";
        per_head.push_back(std::move(j));
    }
    save_json(json{{"N", survey.frames},
                   {"g", 2 * survey.frames - 1},
                   {"fraction_satisfied", survey.fraction_satisfied},
                   {"heads", std::move(per_head)}},
              out);
}

void cmd_entropy(const Globals& g, const std::string& logits_path) {
    const std::string out = require_out(g);
    const Tensor t = read_tensor(logits_path);
    require(t.rank() == 1 || t.rank() == 2, "logits tensor must be rank 1 or 2",
            ErrorCode::ShapeMismatch);
    const std::size_t width = t.dims.back();
    const std::size_t rows = t.rank() == 1 ? 1 : t.dims[0];
    json reports = json::array();
    bool all_hold = true;
    for (std::size_t r = 0; r < rows; ++r) {
        const auto rep = entropy_check(std::span<const double>(t.data.data() + r * width, width));
        all_hold = all_hold && rep.holds;
        reports.push_back({{"entropy", rep.entropy}, {"bound", rep.bound}, {"B", rep.B}, {"holds", rep.holds}});
    }
    save_json(json{{"N", width}, {"rows", std::move(reports)}, {"all_hold", all_hold}}, out);
}

struct PipelineArgs {
    std::string features, mask_mode = "renormalize", sad_mode = "mean";
    std::size_t layers = 16, channels = 16, hw = 16;
    bool timing = false;
    bool dump = false;
};

void cmd_pipeline(const Globals& g, const PipelineArgs& a) {
    const auto dir = ensure_dir(require_out(g));
    const RunConfig cfg = config_or_default(g);
    const Tensor features = a.features.empty()
                                ? synth_features(cfg.N, a.channels, a.hw, cfg.seed)
                                : read_tensor(a.features);
    PipelineOptions opts;
    opts.layers = a.layers;
    opts.mask_mode = parse_mask_mode(a.mask_mode);
    opts.sad_mode = parse_sad_mode(a.sad_mode);
    opts.keep_layer_outputs = a.dump;

    const PipelineResult result = run_pipeline(cfg, features, opts);
    write_tensor(result.output, dir / "output.ldt");
    save_json(to_json(result.report, a.timing), dir / "report.json");
    emit_stats(result.report, dir / "stats.csv");
    if (a.dump) {
        for (std::size_t l = 0; l < result.layer_outputs.size(); ++l) {
            write_tensor(result.layer_outputs[l], dir / ("layer_" + std::to_string(l) + ".ldt"));
        }
        std::size_t m = 0;
        for (const auto& rec : result.report.layers) {
            if (!rec.is_longdiff) continue;
            write_tensor(result.masks[m++].allowed.to_tensor(),
                         dir / ("mask_layer_" + std::to_string(rec.index) + ".ldt"));
        }
    }
}

void cmd_stats(const Globals& g, const std::string& report_path) {
    emit_stats(run_report_from_json(load_json(report_path)), require_out(g));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"LongDiff long-video temporal attention toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    std::uint64_t seed_value = 0;
    app.add_option("--config", g.config, "Run configuration JSON");
    auto* seed_opt = app.add_option("--seed", seed_value, "Random seed (u64)");
    app.add_option("--out", g.out, "Output file or directory");

    GenFeaturesArgs gen;
    auto* gen_cmd = app.add_subcommand("gen-features", "Write seeded synthetic N x C x hw features");
    gen_cmd->add_option("--n", gen.n, "Frames")->check(CLI::PositiveNumber);
    gen_cmd->add_option("--c", gen.c, "Channels")->check(CLI::PositiveNumber);
    gen_cmd->add_option("--hw", gen.hw, "Spatial size")->check(CLI::PositiveNumber);

    PositionMapArgs pm;
    auto* pm_cmd = app.add_subcommand("position-map", "Write the GROUP/SHIFT position matrices");
    pm_cmd->add_option("--n", pm.n, "Frames")->required();
    pm_cmd->add_option("--g", pm.g, "Groups")->required();
    pm_cmd->add_flag("--absolute", pm.absolute, "Also write the absolute-position schedule");

    AttendArgs at;
    auto* at_cmd = app.add_subcommand("attend", "Temporal attention on Q/K/V tensors");
    at_cmd->add_option("--q", at.q)->required();
    at_cmd->add_option("--k", at.k)->required();
    at_cmd->add_option("--v", at.v)->required();
    at_cmd->add_option("--mask", at.mask, "N x N 0/1 mask tensor");
    at_cmd->add_option("--variant", at.variant, "longdiff|vanilla|clip|interpolate|group");
    at_cmd->add_option("--mask-mode", at.mask_mode, "renormalize|literal_zero");
    at_cmd->add_option("--p-max", at.p_max, "Clip range for --variant clip");
    at_cmd->add_option("--pretrain-max", at.pretrain_max, "Target range for --variant interpolate");
    at_cmd->add_flag("--per-shift", at.per_shift, "Also write each shift's attention");

    KeyframesArgs kf;
    auto* kf_cmd = app.add_subcommand("keyframes", "Score frames and select key frames");
    kf_cmd->add_option("--features", kf.features)->required();
    kf_cmd->add_option("--n", kf.n, "Key-frame count");
    kf_cmd->add_option("--alpha", kf.alpha, "Entropy weight");
    kf_cmd->add_option("--sad-mode", kf.sad_mode, "mean|sum");
    kf_cmd->add_option("--mask-out", kf.mask_out, "Also write the IFS mask here");
    kf_cmd->add_option("--l", kf.neighbor_range, "Neighbor range for --mask-out");

    MaskArgs mk;
    auto* mk_cmd = app.add_subcommand("mask", "Build an IFS mask");
    mk_cmd->add_option("--n", mk.n, "Frames")->required();
    mk_cmd->add_option("--l", mk.l, "Neighbor range")->required();
    mk_cmd->add_option("--keys", mk.keys, "Comma-separated key frames");

    Theorem1Args t1;
    auto* t1_cmd = app.add_subcommand("analyze-theorem1", "Distinguishability survey over heads");
    t1_cmd->add_option("--heads", t1.heads, "Directory with heads.json");
    t1_cmd->add_option("--n", t1.n, "Frames")->check(CLI::Range(2, 1 << 20));
    t1_cmd->add_option("--synthetic", t1.synthetic, "Use a synthetic suite of this many heads");
    t1_cmd->add_option("--samples", t1.samples, "Samples per synthetic head");

    std::string logits_path;
    auto* en_cmd = app.add_subcommand("analyze-entropy", "Entropy lower-bound check");
    en_cmd->add_option("--logits", logits_path)->required();

    PipelineArgs pl;
    auto* pl_cmd = app.add_subcommand("pipeline", "Run the mock temporal layer stack");
    pl_cmd->add_option("--features", pl.features, "N x C x hw features (synthetic if omitted)");
    pl_cmd->add_option("--layers", pl.layers, "Temporal layers")->check(CLI::PositiveNumber);
    pl_cmd->add_option("--channels", pl.channels, "Synthetic channel count");
    pl_cmd->add_option("--hw", pl.hw, "Synthetic spatial size");
    pl_cmd->add_option("--mask-mode", pl.mask_mode, "renormalize|literal_zero");
    pl_cmd->add_option("--sad-mode", pl.sad_mode, "mean|sum");
    pl_cmd->add_flag("--timing", pl.timing, "Include per-layer wall clock in report.json");
    pl_cmd->add_flag("--dump", pl.dump, "Write per-layer outputs and masks");

    std::string report_path;
    auto* st_cmd = app.add_subcommand("stats", "Per-layer CSV from a run report");
    st_cmd->add_option("--report", report_path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }
    if (seed_opt->count() > 0) g.seed = seed_value;

    try {
        if (*gen_cmd) cmd_gen_features(g, gen);
        else if (*pm_cmd) cmd_position_map(g, pm);
        else if (*at_cmd) cmd_attend(g, at);
        else if (*kf_cmd) cmd_keyframes(g, kf);
        else if (*mk_cmd) cmd_mask(g, mk);
        else if (*t1_cmd) cmd_theorem1(g, t1);
        else if (*en_cmd) cmd_entropy(g, logits_path);
        else if (*pl_cmd) cmd_pipeline(g, pl);
        else if (*st_cmd) cmd_stats(g, report_path);
    } catch (const Error& e) {
        std::cerr << "longdiff: " << to_string(e.code()) << ": " << e.what() << '\n';
        return e.is_io() ? kExitIo : kExitValidation;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "longdiff: io: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "longdiff: " << e.what() << '\n';
        return kExitValidation;
    }
    return 0;
}
