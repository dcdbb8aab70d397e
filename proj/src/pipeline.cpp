#include "longdiff/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "longdiff/error.hpp"
#include "longdiff/parallel.hpp"
#include "longdiff/random.hpp"
#include "longdiff/tensor_io.hpp"

namespace longdiff {

bool LayerPlan::is_longdiff(std::size_t layer) const {
    return std::binary_search(longdiff_layers.begin(), longdiff_layers.end(), layer);
}

LayerPlan plan_layers(std::size_t total, double replace_fraction) {
    require(total >= 1, "layer plan needs at least one layer");
    require(replace_fraction >= 0.0 && replace_fraction <= 1.0,
            "replace_fraction must lie in [0, 1]");
    const auto count = static_cast<std::size_t>(
        std::round(replace_fraction * static_cast<double>(total)));
    LayerPlan plan{total, {}};
    plan.longdiff_layers.reserve(count);
    for (std::size_t s = 0; s < count; ++s) plan.longdiff_layers.push_back(s * total / count);
    return plan;
}

LayerWeights layer_weights(std::uint64_t seed, std::size_t layer, std::size_t channels,
                           std::size_t head_dim) {
    const std::uint64_t base = derive_seed(seed, 0x4C41594552ULL + layer);  // "LAYER"
    const double in_scale = 1.0 / std::sqrt(static_cast<double>(channels));
    const double out_scale = 1.0 / std::sqrt(static_cast<double>(head_dim));
    return LayerWeights{synth_matrix(channels, head_dim, derive_seed(base, 0), in_scale),
                        synth_matrix(channels, head_dim, derive_seed(base, 1), in_scale),
                        synth_matrix(channels, head_dim, derive_seed(base, 2), in_scale),
                        synth_matrix(head_dim, channels, derive_seed(base, 3), out_scale)};
}

Tensor temporal_layer(const Tensor& features, const LayerWeights& weights, const RPEKind& rpe,
                      const PositionSchedule* sched, const AttentionMask* mask, MaskMode mode,
                      LayerStats* stats) {
    require(features.rank() == 3, "features must be N x C x hw", ErrorCode::ShapeMismatch);
    const std::size_t n = features.dims[0];
    const std::size_t c = features.dims[1];
    const std::size_t hw = features.dims[2];
    require(weights.wq.rows() == c, "projection width does not match channel count",
            ErrorCode::ShapeMismatch);

    // Per spatial position: attention map and residual update, reduced in
    // ascending position order afterwards.
    std::vector<Matrix> attn(hw);
    std::vector<Matrix> update(hw);
    const PositionMatrix exact = sched ? PositionMatrix{} : relative_matrix(n);

    parallel_for(hw, [&](std::size_t s) {
        Matrix x(n, c);
        for (std::size_t f = 0; f < n; ++f) {
            for (std::size_t ch = 0; ch < c; ++ch) {
                x(f, ch) = features.data[(f * c + ch) * hw + s];
            }
        }
        const Matrix q = matmul(x, weights.wq);
        const Matrix k = matmul(x, weights.wk);
        const Matrix v = matmul(x, weights.wv);
        if (sched) {
            AttentionResult r = longdiff_attention(q, k, v, *sched, mask, rpe, {mode, false});
            attn[s] = std::move(r.averaged_attention);
            update[s] = matmul(r.output, weights.wo);
        } else {
            SingleAttention r = attention_single(q, k, v, exact, mask, rpe, mode);
            attn[s] = std::move(r.weights);
            update[s] = matmul(r.output, weights.wo);
        }
    });

    Tensor out = features;
    for (std::size_t s = 0; s < hw; ++s) {
        for (std::size_t f = 0; f < n; ++f) {
            for (std::size_t ch = 0; ch < c; ++ch) {
                out.data[(f * c + ch) * hw + s] += update[s](f, ch);
            }
        }
    }

    if (stats) {
        LayerStats st;
        st.min_weight = std::numeric_limits<double>::infinity();
        st.max_weight = -std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < hw; ++s) {
            for (std::size_t i = 0; i < n; ++i) {
                const auto row = attn[s].row(i);
                st.entropy_sum += row_entropy(row);
                ++st.rows;
                for (double w : row) {
                    st.min_weight = std::min(st.min_weight, w);
                    st.max_weight = std::max(st.max_weight, w);
                }
            }
        }
        *stats = st;
    }
    return out;
}

PipelineResult run_pipeline(const RunConfig& cfg, const Tensor& features,
                            const PipelineOptions& options) {
    cfg.validate();
    require(options.layers >= 1, "pipeline needs at least one layer");
    require(features.rank() == 3, "features must be N x C x hw", ErrorCode::ShapeMismatch);
    features.validate();
    require(features.dims[0] == cfg.N,
            "feature frame count " + std::to_string(features.dims[0]) +
                " does not match config N=" + std::to_string(cfg.N),
            ErrorCode::ShapeMismatch);
    require(features.dims[1] >= 1 && features.dims[2] >= 1, "features need C, hw >= 1",
            ErrorCode::ShapeMismatch);

    const LayerPlan plan = plan_layers(options.layers, cfg.replace_fraction);
    const PositionSchedule sched = schedule(group_config(cfg.N, cfg.G));
    const std::size_t channels = features.dims[1];
    const std::size_t d = head_dim(cfg.rpe);

    PipelineResult result;
    result.report.config = cfg;
    result.report.options = options;
    result.report.feature_dims = features.dims;

    Tensor current = features;
    for (std::size_t layer = 0; layer < options.layers; ++layer) {
        const auto start = std::chrono::steady_clock::now();
        LayerRecord rec;
        rec.index = layer;
        rec.is_longdiff = plan.is_longdiff(layer);
        const LayerWeights weights = layer_weights(cfg.seed, layer, channels, d);

        LayerStats stats;
        if (rec.is_longdiff) {
            const PseudoVideo video = make_pseudo_video(current);
            std::vector<std::size_t> keys;
            if (cfg.n > 0) keys = detect_keyframes(video, cfg.n, cfg.alpha, options.sad_mode);
            IFSMask mask = build_ifs_mask(cfg.N, cfg.L, keys);
            current = temporal_layer(current, weights, cfg.rpe, &sched, &mask.allowed,
                                     options.mask_mode, &stats);
            rec.key_frames = mask.key_frames;
            rec.max_allowed_per_row = mask.allowed.max_allowed_per_row();
            result.masks.push_back(std::move(mask));
        } else {
            current = temporal_layer(current, weights, cfg.rpe, nullptr, nullptr,
                                     options.mask_mode, &stats);
            rec.max_allowed_per_row = cfg.N;
        }
        rec.mean_row_entropy = stats.rows ? stats.entropy_sum / static_cast<double>(stats.rows) : 0.0;
        rec.min_weight = stats.min_weight;
        rec.max_weight = stats.max_weight;
        rec.elapsed_ms = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - start)
                             .count();
        result.report.layers.push_back(std::move(rec));
        if (options.keep_layer_outputs) result.layer_outputs.push_back(current);
    }
    result.output = std::move(current);
    return result;
}

json to_json(const RunReport& report, bool include_timing) {
    json layers = json::array();
    for (const auto& rec : report.layers) {
        json l{{"index", rec.index},
               {"is_longdiff", rec.is_longdiff},
               {"mean_row_entropy", rec.mean_row_entropy},
               {"min_weight", rec.min_weight},
               {"max_weight", rec.max_weight},
               {"max_allowed_per_row", rec.max_allowed_per_row},
               {"key_frames", rec.key_frames}};
        if (include_timing) l["elapsed_ms"] = rec.elapsed_ms;
        layers.push_back(std::move(l));
    }
    return json{{"config", to_json(report.config)},
                {"layers_total", report.options.layers},
                {"mask_mode", to_string(report.options.mask_mode)},
                {"sad_mode", to_string(report.options.sad_mode)},
                {"feature_dims", report.feature_dims},
                {"layers", std::move(layers)}};
}

RunReport run_report_from_json(const json& j) {
    RunReport report;
    try {
        report.config = run_config_from_json(j.at("config"));
        report.options.layers = j.at("layers_total").get<std::size_t>();
        report.options.mask_mode = parse_mask_mode(j.at("mask_mode").get<std::string>());
        report.options.sad_mode = parse_sad_mode(j.at("sad_mode").get<std::string>());
        report.feature_dims = j.at("feature_dims").get<std::vector<std::size_t>>();
        for (const auto& l : j.at("layers")) {
            LayerRecord rec;
            rec.index = l.at("index").get<std::size_t>();
            rec.is_longdiff = l.at("is_longdiff").get<bool>();
            rec.mean_row_entropy = l.at("mean_row_entropy").get<double>();
            rec.min_weight = l.at("min_weight").get<double>();
            rec.max_weight = l.at("max_weight").get<double>();
            rec.max_allowed_per_row = l.at("max_allowed_per_row").get<std::size_t>();
            rec.key_frames = l.at("key_frames").get<std::vector<std::size_t>>();
            rec.elapsed_ms = l.value("elapsed_ms", 0.0);
            report.layers.push_back(std::move(rec));
        }
    } catch (const json::exception& e) {
        fail(ErrorCode::InvalidArgument, std::string("malformed run report: ") + e.what());
    }
    return report;
}

namespace {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string stats_csv(const RunReport& report) {
    std::ostringstream out;
    out << "layer,is_longdiff,mean_row_entropy,min_weight,max_weight,key_frames,ms\n";
    for (const auto& rec : report.layers) {
        out << rec.index << ',' << (rec.is_longdiff ? 1 : 0) << ','
            << format_double(rec.mean_row_entropy) << ',' << format_double(rec.min_weight) << ','
            << format_double(rec.max_weight) << ',';
        for (std::size_t i = 0; i < rec.key_frames.size(); ++i) {
            if (i) out << ';';
            out << rec.key_frames[i];
        }
        char ms[32];
        std::snprintf(ms, sizeof ms, "%.3f", rec.elapsed_ms);
        out << ',' << ms << '\n';
    }
    return out.str();
}

void emit_stats(const RunReport& report, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) fail(ErrorCode::Io, "cannot open " + path.string() + " for writing");
    out << stats_csv(report);
    if (!out) fail(ErrorCode::Io, "failed writing " + path.string());
}

}  // namespace longdiff
