#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "longdiff/attention.hpp"
#include "longdiff/config.hpp"
#include "longdiff/keyframe.hpp"
#include "longdiff/tensor.hpp"

namespace longdiff {

struct LayerPlan {
    std::size_t total_layers = 0;
    std::vector<std::size_t> longdiff_layers;  // strictly increasing

    bool is_longdiff(std::size_t layer) const;
};

// round(fraction * total) layers, evenly spaced from index 0:
// selected[s] = floor(s * total / count).
LayerPlan plan_layers(std::size_t total, double replace_fraction);

struct PipelineOptions {
    std::size_t layers = 16;
    MaskMode mask_mode = MaskMode::Renormalize;
    SadMode sad_mode = SadMode::Mean;
    bool keep_layer_outputs = false;
};

struct LayerRecord {
    std::size_t index = 0;
    bool is_longdiff = false;
    double mean_row_entropy = 0.0;  // nats, over every row of every spatial position
    double min_weight = 0.0;
    double max_weight = 0.0;
    std::size_t max_allowed_per_row = 0;
    std::vector<std::size_t> key_frames;
    double elapsed_ms = 0.0;  // wall clock; the only non-deterministic field
};

struct RunReport {
    RunConfig config;
    PipelineOptions options;
    std::vector<std::size_t> feature_dims;
    std::vector<LayerRecord> layers;
};

struct PipelineResult {
    RunReport report;
    Tensor output;
    std::vector<Tensor> layer_outputs;  // when keep_layer_outputs
    std::vector<IFSMask> masks;         // one per LongDiff layer, in layer order
};

// Projection weights for layer l: Wq, Wk, Wv (C x d) and Wo (d x C), drawn
// from the counter generator with stream seeds derived from (seed, l).
struct LayerWeights {
    Matrix wq, wk, wv, wo;
};
LayerWeights layer_weights(std::uint64_t seed, std::size_t layer, std::size_t channels,
                           std::size_t head_dim);

// One temporal layer over N x C x hw features: at every spatial position the
// N frame vectors are projected to Q/K/V, attended over the frame axis and
// projected back as a residual update. `mask` and `sched` select the LongDiff
// path; a null schedule means vanilla attention on exact positions.
struct LayerStats {
    double entropy_sum = 0.0;
    std::size_t rows = 0;
    double min_weight = 0.0;
    double max_weight = 0.0;
};
Tensor temporal_layer(const Tensor& features, const LayerWeights& weights, const RPEKind& rpe,
                      const PositionSchedule* sched, const AttentionMask* mask, MaskMode mode,
                      LayerStats* stats = nullptr);

PipelineResult run_pipeline(const RunConfig& cfg, const Tensor& features,
                            const PipelineOptions& options = {});

// Timings are left out unless asked for, so the JSON is byte-stable.
json to_json(const RunReport& report, bool include_timing = false);
RunReport run_report_from_json(const json& j);

// CSV: layer,is_longdiff,mean_row_entropy,min_weight,max_weight,key_frames,ms
std::string stats_csv(const RunReport& report);
void emit_stats(const RunReport& report, const std::filesystem::path& path);

}  // namespace longdiff
