#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "longdiff/mask.hpp"
#include "longdiff/position_mapping.hpp"
#include "longdiff/rpe.hpp"
#include "longdiff/tensor.hpp"

namespace longdiff {

// How a mask is applied. Renormalize sets disallowed logits to -inf so each
// row is a distribution over its allowed frames. LiteralZero runs the full
// softmax and then zeroes disallowed weights, leaving rows that sum below 1.
enum class MaskMode { Renormalize, LiteralZero };

const char* to_string(MaskMode mode) noexcept;
MaskMode parse_mask_mode(const std::string& text);

struct SingleAttention {
    Matrix weights;  // N x N
    Matrix output;   // N x d, weights * V
};

struct AttentionResult {
    Matrix averaged_attention;               // mean over shifts, ascending m
    std::vector<Matrix> per_shift_attention;  // filled when requested
    Matrix output;                           // averaged_attention * V
};

struct AttentionOptions {
    MaskMode mask_mode = MaskMode::Renormalize;
    bool keep_per_shift = false;
};

// logits(i, j) = f(q_i, k_j, positions(i, j)).
Matrix attention_logits(const Matrix& q, const Matrix& k, const PositionMatrix& positions,
                        const RPEKind& rpe);
Matrix attention_logits(const Matrix& q, const Matrix& k, const Matrix& positions,
                        const RPEKind& rpe);

// Row softmax of logits under an optional mask (nullptr admits every column).
// Throws if a row admits no column.
Matrix masked_softmax(const Matrix& logits, const AttentionMask* mask, MaskMode mode);

SingleAttention attention_single(const Matrix& q, const Matrix& k, const Matrix& v,
                                 const PositionMatrix& positions, const AttentionMask* mask,
                                 const RPEKind& rpe, MaskMode mode = MaskMode::Renormalize);

// Fractional positions; only rotary encodings accept them.
SingleAttention attention_single(const Matrix& q, const Matrix& k, const Matrix& v,
                                 const Matrix& positions, const AttentionMask* mask,
                                 const RPEKind& rpe, MaskMode mode = MaskMode::Renormalize);

// Attention on the exact relative positions i - j.
SingleAttention vanilla_attention(const Matrix& q, const Matrix& k, const Matrix& v,
                                  const AttentionMask* mask, const RPEKind& rpe,
                                  MaskMode mode = MaskMode::Renormalize);

// One softmax attention per schedule matrix, averaged in ascending m, then
// multiplied by V once.
AttentionResult longdiff_attention(const Matrix& q, const Matrix& k, const Matrix& v,
                                   const PositionSchedule& sched, const AttentionMask* mask,
                                   const RPEKind& rpe, const AttentionOptions& options = {});

// Ablation baselines.
PositionMatrix clip_positions(const PositionMatrix& mat, std::int64_t p_max);
Matrix interpolate_positions(const PositionMatrix& mat, double pretrain_max);

SingleAttention clipped_attention(const Matrix& q, const Matrix& k, const Matrix& v,
                                  std::int64_t p_max, const AttentionMask* mask,
                                  const RPEKind& rpe, MaskMode mode = MaskMode::Renormalize);
// Throws Unsupported for additive-bias encodings.
SingleAttention interpolated_attention(const Matrix& q, const Matrix& k, const Matrix& v,
                                       double pretrain_max, const AttentionMask* mask,
                                       const RPEKind& rpe,
                                       MaskMode mode = MaskMode::Renormalize);
// GROUP without SHIFT: the schedule's first matrix only.
SingleAttention group_only_attention(const Matrix& q, const Matrix& k, const Matrix& v,
                                     const GroupConfig& cfg, const AttentionMask* mask,
                                     const RPEKind& rpe, MaskMode mode = MaskMode::Renormalize);

// Row entropy -sum w ln w in nats, 0 ln 0 = 0.
double row_entropy(std::span<const double> weights);

}  // namespace longdiff
