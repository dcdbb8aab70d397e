#include "longdiff/attention.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "longdiff/error.hpp"
#include "longdiff/parallel.hpp"
#include "rpe_detail.hpp"

namespace longdiff {

const char* to_string(MaskMode mode) noexcept {
    return mode == MaskMode::Renormalize ? "renormalize" : "literal_zero";
}

MaskMode parse_mask_mode(const std::string& text) {
    if (text == "renormalize") return MaskMode::Renormalize;
    if (text == "literal_zero") return MaskMode::LiteralZero;
    fail(ErrorCode::InvalidArgument, "unknown mask_mode '" + text + "'");
}

std::size_t AttentionMask::allowed_in_row(std::size_t i) const {
    std::size_t count = 0;
    for (std::size_t j = 0; j < n_; ++j) count += allowed_[i * n_ + j];
    return count;
}

std::size_t AttentionMask::max_allowed_per_row() const {
    std::size_t best = 0;
    for (std::size_t i = 0; i < n_; ++i) best = std::max(best, allowed_in_row(i));
    return best;
}

Tensor AttentionMask::to_tensor() const {
    Tensor t({n_, n_});
    for (std::size_t k = 0; k < allowed_.size(); ++k) t.data[k] = allowed_[k] ? 1.0 : 0.0;
    return t;
}

AttentionMask AttentionMask::from_tensor(const Tensor& t) {
    require(t.rank() == 2 && t.dims[0] == t.dims[1], "mask tensor must be N x N",
            ErrorCode::ShapeMismatch);
    t.validate();
    AttentionMask m(t.dims[0]);
    for (std::size_t k = 0; k < t.size(); ++k) {
        require(t.data[k] == 0.0 || t.data[k] == 1.0, "mask entries must be 0 or 1");
        m.allowed_[k] = t.data[k] == 1.0 ? 1 : 0;
    }
    return m;
}

namespace {

void check_qkv(const Matrix& q, const Matrix& k, const Matrix* v, const RPEKind& rpe,
               std::size_t positions_n) {
    validate(rpe);
    const auto d = head_dim(rpe);
    require(q.rows() == k.rows(), "Q and K must have the same frame count",
            ErrorCode::ShapeMismatch);
    require(q.cols() == d && k.cols() == d,
            "Q/K width must equal the encoding head_dim " + std::to_string(d),
            ErrorCode::ShapeMismatch);
    if (v) require(v->rows() == q.rows(), "V must have N rows", ErrorCode::ShapeMismatch);
    require(positions_n == q.rows(), "position matrix must be N x N", ErrorCode::ShapeMismatch);
}

void check_mask(const AttentionMask* mask, std::size_t n) {
    if (mask) require(mask->size() == n, "mask must be N x N", ErrorCode::ShapeMismatch);
}

}  // namespace

Matrix attention_logits(const Matrix& q, const Matrix& k, const PositionMatrix& positions,
                        const RPEKind& rpe) {
    check_qkv(q, k, nullptr, rpe, positions.size());
    const std::size_t n = q.rows();
    Matrix logits(n, n);
    if (n == 0) return logits;

    if (const auto* rope = std::get_if<Rotary>(&rpe)) {
        // One angle table per distinct integer position.
        const auto lo = positions.min_value();
        const auto hi = positions.max_value();
        std::vector<RotaryAngles> table;
        table.reserve(static_cast<std::size_t>(hi - lo + 1));
        for (auto p = lo; p <= hi; ++p) table.push_back(rotary_angles(*rope, static_cast<double>(p)));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                const auto& angles = table[static_cast<std::size_t>(positions(i, j) - lo)];
                logits(i, j) = detail::rotary_logit(angles, q.row(i), k.row(j));
            }
        }
        return logits;
    }

    const auto& bias = std::get<AdditiveBias>(rpe);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            logits(i, j) = detail::bias_logit(bias, q.row(i), k.row(j),
                                              static_cast<long>(positions(i, j)));
        }
    }
    return logits;
}

Matrix attention_logits(const Matrix& q, const Matrix& k, const Matrix& positions,
                        const RPEKind& rpe) {
    require(positions.rows() == positions.cols(), "position matrix must be square",
            ErrorCode::ShapeMismatch);
    check_qkv(q, k, nullptr, rpe, positions.rows());
    if (!is_rotary(rpe)) {
        fail(ErrorCode::Unsupported,
             "fractional positions are not supported by the additive-bias encoding");
    }
    const std::size_t n = q.rows();
    Matrix logits(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            logits(i, j) = logit(rpe, q.row(i), k.row(j), positions(i, j));
        }
    }
    return logits;
}

Matrix masked_softmax(const Matrix& logits, const AttentionMask* mask, MaskMode mode) {
    const std::size_t n = logits.rows();
    require(logits.cols() == n, "logit matrix must be square", ErrorCode::ShapeMismatch);
    check_mask(mask, n);
    const bool renormalize = mode == MaskMode::Renormalize;

    Matrix weights(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        auto allowed = [&](std::size_t j) { return mask == nullptr || (*mask)(i, j); };
        auto counted = [&](std::size_t j) { return !renormalize || allowed(j); };

        double peak = -std::numeric_limits<double>::infinity();
        std::size_t admitted = 0;
        for (std::size_t j = 0; j < n; ++j) {
            admitted += allowed(j) ? 1 : 0;
            if (counted(j)) peak = std::max(peak, logits(i, j));
        }
        if (admitted == 0) {
            fail(ErrorCode::InvalidArgument,
                 "mask row " + std::to_string(i) + " admits no key frame");
        }

        auto row = weights.row(i);
        double total = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (counted(j)) {
                row[j] = std::exp(logits(i, j) - peak);
                total += row[j];
            }
        }
        for (std::size_t j = 0; j < n; ++j) {
            row[j] = allowed(j) ? row[j] / total : 0.0;
        }
    }
    return weights;
}

SingleAttention attention_single(const Matrix& q, const Matrix& k, const Matrix& v,
                                 const PositionMatrix& positions, const AttentionMask* mask,
                                 const RPEKind& rpe, MaskMode mode) {
    check_qkv(q, k, &v, rpe, positions.size());
    check_mask(mask, q.rows());
    auto weights = masked_softmax(attention_logits(q, k, positions, rpe), mask, mode);
    auto output = matmul(weights, v);
    return {std::move(weights), std::move(output)};
}

SingleAttention attention_single(const Matrix& q, const Matrix& k, const Matrix& v,
                                 const Matrix& positions, const AttentionMask* mask,
                                 const RPEKind& rpe, MaskMode mode) {
    check_qkv(q, k, &v, rpe, positions.rows());
    check_mask(mask, q.rows());
    auto weights = masked_softmax(attention_logits(q, k, positions, rpe), mask, mode);
    auto output = matmul(weights, v);
    return {std::move(weights), std::move(output)};
}

SingleAttention vanilla_attention(const Matrix& q, const Matrix& k, const Matrix& v,
                                  const AttentionMask* mask, const RPEKind& rpe, MaskMode mode) {
    return attention_single(q, k, v, relative_matrix(q.rows()), mask, rpe, mode);
}

AttentionResult longdiff_attention(const Matrix& q, const Matrix& k, const Matrix& v,
                                   const PositionSchedule& sched, const AttentionMask* mask,
                                   const RPEKind& rpe, const AttentionOptions& options) {
    require(!sched.matrices.empty(), "position schedule is empty");
    check_qkv(q, k, &v, rpe, sched.matrices.front().size());
    check_mask(mask, q.rows());

    const std::size_t shifts = sched.matrices.size();
    std::vector<Matrix> per_shift(shifts);
    parallel_for(shifts, [&](std::size_t m) {
        per_shift[m] = masked_softmax(attention_logits(q, k, sched.matrices[m], rpe), mask,
                                      options.mask_mode);
    });

    const std::size_t n = q.rows();
    Matrix averaged(n, n);
    auto& acc = averaged.data();
    for (const auto& a : per_shift) {
        const auto& src = a.data();
        for (std::size_t t = 0; t < acc.size(); ++t) acc[t] += src[t];
    }
    const double count = static_cast<double>(shifts);
    for (auto& x : acc) x /= count;

    AttentionResult result;
    result.output = matmul(averaged, v);
    result.averaged_attention = std::move(averaged);
    if (options.keep_per_shift) result.per_shift_attention = std::move(per_shift);
    return result;
}

PositionMatrix clip_positions(const PositionMatrix& mat, std::int64_t p_max) {
    require(p_max >= 0, "p_max must be non-negative");
    PositionMatrix out = mat;
    for (std::size_t i = 0; i < mat.size(); ++i) {
        for (std::size_t j = 0; j < mat.size(); ++j) {
            out(i, j) = std::clamp(mat(i, j), -p_max, p_max);
        }
    }
    return out;
}

Matrix interpolate_positions(const PositionMatrix& mat, double pretrain_max) {
    require(pretrain_max >= 1.0, "pretrain_max must be >= 1");
    const std::size_t n = mat.size();
    Matrix out(n, n);
    if (n <= 1) return out;
    const double scale = pretrain_max / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            out(i, j) = static_cast<double>(mat(i, j)) * scale;
        }
    }
    return out;
}

SingleAttention clipped_attention(const Matrix& q, const Matrix& k, const Matrix& v,
                                  std::int64_t p_max, const AttentionMask* mask,
                                  const RPEKind& rpe, MaskMode mode) {
    return attention_single(q, k, v, clip_positions(relative_matrix(q.rows()), p_max), mask,
                            rpe, mode);
}

SingleAttention interpolated_attention(const Matrix& q, const Matrix& k, const Matrix& v,
                                       double pretrain_max, const AttentionMask* mask,
                                       const RPEKind& rpe, MaskMode mode) {
    if (!is_rotary(rpe)) {
        fail(ErrorCode::Unsupported,
             "interpolation baseline is not defined for the additive-bias encoding");
    }
    return attention_single(q, k, v,
                            interpolate_positions(relative_matrix(q.rows()), pretrain_max), mask,
                            rpe, mode);
}

SingleAttention group_only_attention(const Matrix& q, const Matrix& k, const Matrix& v,
                                     const GroupConfig& cfg, const AttentionMask* mask,
                                     const RPEKind& rpe, MaskMode mode) {
    return attention_single(q, k, v, grouped_matrix(cfg), mask, rpe, mode);
}

double row_entropy(std::span<const double> weights) {
    double h = 0.0;
    for (double w : weights) {
        if (w > 0.0) h -= w * std::log(w);
    }
    return h;
}

}  // namespace longdiff
