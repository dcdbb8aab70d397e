#include "longdiff/position_mapping.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "longdiff/error.hpp"

namespace longdiff {
namespace {

std::int64_t ceil_div(std::int64_t a, std::int64_t b) {  // b > 0
    const auto q = a / b;
    return (a % b != 0 && a > 0) ? q + 1 : q;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {  // b > 0
    const auto q = a / b;
    return (a % b != 0 && a < 0) ? q - 1 : q;
}

}  // namespace

GroupConfig group_config(std::size_t frames, std::size_t groups) {
    if (frames == 1 && groups == 1) return GroupConfig{1, 1, 1, 0};
    require(frames >= 2, "group_config requires N >= 2 (got " + std::to_string(frames) + ")");
    require(groups >= 2, "group_config requires G >= 2 (got " + std::to_string(groups) + ")");
    require(groups <= frames, "group_config requires G <= N (got G=" + std::to_string(groups) +
                                  ", N=" + std::to_string(frames) + ")");
    const auto s = static_cast<std::size_t>(
        ceil_div(static_cast<std::int64_t>(frames - 1), static_cast<std::int64_t>(groups - 1)));
    return GroupConfig{frames, groups, s, s - 1};
}

std::int64_t group_position(std::int64_t p, const GroupConfig& cfg) {
    const auto limit = static_cast<std::int64_t>(cfg.frames) - 1;
    if (p > limit || p < -limit) {
        fail(ErrorCode::InvalidArgument, "relative position " + std::to_string(p) +
                                             " outside [-(N-1), N-1] for N=" +
                                             std::to_string(cfg.frames));
    }
    const auto s = static_cast<std::int64_t>(cfg.group_size);
    return p >= 0 ? ceil_div(p, s) : floor_div(p, s);
}

PositionMatrix::PositionMatrix(std::size_t n, std::vector<std::int64_t> entries)
    : n_(n), entries_(std::move(entries)) {
    require(entries_.size() == n_ * n_, "position matrix must be N x N",
            ErrorCode::ShapeMismatch);
}

bool PositionMatrix::is_antisymmetric() const {
    for (std::size_t i = 0; i < n_; ++i) {
        if ((*this)(i, i) != 0) return false;
        for (std::size_t j = i + 1; j < n_; ++j) {
            if ((*this)(i, j) != -(*this)(j, i)) return false;
        }
    }
    return true;
}

std::int64_t PositionMatrix::min_value() const {
    return entries_.empty() ? 0 : *std::min_element(entries_.begin(), entries_.end());
}

std::int64_t PositionMatrix::max_value() const {
    return entries_.empty() ? 0 : *std::max_element(entries_.begin(), entries_.end());
}

std::vector<std::int64_t> PositionMatrix::column(std::size_t j) const {
    std::vector<std::int64_t> col(n_);
    for (std::size_t i = 0; i < n_; ++i) col[i] = (*this)(i, j);
    return col;
}

Tensor PositionMatrix::to_tensor() const {
    Tensor t({n_, n_});
    for (std::size_t k = 0; k < entries_.size(); ++k) t.data[k] = static_cast<double>(entries_[k]);
    return t;
}

PositionMatrix PositionMatrix::from_tensor(const Tensor& t) {
    require(t.rank() == 2 && t.dims[0] == t.dims[1], "position matrix tensor must be N x N",
            ErrorCode::ShapeMismatch);
    t.validate();
    std::vector<std::int64_t> entries(t.size());
    for (std::size_t k = 0; k < t.size(); ++k) {
        const double v = t.data[k];
        require(v == std::floor(v), "position matrix entries must be integers");
        entries[k] = static_cast<std::int64_t>(v);
    }
    return PositionMatrix(t.dims[0], std::move(entries));
}

std::vector<std::int64_t> PositionSchedule::assignment_record(std::size_t i, std::size_t j) const {
    std::vector<std::int64_t> record;
    record.reserve(matrices.size());
    for (const auto& m : matrices) record.push_back(m(i, j));
    return record;
}

PositionMatrix relative_matrix(std::size_t frames) {
    PositionMatrix m(frames);
    for (std::size_t i = 0; i < frames; ++i) {
        for (std::size_t j = 0; j < frames; ++j) {
            m(i, j) = static_cast<std::int64_t>(i) - static_cast<std::int64_t>(j);
        }
    }
    return m;
}

PositionMatrix grouped_matrix(const GroupConfig& cfg) {
    PositionMatrix m(cfg.frames);
    for (std::size_t i = 0; i < cfg.frames; ++i) {
        for (std::size_t j = 0; j < cfg.frames; ++j) {
            m(i, j) = group_position(
                static_cast<std::int64_t>(i) - static_cast<std::int64_t>(j), cfg);
        }
    }
    return m;
}

PositionMatrix shift(const PositionMatrix& mat) {
    require(mat.is_antisymmetric(), "shift requires an anti-symmetric, zero-diagonal matrix");
    const std::size_t n = mat.size();
    PositionMatrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i < j) {
                out(i, j) = mat(i, j - 1);  // (i, i) source is the zero diagonal
            } else if (i > j) {
                out(i, j) = mat(i - 1, j);
            }
        }
    }
    // The upper triangle comes from its own branch of the recurrence, so this
    // is a check of the recurrence, not an assumption.
    if (!out.is_antisymmetric()) {
        fail(ErrorCode::InvalidArgument, "shift produced a non-anti-symmetric matrix");
    }
    return out;
}

PositionSchedule schedule(const GroupConfig& cfg) {
    PositionSchedule sched{cfg, {}};
    sched.matrices.reserve(cfg.shifts + 1);
    sched.matrices.push_back(grouped_matrix(cfg));
    for (std::size_t m = 0; m < cfg.shifts; ++m) {
        sched.matrices.push_back(shift(sched.matrices.back()));
    }
    return sched;
}

std::vector<std::vector<std::int64_t>> absolute_schedule(const GroupConfig& cfg) {
    std::vector<std::vector<std::int64_t>> out;
    out.reserve(cfg.shifts + 1);
    std::vector<std::int64_t> first(cfg.frames);
    for (std::size_t i = 0; i < cfg.frames; ++i) {
        first[i] = group_position(static_cast<std::int64_t>(i), cfg);
    }
    out.push_back(std::move(first));
    for (std::size_t m = 0; m < cfg.shifts; ++m) {
        const auto& prev = out.back();
        std::vector<std::int64_t> next(cfg.frames, 0);
        for (std::size_t i = 1; i < cfg.frames; ++i) next[i] = prev[i - 1];
        out.push_back(std::move(next));
    }
    return out;
}

}  // namespace longdiff
