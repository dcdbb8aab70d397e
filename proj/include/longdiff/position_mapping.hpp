#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "longdiff/tensor.hpp"

namespace longdiff {

// Frame count N, group count G, group size S = ceil((N-1)/(G-1)) and the
// number of shifts M = S - 1 needed to recover distinguishability.
struct GroupConfig {
    std::size_t frames = 0;
    std::size_t groups = 0;
    std::size_t group_size = 1;
    std::size_t shifts = 0;

    bool operator==(const GroupConfig&) const = default;
};

// Requires 2 <= G <= N. The single-frame case (N = 1, G = 1) is accepted and
// yields S = 1, M = 0.
GroupConfig group_config(std::size_t frames, std::size_t groups);

// ceil(p / S) for p >= 0, floor(p / S) for p < 0. Throws for |p| > N - 1.
std::int64_t group_position(std::int64_t p, const GroupConfig& cfg);

// N x N integer matrix; entry (i, j) is the (possibly mapped) relative
// position of query frame i with respect to key frame j.
class PositionMatrix {
public:
    PositionMatrix() = default;
    explicit PositionMatrix(std::size_t n) : n_(n), entries_(n * n, 0) {}
    PositionMatrix(std::size_t n, std::vector<std::int64_t> entries);

    std::size_t size() const noexcept { return n_; }
    std::int64_t operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
    std::int64_t& operator()(std::size_t i, std::size_t j) { return entries_[i * n_ + j]; }

    const std::vector<std::int64_t>& entries() const noexcept { return entries_; }

    bool is_antisymmetric() const;  // includes the zero diagonal
    std::int64_t min_value() const;
    std::int64_t max_value() const;

    std::vector<std::int64_t> column(std::size_t j) const;

    Tensor to_tensor() const;
    static PositionMatrix from_tensor(const Tensor& t);

    bool operator==(const PositionMatrix&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<std::int64_t> entries_;
};

// The M + 1 matrices G(0) .. G(M), G(0) grouped and G(m+1) = shift(G(m)).
struct PositionSchedule {
    GroupConfig config;
    std::vector<PositionMatrix> matrices;

    std::size_t frames() const noexcept { return config.frames; }

    // Values entry (i, j) takes across the schedule; sums to i - j.
    std::vector<std::int64_t> assignment_record(std::size_t i, std::size_t j) const;
};

// Entry (i, j) = i - j.
PositionMatrix relative_matrix(std::size_t frames);

PositionMatrix grouped_matrix(const GroupConfig& cfg);

// One SHIFT step: the lower triangle moves down a row, the upper triangle
// moves right a column, the diagonal stays zero. Sources that land on the
// diagonal contribute 0. Rejects input that is not anti-symmetric.
PositionMatrix shift(const PositionMatrix& mat);

PositionSchedule schedule(const GroupConfig& cfg);

// GROUP and SHIFT on absolute frame indices 0..N-1 (for absolute encodings).
// Returns M + 1 vectors of length N whose per-index sums equal the index.
std::vector<std::vector<std::int64_t>> absolute_schedule(const GroupConfig& cfg);

}  // namespace longdiff
