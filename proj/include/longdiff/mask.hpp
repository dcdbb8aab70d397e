#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "longdiff/tensor.hpp"

namespace longdiff {

// N x N admissibility matrix: allowed(i, j) says whether query frame i may
// attend to key frame j.
class AttentionMask {
public:
    AttentionMask() = default;
    explicit AttentionMask(std::size_t n, bool fill = false)
        : n_(n), allowed_(n * n, fill ? 1 : 0) {}

    static AttentionMask all_ones(std::size_t n) { return AttentionMask(n, true); }

    std::size_t size() const noexcept { return n_; }
    bool operator()(std::size_t i, std::size_t j) const { return allowed_[i * n_ + j] != 0; }
    void set(std::size_t i, std::size_t j, bool v) { allowed_[i * n_ + j] = v ? 1 : 0; }

    std::size_t allowed_in_row(std::size_t i) const;
    std::size_t max_allowed_per_row() const;

    // 1.0 / 0.0 f64 tensor, the on-disk form.
    Tensor to_tensor() const;
    static AttentionMask from_tensor(const Tensor& t);

    bool operator==(const AttentionMask&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<std::uint8_t> allowed_;
};

}  // namespace longdiff
