#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace longdiff {

// Dense row-major f64 tensor. The invariants (extent product equals the
// payload length, all values finite) are checked by validate(), which every
// file read and public entry point runs.
struct Tensor {
    std::vector<std::size_t> dims;
    std::vector<double> data;

    Tensor() = default;
    Tensor(std::vector<std::size_t> dims, std::vector<double> data);
    explicit Tensor(std::vector<std::size_t> dims);  // zero-filled

    std::size_t rank() const noexcept { return dims.size(); }
    std::size_t size() const noexcept { return data.size(); }

    void validate() const;

    bool operator==(const Tensor&) const = default;
};

std::size_t element_count(std::span<const std::size_t> dims);

// Bitwise equality (distinguishes -0.0 from 0.0, unlike operator==).
bool bitwise_equal(const Tensor& a, const Tensor& b);

// Row-major 2-D view-owning matrix used for Q/K/V and attention maps.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    const std::vector<double>& data() const noexcept { return data_; }
    std::vector<double>& data() noexcept { return data_; }

    Tensor to_tensor() const;
    static Matrix from_tensor(const Tensor& t);

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

bool bitwise_equal(const Matrix& a, const Matrix& b);

// a (n x m) * b (m x p), ascending-index accumulation.
Matrix matmul(const Matrix& a, const Matrix& b);

}  // namespace longdiff
