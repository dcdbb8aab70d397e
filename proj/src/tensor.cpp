#include "longdiff/tensor.hpp"

#include <cmath>
#include <cstring>
#include <string>

#include "longdiff/error.hpp"

namespace longdiff {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "invalid-argument";
        case ErrorCode::ShapeMismatch: return "shape-mismatch";
        case ErrorCode::NonFinite: return "non-finite";
        case ErrorCode::BadMagic: return "bad-magic";
        case ErrorCode::Truncated: return "truncated";
        case ErrorCode::CorruptFile: return "corrupt-file";
        case ErrorCode::Unsupported: return "unsupported";
        case ErrorCode::Io: return "io";
    }
    return "unknown";
}

std::size_t element_count(std::span<const std::size_t> dims) {
    std::size_t n = 1;
    for (auto d : dims) n *= d;
    return n;
}

Tensor::Tensor(std::vector<std::size_t> d, std::vector<double> v)
    : dims(std::move(d)), data(std::move(v)) {
    validate();
}

Tensor::Tensor(std::vector<std::size_t> d) : dims(std::move(d)) {
    data.assign(element_count(dims), 0.0);
}

void Tensor::validate() const {
    const auto expected = element_count(dims);
    if (expected != data.size()) {
        fail(ErrorCode::ShapeMismatch, "tensor extents imply " + std::to_string(expected) +
                                           " values but payload has " +
                                           std::to_string(data.size()));
    }
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (!std::isfinite(data[i])) {
            fail(ErrorCode::NonFinite, "tensor value at flat index " + std::to_string(i) +
                                           " is not finite");
        }
    }
}

bool bitwise_equal(const Tensor& a, const Tensor& b) {
    return a.dims == b.dims && a.data.size() == b.data.size() &&
           (a.data.empty() ||
            std::memcmp(a.data.data(), b.data.data(), a.data.size() * sizeof(double)) == 0);
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    require(data_.size() == rows_ * cols_, "matrix payload does not match rows*cols",
            ErrorCode::ShapeMismatch);
}

Tensor Matrix::to_tensor() const { return Tensor({rows_, cols_}, data_); }

Matrix Matrix::from_tensor(const Tensor& t) {
    require(t.rank() == 2, "expected a rank-2 tensor, got rank " + std::to_string(t.rank()),
            ErrorCode::ShapeMismatch);
    t.validate();
    return Matrix(t.dims[0], t.dims[1], t.data);
}

bool bitwise_equal(const Matrix& a, const Matrix& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() &&
           (a.data().empty() || std::memcmp(a.data().data(), b.data().data(),
                                            a.data().size() * sizeof(double)) == 0);
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    require(a.cols() == b.rows(), "matmul inner dimensions differ", ErrorCode::ShapeMismatch);
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto orow = out.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            auto brow = b.row(k);
            for (std::size_t j = 0; j < b.cols(); ++j) orow[j] += aik * brow[j];
        }
    }
    return out;
}

}  // namespace longdiff
