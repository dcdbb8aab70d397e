#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "longdiff/tensor.hpp"

namespace longdiff {

// LDT1 layout, all little-endian:
//   "LDT1"            4 bytes magic
//   u32 ndim
//   u64 dims[ndim]
//   f64 data[prod(dims)]   row-major
inline constexpr char kTensorMagic[4] = {'L', 'D', 'T', '1'};

std::vector<std::uint8_t> encode_tensor(const Tensor& t);
Tensor decode_tensor(const std::vector<std::uint8_t>& bytes);

void write_tensor(const Tensor& t, const std::filesystem::path& path);
Tensor read_tensor(const std::filesystem::path& path);

// N x C x hw tensor of standard normals from CounterRng(seed), element at
// flat row-major index i being CounterRng(seed).normal(i).
Tensor synth_features(std::size_t frames, std::size_t channels, std::size_t spatial,
                      std::uint64_t seed);

// rows x cols matrix of standard normals scaled by `scale`; same stream rule.
Matrix synth_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed, double scale = 1.0);

}  // namespace longdiff
