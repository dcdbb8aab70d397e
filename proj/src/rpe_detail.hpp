#pragma once

#include <algorithm>
#include <span>

#include "longdiff/rpe.hpp"

namespace longdiff::detail {

// Shared by logit() and the cached attention path so both produce the same
// bits for the same (q, k, p).
double rotary_logit(const RotaryAngles& angles, std::span<const double> q,
                    std::span<const double> k);
double bias_logit(const AdditiveBias& bias, std::span<const double> q,
                  std::span<const double> k, long p);
long integral_position(double p);

}  // namespace longdiff::detail
