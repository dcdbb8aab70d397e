#include "longdiff/random.hpp"

#include <cmath>
#include <numbers>

namespace longdiff {

double CounterRng::normal(std::uint64_t index) const noexcept {
    const std::uint64_t pair = index / 2;
    const double u1 = uniform(2 * pair);
    const double u2 = uniform(2 * pair + 1);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return (index % 2 == 0) ? radius * std::cos(angle) : radius * std::sin(angle);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) noexcept {
    return CounterRng::mix(seed ^ 0xD1B54A32D192ED03ULL, tag);
}

}  // namespace longdiff
