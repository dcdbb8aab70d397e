#pragma once

#include <cstdint>

namespace longdiff {

// Counter-based generator. Draw i of stream `seed` is
//
//     x = seed + (i + 1) * 0x9E3779B97F4A7C15        (mod 2^64)
//     x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9
//     x = (x ^ (x >> 27)) * 0x94D049BB133111EB
//     x =  x ^ (x >> 31)
//
// i.e. the SplitMix64 finalizer applied to a Weyl counter. Any draw can be
// computed independently of the others, which keeps streams reproducible
// across languages and evaluation orders.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) noexcept : seed_(seed) {}

    static std::uint64_t mix(std::uint64_t seed, std::uint64_t counter) noexcept {
        std::uint64_t x = seed + (counter + 1) * 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    std::uint64_t bits(std::uint64_t counter) const noexcept { return mix(seed_, counter); }

    // Uniform on (0, 1]: ((bits >> 11) + 1) * 2^-53. Never zero, so it is
    // safe under log().
    double uniform(std::uint64_t counter) const noexcept {
        return static_cast<double>((bits(counter) >> 11) + 1) * 0x1.0p-53;
    }

    // Standard normal, Box-Muller. Element i belongs to pair i/2, which uses
    // uniforms u1 = uniform(2*(i/2)) and u2 = uniform(2*(i/2)+1):
    //   even i -> sqrt(-2 ln u1) * cos(2 pi u2)
    //   odd  i -> sqrt(-2 ln u1) * sin(2 pi u2)
    double normal(std::uint64_t index) const noexcept;

    std::uint64_t seed() const noexcept { return seed_; }

private:
    std::uint64_t seed_;
};

// Derives an independent stream seed from a parent seed and a tag.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) noexcept;

}  // namespace longdiff
