#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

namespace longdiff {

// Rotary encoding over the first `rotary_dims` features, rotating the
// interleaved pairs (2t, 2t+1) by angle p * base^(-2t/rotary_dims).
struct Rotary {
    std::size_t head_dim = 64;
    std::size_t rotary_dims = 32;
    double base = 10000.0;

    bool operator==(const Rotary&) const = default;
};

// Learned additive bias on a clipped relative position:
// bias_table[clip(p, -max_distance, max_distance) + max_distance].
struct AdditiveBias {
    std::size_t head_dim = 64;
    long max_distance = 0;
    std::vector<double> bias_table;

    bool operator==(const AdditiveBias&) const = default;
};

using RPEKind = std::variant<Rotary, AdditiveBias>;

void validate(const RPEKind& rpe);
std::size_t head_dim(const RPEKind& rpe);
bool is_rotary(const RPEKind& rpe);

// Pseudo-dimension bound r of the logit family {f(., ., p)}: 2k for a rotary
// head with k rotated dims; 1 for an additive bias (translates of a single
// function).
std::size_t pseudo_dimension_bound(const RPEKind& rpe);

// Synthetic bias table b[t] = amplitude * cos(t) for t = 0..2*max_distance.
// Not trained values; used where a concrete bias table is needed.
AdditiveBias synthetic_additive_bias(std::size_t head_dim, long max_distance,
                                     double amplitude = 0.5);

// Precomputed cos/sin for one relative position.
struct RotaryAngles {
    std::vector<double> cos;
    std::vector<double> sin;
};

RotaryAngles rotary_angles(const Rotary& rope, double position);

// Rotates the first rotary_dims components of x in place.
void rotate_in_place(const RotaryAngles& angles, std::span<double> x);

// Attention logit f(q, k, p). Rotary: (R(p) q) . k / sqrt(d). AdditiveBias:
// q . k / sqrt(d) + table entry for the clipped p; a non-integer p throws
// Unsupported.
double logit(const RPEKind& rpe, std::span<const double> q, std::span<const double> k,
             double p);

// Same logit evaluated from absolute positions: rotary rotates q by i and k by
// j separately; the bias variant looks up i - j.
double logit_absolute(const RPEKind& rpe, std::span<const double> q,
                      std::span<const double> k, double i, double j);

}  // namespace longdiff
