#include "longdiff/rpe.hpp"

#include <cmath>
#include <string>

#include "longdiff/error.hpp"
#include "rpe_detail.hpp"

namespace longdiff {

void validate(const RPEKind& rpe) {
    if (const auto* rope = std::get_if<Rotary>(&rpe)) {
        require(rope->head_dim % 2 == 0 && rope->head_dim >= 2, "rotary head_dim must be even");
        require(rope->rotary_dims % 2 == 0, "rotary_dims must be even");
        require(rope->rotary_dims >= 2 && rope->rotary_dims <= rope->head_dim,
                "rotary_dims must lie in [2, head_dim]");
        require(rope->base > 0.0 && std::isfinite(rope->base), "rotary base must be positive");
        return;
    }
    const auto& bias = std::get<AdditiveBias>(rpe);
    require(bias.head_dim >= 1, "additive-bias head_dim must be >= 1");
    require(bias.max_distance >= 0, "max_distance must be non-negative");
    require(bias.bias_table.size() == static_cast<std::size_t>(2 * bias.max_distance + 1),
            "bias_table length must be 2*max_distance+1");
    for (double v : bias.bias_table) require(std::isfinite(v), "bias_table must be finite");
}

std::size_t head_dim(const RPEKind& rpe) {
    return std::visit([](const auto& r) { return r.head_dim; }, rpe);
}

bool is_rotary(const RPEKind& rpe) { return std::holds_alternative<Rotary>(rpe); }

std::size_t pseudo_dimension_bound(const RPEKind& rpe) {
    if (const auto* rope = std::get_if<Rotary>(&rpe)) return 2 * rope->rotary_dims;
    return 1;
}

AdditiveBias synthetic_additive_bias(std::size_t head_dim, long max_distance, double amplitude) {
    AdditiveBias bias{head_dim, max_distance, {}};
    bias.bias_table.resize(static_cast<std::size_t>(2 * max_distance + 1));
    for (std::size_t t = 0; t < bias.bias_table.size(); ++t) {
        bias.bias_table[t] = amplitude * std::cos(static_cast<double>(t));
    }
    return bias;
}

RotaryAngles rotary_angles(const Rotary& rope, double position) {
    const std::size_t half = rope.rotary_dims / 2;
    RotaryAngles a;
    a.cos.resize(half);
    a.sin.resize(half);
    for (std::size_t t = 0; t < half; ++t) {
        const double inv_freq = std::pow(rope.base, -2.0 * static_cast<double>(t) /
                                                        static_cast<double>(rope.rotary_dims));
        const double theta = position * inv_freq;
        a.cos[t] = std::cos(theta);
        a.sin[t] = std::sin(theta);
    }
    return a;
}

void rotate_in_place(const RotaryAngles& angles, std::span<double> x) {
    for (std::size_t t = 0; t < angles.cos.size(); ++t) {
        const double x0 = x[2 * t];
        const double x1 = x[2 * t + 1];
        x[2 * t] = x0 * angles.cos[t] - x1 * angles.sin[t];
        x[2 * t + 1] = x0 * angles.sin[t] + x1 * angles.cos[t];
    }
}

namespace detail {

double rotary_logit(const RotaryAngles& angles, std::span<const double> q,
                    std::span<const double> k) {
    const std::size_t rotated = 2 * angles.cos.size();
    double dot = 0.0;
    for (std::size_t t = 0; t < angles.cos.size(); ++t) {
        const double q0 = q[2 * t];
        const double q1 = q[2 * t + 1];
        dot += (q0 * angles.cos[t] - q1 * angles.sin[t]) * k[2 * t];
        dot += (q0 * angles.sin[t] + q1 * angles.cos[t]) * k[2 * t + 1];
    }
    for (std::size_t c = rotated; c < q.size(); ++c) dot += q[c] * k[c];
    return dot / std::sqrt(static_cast<double>(q.size()));
}

double bias_logit(const AdditiveBias& bias, std::span<const double> q,
                  std::span<const double> k, long p) {
    double dot = 0.0;
    for (std::size_t c = 0; c < q.size(); ++c) dot += q[c] * k[c];
    const long clipped = std::clamp(p, -bias.max_distance, bias.max_distance);
    return dot / std::sqrt(static_cast<double>(q.size())) +
           bias.bias_table[static_cast<std::size_t>(clipped + bias.max_distance)];
}

long integral_position(double p) {
    if (p != std::floor(p) || !std::isfinite(p)) {
        fail(ErrorCode::Unsupported,
             "additive-bias encoding only accepts integer relative positions (got " +
                 std::to_string(p) + ")");
    }
    return static_cast<long>(p);
}

}  // namespace detail

namespace {

void check_dims(const RPEKind& rpe, std::span<const double> q, std::span<const double> k) {
    const auto d = head_dim(rpe);
    if (q.size() != d || k.size() != d) {
        fail(ErrorCode::ShapeMismatch, "q/k length must equal head_dim " + std::to_string(d));
    }
}

}  // namespace

double logit(const RPEKind& rpe, std::span<const double> q, std::span<const double> k,
             double p) {
    check_dims(rpe, q, k);
    if (const auto* rope = std::get_if<Rotary>(&rpe)) {
        return detail::rotary_logit(rotary_angles(*rope, p), q, k);
    }
    return detail::bias_logit(std::get<AdditiveBias>(rpe), q, k, detail::integral_position(p));
}

double logit_absolute(const RPEKind& rpe, std::span<const double> q,
                      std::span<const double> k, double i, double j) {
    check_dims(rpe, q, k);
    if (const auto* rope = std::get_if<Rotary>(&rpe)) {
        std::vector<double> qr(q.begin(), q.end());
        std::vector<double> kr(k.begin(), k.end());
        rotate_in_place(rotary_angles(*rope, i), qr);
        rotate_in_place(rotary_angles(*rope, j), kr);
        double dot = 0.0;
        for (std::size_t c = 0; c < qr.size(); ++c) dot += qr[c] * kr[c];
        return dot / std::sqrt(static_cast<double>(qr.size()));
    }
    return detail::bias_logit(std::get<AdditiveBias>(rpe), q, k,
                              detail::integral_position(i - j));
}

}  // namespace longdiff
