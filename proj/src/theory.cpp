#include "longdiff/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "longdiff/error.hpp"
#include "longdiff/random.hpp"
#include "longdiff/tensor_io.hpp"

namespace longdiff {
namespace {

void check_samples(const RPEKind& rpe, const Matrix& q, const Matrix& k) {
    validate(rpe);
    require(q.rows() >= 1, "at least one sample pair is required");
    require(q.rows() == k.rows(), "q and k sample counts differ", ErrorCode::ShapeMismatch);
    require(q.cols() == head_dim(rpe) && k.cols() == head_dim(rpe),
            "sample width must equal head_dim", ErrorCode::ShapeMismatch);
}

double distance_unchecked(const RPEKind& rpe, const Matrix& q, const Matrix& k, double p,
                          double p_prime) {
    if (p == p_prime) return 0.0;
    double acc = 0.0;
    for (std::size_t s = 0; s < q.rows(); ++s) {
        const double diff = logit(rpe, q.row(s), k.row(s), p) -
                            logit(rpe, q.row(s), k.row(s), p_prime);
        acc += diff * diff;
    }
    return acc / static_cast<double>(q.rows());
}

}  // namespace

DistanceEstimate estimate_distance(const RPEKind& rpe, const Matrix& q_samples,
                                   const Matrix& k_samples, double p, double p_prime) {
    check_samples(rpe, q_samples, k_samples);
    return {p, p_prime, distance_unchecked(rpe, q_samples, k_samples, p, p_prime),
            q_samples.rows()};
}

double epsilon_uniform(const RPEKind& rpe, const Matrix& q_samples, const Matrix& k_samples,
                       std::size_t frames) {
    require(frames >= 2, "epsilon_uniform requires N >= 2");
    check_samples(rpe, q_samples, k_samples);
    const auto limit = static_cast<long>(frames) - 1;
    double eps = 0.0;
    if (is_rotary(rpe)) {
        for (long p = -limit; p <= limit; ++p) {
            const double pc = static_cast<double>(p);
            eps = std::max(eps, distance_unchecked(rpe, q_samples, k_samples, pc - 0.5, pc + 0.5));
        }
    } else {
        for (long p = -limit; p < limit; ++p) {
            const double pc = static_cast<double>(p);
            eps = std::max(eps, distance_unchecked(rpe, q_samples, k_samples, pc, pc + 1.0));
        }
    }
    return eps;
}

double sup_abs_logit(const RPEKind& rpe, const Matrix& q_samples, const Matrix& k_samples,
                     std::size_t frames) {
    require(frames >= 1, "sup_abs_logit requires N >= 1");
    check_samples(rpe, q_samples, k_samples);
    const auto limit = static_cast<long>(frames) - 1;
    double sup = 0.0;
    for (long p = -limit; p <= limit; ++p) {
        for (std::size_t s = 0; s < q_samples.rows(); ++s) {
            sup = std::max(sup, std::abs(logit(rpe, q_samples.row(s), k_samples.row(s),
                                               static_cast<double>(p))));
        }
    }
    return sup;
}

double theorem1_rhs(std::size_t g, std::size_t r, double epsilon) {
    require(g >= 1, "group count g must be >= 1");
    require(r >= 1, "pseudo-dimension r must be >= 1");
    require(epsilon >= 0.0 && std::isfinite(epsilon), "epsilon must be non-negative");
    const double growth = std::pow(static_cast<double>(g) / 2.0, 1.0 / (2.0 * static_cast<double>(r)));
    return growth * epsilon / (4.0 * std::numbers::e);
}

Theorem1Report theorem1_check(double sup_logit, std::size_t g, std::size_t r, double epsilon) {
    Theorem1Report rep;
    rep.sup_logit = sup_logit;
    rep.epsilon_uni = epsilon;
    rep.r = r;
    rep.g = g;
    rep.rhs = theorem1_rhs(g, r, epsilon);
    rep.satisfied = sup_logit >= rep.rhs;
    return rep;
}

SurveyReport head_survey(std::span<const HeadSamples> heads, std::size_t frames) {
    require(!heads.empty(), "head_survey needs at least one head");
    require(frames >= 2, "head_survey requires N >= 2");
    SurveyReport survey;
    survey.frames = frames;
    std::size_t satisfied = 0;
    for (const auto& head : heads) {
        HeadReport rep;
        const double sup = sup_abs_logit(head.rpe, head.q_samples, head.k_samples, frames);
        const double eps = epsilon_uniform(head.rpe, head.q_samples, head.k_samples, frames);
        rep.theorem1 = theorem1_check(sup, 2 * frames - 1, pseudo_dimension_bound(head.rpe), eps);
        rep.sample_count = head.q_samples.rows();
        rep.adjacent_pair_epsilon = !is_rotary(head.rpe);
        satisfied += rep.theorem1.satisfied ? 1 : 0;
        survey.heads.push_back(rep);
    }
    survey.fraction_satisfied = static_cast<double>(satisfied) / static_cast<double>(heads.size());
    return survey;
}

std::vector<HeadSamples> synthetic_head_suite(std::size_t heads, std::size_t samples,
                                              std::uint64_t seed, std::size_t head_dim,
                                              std::size_t rotary_dims) {
    std::vector<HeadSamples> suite;
    suite.reserve(heads);
    for (std::size_t h = 0; h < heads; ++h) {
        const double scale = 4.0 * std::pow(2.0, static_cast<double>(h) / 2.0);
        HeadSamples head{Rotary{head_dim, rotary_dims, 10000.0},
                         synth_matrix(samples, head_dim, derive_seed(seed, 2 * h), scale),
                         synth_matrix(samples, head_dim, derive_seed(seed, 2 * h + 1), scale)};
        suite.push_back(std::move(head));
    }
    return suite;
}

EntropyReport entropy_check(std::span<const double> logits) {
    require(!logits.empty(), "entropy_check needs at least one logit");
    double peak = -std::numeric_limits<double>::infinity();
    double bound_b = 0.0;
    for (double a : logits) {
        require(std::isfinite(a), "logits must be finite", ErrorCode::NonFinite);
        peak = std::max(peak, a);
        bound_b = std::max(bound_b, std::abs(a));
    }
    double total = 0.0;
    for (double a : logits) total += std::exp(a - peak);
    const double log_total = std::log(total);

    double h = 0.0;
    for (double a : logits) {
        const double log_p = (a - peak) - log_total;
        h -= std::exp(log_p) * log_p;
    }

    EntropyReport rep;
    rep.entropy = h;
    rep.B = bound_b;
    rep.bound = std::log(static_cast<double>(logits.size())) - 2.0 * bound_b;
    rep.holds = rep.entropy >= rep.bound - 1e-9;
    return rep;
}

}  // namespace longdiff
