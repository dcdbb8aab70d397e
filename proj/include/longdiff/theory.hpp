#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "longdiff/rpe.hpp"
#include "longdiff/tensor.hpp"

namespace longdiff {

// Empirical d_f(p, p') = mean over paired samples of (f(q,k,p) - f(q,k,p'))^2.
struct DistanceEstimate {
    double p = 0.0;
    double p_prime = 0.0;
    double d = 0.0;
    std::size_t sample_count = 0;
};

// Distinguishability inequality
//   sup |f| >= (g/2)^(1/(2r)) * epsilon / (4e)
// evaluated for a given group count g and pseudo-dimension bound r.
struct Theorem1Report {
    double sup_logit = 0.0;
    double epsilon_uni = 0.0;
    std::size_t r = 1;
    std::size_t g = 1;
    double rhs = 0.0;
    bool satisfied = true;
};

// Entropy lower bound H(softmax(a)) >= ln N - 2B with B = max |a_i|.
struct EntropyReport {
    double entropy = 0.0;  // nats
    double bound = 0.0;
    double B = 0.0;
    bool holds = true;
};

// q_samples and k_samples are S x d matrices; row s of each forms one pair.
DistanceEstimate estimate_distance(const RPEKind& rpe, const Matrix& q_samples,
                                   const Matrix& k_samples, double p, double p_prime);

// Rotary: max over integer p in [-(N-1), N-1] of d_f(p - 0.5, p + 0.5).
// Additive bias (integer positions only): max over p in [-(N-1), N-2] of
// d_f(p, p + 1).
double epsilon_uniform(const RPEKind& rpe, const Matrix& q_samples, const Matrix& k_samples,
                       std::size_t frames);

// Largest |f(q_s, k_s, p)| over the sample pairs and integer p in
// [-(N-1), N-1]. A lower bound on the true supremum.
double sup_abs_logit(const RPEKind& rpe, const Matrix& q_samples, const Matrix& k_samples,
                     std::size_t frames);

double theorem1_rhs(std::size_t g, std::size_t r, double epsilon);
Theorem1Report theorem1_check(double sup_logit, std::size_t g, std::size_t r, double epsilon);

struct HeadSamples {
    RPEKind rpe;
    Matrix q_samples;
    Matrix k_samples;
};

struct HeadReport {
    Theorem1Report theorem1;
    std::size_t sample_count = 0;
    bool adjacent_pair_epsilon = false;  // additive bias: d_f(p, p+1) probes
};

struct SurveyReport {
    std::size_t frames = 0;
    std::vector<HeadReport> heads;
    double fraction_satisfied = 0.0;
};

// Per head: sup |f|, epsilon_uni, r = pseudo_dimension_bound, g = 2N - 1.
SurveyReport head_survey(std::span<const HeadSamples> heads, std::size_t frames);

// Synthetic rotary heads. Head h draws q and k samples as standard normals
// scaled by 4 * 2^(h/2), so the suite spans heads that do and do not meet
// the inequality.
std::vector<HeadSamples> synthetic_head_suite(std::size_t heads, std::size_t samples,
                                              std::uint64_t seed, std::size_t head_dim = 64,
                                              std::size_t rotary_dims = 32);

EntropyReport entropy_check(std::span<const double> logits);

}  // namespace longdiff
