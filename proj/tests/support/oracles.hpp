#pragma once

// Naive reference implementations used only by tests. They recompute each
// quantity from its defining formula with plain containers and share no code
// with the library paths they check.

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

namespace oracle {

using IntGrid = std::vector<std::vector<long>>;

// Grouped index with floating-point ceil/floor, straight from the formula.
inline long group(long p, long n, long g) {
    const double s = std::ceil(static_cast<double>(n - 1) / static_cast<double>(g - 1));
    const double x = static_cast<double>(p) / s;
    return static_cast<long>(p >= 0 ? std::ceil(x) : std::floor(x));
}

inline IntGrid grouped(long n, long g) {
    IntGrid m(n, std::vector<long>(n));
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) m[i][j] = group(i - j, n, g);
    return m;
}

// G(m+1)[i][j] = G(m)[i][j-1] if i<j, G(m)[i][j] if i=j, G(m)[i-1][j] if i>j.
inline IntGrid shift_once(const IntGrid& in) {
    const long n = static_cast<long>(in.size());
    IntGrid out(n, std::vector<long>(n));
    for (long i = 0; i < n; ++i) {
        for (long j = 0; j < n; ++j) {
            if (i < j) out[i][j] = in[i][j - 1];
            else if (i == j) out[i][j] = in[i][j];
            else out[i][j] = in[i - 1][j];
        }
    }
    return out;
}

inline std::vector<IntGrid> schedule(long n, long g) {
    const long s = static_cast<long>(std::ceil(static_cast<double>(n - 1) / static_cast<double>(g - 1)));
    std::vector<IntGrid> out{grouped(n, g)};
    for (long m = 0; m + 1 < s; ++m) out.push_back(shift_once(out.back()));
    return out;
}

// Rotary logit via complex multiplication on interleaved pairs.
inline double rotary_logit(const std::vector<double>& q, const std::vector<double>& k,
                           double p, std::size_t rotary_dims, double base) {
    double dot = 0.0;
    for (std::size_t t = 0; t < rotary_dims / 2; ++t) {
        const double theta = p / std::pow(base, 2.0 * t / static_cast<double>(rotary_dims));
        const std::complex<double> z(q[2 * t], q[2 * t + 1]);
        const auto r = z * std::polar(1.0, theta);
        dot += r.real() * k[2 * t] + r.imag() * k[2 * t + 1];
    }
    for (std::size_t c = rotary_dims; c < q.size(); ++c) dot += q[c] * k[c];
    return dot / std::sqrt(static_cast<double>(q.size()));
}

// Frame given as three channel planes of `hw` values.
inline double frame_entropy_bits(const std::vector<int>& frame, std::size_t hw) {
    std::map<int, int> hist;
    for (std::size_t p = 0; p < hw; ++p) {
        const double mean = (frame[p] + frame[hw + p] + frame[2 * hw + p]) / 3.0;
        hist[static_cast<int>(std::round(mean))]++;
    }
    double h = 0.0;
    for (const auto& [lum, count] : hist) {
        const double prob = static_cast<double>(count) / static_cast<double>(hw);
        h -= prob * std::log2(prob);
    }
    return h;
}

inline double mean_abs_diff(const std::vector<int>& a, const std::vector<int>& b) {
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) total += std::abs(a[i] - b[i]);
    return total / static_cast<double>(a.size());
}

// Score table, then argmax per shot with the earliest index winning ties.
inline std::vector<std::size_t> keyframes(const std::vector<std::vector<int>>& frames,
                                          std::size_t hw, std::size_t shots, double alpha) {
    const std::size_t n = frames.size();
    std::vector<double> score(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double sad = k == 0 ? 0.0 : mean_abs_diff(frames[k], frames[k - 1]);
        score[k] = alpha * frame_entropy_bits(frames[k], hw) + sad;
    }
    std::vector<std::size_t> keys;
    for (std::size_t s = 0; s < shots; ++s) {
        const std::size_t lo = static_cast<std::size_t>(std::floor(static_cast<double>(s) * n / shots));
        const std::size_t hi = static_cast<std::size_t>(std::floor(static_cast<double>(s + 1) * n / shots));
        std::size_t best = lo;
        for (std::size_t k = lo; k < hi; ++k) {
            if (score[k] > score[best]) best = k;
        }
        keys.push_back(best);
    }
    return keys;
}

inline std::vector<std::vector<bool>> ifs_mask(long n, long l, const std::vector<std::size_t>& keys) {
    std::vector<std::vector<bool>> m(n, std::vector<bool>(n, false));
    for (long i = 0; i < n; ++i) {
        for (long j = 0; j < n; ++j) {
            bool key = false;
            for (auto kf : keys) key = key || static_cast<long>(kf) == j;
            m[i][j] = std::labs(i - j) <= l || key;
        }
    }
    return m;
}

}  // namespace oracle
