#include "longdiff/keyframe.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "longdiff/error.hpp"
#include "longdiff/random.hpp"

namespace longdiff {

PseudoVideo::PseudoVideo(std::size_t frames, std::size_t spatial,
                         std::vector<std::uint8_t> values)
    : frames_(frames), spatial_(spatial), values_(std::move(values)) {
    require(values_.size() == frames_ * 3 * spatial_, "pseudo-video must hold N x 3 x hw values",
            ErrorCode::ShapeMismatch);
}

std::span<const std::uint8_t> PseudoVideo::frame(std::size_t k) const {
    require(k < frames_, "frame index " + std::to_string(k) + " out of range");
    return {values_.data() + k * frame_stride(), frame_stride()};
}

const char* to_string(SadMode mode) noexcept { return mode == SadMode::Mean ? "mean" : "sum"; }

SadMode parse_sad_mode(const std::string& text) {
    if (text == "mean") return SadMode::Mean;
    if (text == "sum") return SadMode::Sum;
    fail(ErrorCode::InvalidArgument, "unknown sad mode '" + text + "'");
}

Tensor pool_channels(const Tensor& features) {
    require(features.rank() == 3, "features must be N x C x hw", ErrorCode::ShapeMismatch);
    features.validate();
    const auto [n, c, hw] = std::array{features.dims[0], features.dims[1], features.dims[2]};
    require(c >= 1, "cannot pool an empty channel axis");

    Tensor out({n, 3, hw});
    for (std::size_t f = 0; f < n; ++f) {
        const double* src = features.data.data() + f * c * hw;
        double* dst = out.data.data() + f * 3 * hw;
        for (std::size_t p = 0; p < hw; ++p) {
            double hi = src[p];
            double lo = src[p];
            double sum = 0.0;
            for (std::size_t ch = 0; ch < c; ++ch) {
                const double x = src[ch * hw + p];
                hi = std::max(hi, x);
                lo = std::min(lo, x);
                sum += x;
            }
            dst[p] = hi;
            dst[hw + p] = sum / static_cast<double>(c);
            dst[2 * hw + p] = lo;
        }
    }
    return out;
}

PseudoVideo quantize(const Tensor& pooled) {
    require(pooled.rank() == 3 && pooled.dims[1] == 3, "quantize expects an N x 3 x hw tensor",
            ErrorCode::ShapeMismatch);
    pooled.validate();
    std::vector<std::uint8_t> values(pooled.size(), 0);
    if (!pooled.data.empty()) {
        const auto [lo_it, hi_it] = std::minmax_element(pooled.data.begin(), pooled.data.end());
        const double lo = *lo_it;
        const double range = *hi_it - lo;
        if (range > 0.0) {
            for (std::size_t i = 0; i < values.size(); ++i) {
                const double scaled = std::round((pooled.data[i] - lo) / range * 255.0);
                values[i] = static_cast<std::uint8_t>(std::clamp(scaled, 0.0, 255.0));
            }
        }
    }
    return PseudoVideo(pooled.dims[0], pooled.dims[2], std::move(values));
}

PseudoVideo make_pseudo_video(const Tensor& features) {
    return quantize(pool_channels(features));
}

double frame_entropy(std::span<const std::uint8_t> frame, std::size_t spatial) {
    require(frame.size() == 3 * spatial, "frame must hold 3 x hw values",
            ErrorCode::ShapeMismatch);
    if (spatial == 0) return 0.0;
    std::array<std::size_t, 256> histogram{};
    for (std::size_t p = 0; p < spatial; ++p) {
        const unsigned sum = unsigned{frame[p]} + frame[spatial + p] + frame[2 * spatial + p];
        ++histogram[(sum + 1) / 3];  // round(sum / 3); sum / 3 never ends in .5
    }
    double h = 0.0;
    const double total = static_cast<double>(spatial);
    for (auto count : histogram) {
        if (count == 0) continue;
        const double prob = static_cast<double>(count) / total;
        h -= prob * std::log2(prob);
    }
    return h;
}

double frame_entropy(const PseudoVideo& video, std::size_t k) {
    return frame_entropy(video.frame(k), video.spatial());
}

double frame_sad(const PseudoVideo& video, std::size_t k, SadMode mode) {
    require(k < video.frames(), "frame index " + std::to_string(k) + " out of range");
    if (k == 0) return 0.0;
    const auto cur = video.frame(k);
    const auto prev = video.frame(k - 1);
    std::uint64_t total = 0;
    for (std::size_t t = 0; t < cur.size(); ++t) {
        total += static_cast<std::uint64_t>(std::abs(int{cur[t]} - int{prev[t]}));
    }
    const double raw = static_cast<double>(total);
    return mode == SadMode::Sum || cur.empty() ? raw : raw / static_cast<double>(cur.size());
}

std::vector<FrameScore> score_frames(const PseudoVideo& video, double alpha, SadMode mode) {
    require(alpha >= 0.0 && std::isfinite(alpha), "alpha must be a non-negative finite value");
    std::vector<FrameScore> scores(video.frames());
    for (std::size_t k = 0; k < video.frames(); ++k) {
        auto& s = scores[k];
        s.index = k;
        s.entropy = frame_entropy(video, k);
        s.sad = frame_sad(video, k, mode);
        s.score = alpha * s.entropy + s.sad;
    }
    return scores;
}

std::vector<std::size_t> select_keyframes(std::span<const FrameScore> scores, std::size_t shots) {
    const std::size_t n = scores.size();
    require(shots >= 1, "key-frame detection needs at least one shot");
    require(shots <= n, "cannot split " + std::to_string(n) + " frames into " +
                            std::to_string(shots) + " shots");
    std::vector<std::size_t> keys;
    keys.reserve(shots);
    for (std::size_t s = 0; s < shots; ++s) {
        const std::size_t begin = s * n / shots;
        const std::size_t end = (s + 1) * n / shots;
        std::size_t best = begin;
        for (std::size_t k = begin + 1; k < end; ++k) {
            if (scores[k].score > scores[best].score) best = k;
        }
        keys.push_back(best);
    }
    return keys;
}

std::vector<std::size_t> detect_keyframes(const PseudoVideo& video, std::size_t shots,
                                          double alpha, SadMode mode) {
    require(shots >= 1 && shots <= video.frames(),
            "key-frame count must lie in [1, N] (got " + std::to_string(shots) + ")");
    const auto scores = score_frames(video, alpha, mode);
    return select_keyframes(scores, shots);
}

IFSMask build_ifs_mask(std::size_t frames, std::size_t neighbor_range,
                       std::span<const std::size_t> key_frames) {
    IFSMask mask;
    mask.neighbor_range = neighbor_range;
    mask.key_frames.assign(key_frames.begin(), key_frames.end());
    for (auto key : mask.key_frames) {
        require(key < frames, "key frame " + std::to_string(key) + " outside [0, N)");
    }
    std::sort(mask.key_frames.begin(), mask.key_frames.end());
    mask.key_frames.erase(std::unique(mask.key_frames.begin(), mask.key_frames.end()),
                          mask.key_frames.end());

    std::vector<bool> is_key(frames, false);
    for (auto key : mask.key_frames) is_key[key] = true;

    mask.allowed = AttentionMask(frames);
    for (std::size_t i = 0; i < frames; ++i) {
        for (std::size_t j = 0; j < frames; ++j) {
            const std::size_t dist = i > j ? i - j : j - i;
            mask.allowed.set(i, j, dist <= neighbor_range || is_key[j]);
        }
    }
    return mask;
}

MaskVariant parse_mask_variant(const std::string& text) {
    static const std::pair<const char*, MaskVariant> names[] = {
        {"ifs", MaskVariant::Ifs},
        {"neighbor", MaskVariant::Neighbor},
        {"neighbor_plus", MaskVariant::NeighborPlus},
        {"key_frame", MaskVariant::KeyFrame},
        {"key_frame_plus", MaskVariant::KeyFramePlus},
        {"neighbor_uniform", MaskVariant::NeighborUniform},
        {"neighbor_random", MaskVariant::NeighborRandom},
    };
    for (const auto& [name, v] : names) {
        if (text == name) return v;
    }
    fail(ErrorCode::InvalidArgument, "unknown mask variant '" + text + "'");
}

const char* to_string(MaskVariant variant) noexcept {
    switch (variant) {
        case MaskVariant::Ifs: return "ifs";
        case MaskVariant::Neighbor: return "neighbor";
        case MaskVariant::NeighborPlus: return "neighbor_plus";
        case MaskVariant::KeyFrame: return "key_frame";
        case MaskVariant::KeyFramePlus: return "key_frame_plus";
        case MaskVariant::NeighborUniform: return "neighbor_uniform";
        case MaskVariant::NeighborRandom: return "neighbor_random";
    }
    return "unknown";
}

namespace {

IFSMask keys_only_mask(std::size_t frames, std::span<const std::size_t> keys) {
    require(!keys.empty(), "key-frame-only masks need at least one key frame");
    IFSMask mask = build_ifs_mask(frames, 0, keys);
    for (std::size_t i = 0; i < frames; ++i) {
        if (!std::binary_search(mask.key_frames.begin(), mask.key_frames.end(), i)) {
            mask.allowed.set(i, i, false);
        }
    }
    return mask;
}

std::vector<std::size_t> random_frames(std::size_t frames, std::size_t count, std::uint64_t seed) {
    // Partial Fisher-Yates driven by the counter generator.
    std::vector<std::size_t> pool(frames);
    for (std::size_t i = 0; i < frames; ++i) pool[i] = i;
    const CounterRng rng(seed);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t span = frames - i;
        const std::size_t pick = i + static_cast<std::size_t>(rng.bits(i) % span);
        std::swap(pool[i], pool[pick]);
    }
    pool.resize(count);
    std::sort(pool.begin(), pool.end());
    return pool;
}

}  // namespace

IFSMask build_variant_mask(MaskVariant variant, const PseudoVideo& video,
                           std::size_t neighbor_range, std::size_t key_count, double alpha,
                           std::uint64_t seed, SadMode mode) {
    const std::size_t n = video.frames();
    require(key_count <= n, "key-frame count exceeds frame count");
    auto detect = [&](std::size_t count) {
        return count == 0 ? std::vector<std::size_t>{} : detect_keyframes(video, count, alpha, mode);
    };

    switch (variant) {
        case MaskVariant::Ifs:
            return build_ifs_mask(n, neighbor_range, detect(key_count));
        case MaskVariant::Neighbor:
            return build_ifs_mask(n, neighbor_range, {});
        case MaskVariant::NeighborPlus:
            return build_ifs_mask(n, neighbor_range + (key_count + 1) / 2, {});
        case MaskVariant::KeyFrame:
            return keys_only_mask(n, detect(key_count));
        case MaskVariant::KeyFramePlus:
            return keys_only_mask(n, detect(std::min(n, key_count + 2 * neighbor_range)));
        case MaskVariant::NeighborUniform: {
            std::vector<std::size_t> keys;
            for (std::size_t s = 0; s < key_count; ++s) keys.push_back(s * n / key_count);
            return build_ifs_mask(n, neighbor_range, keys);
        }
        case MaskVariant::NeighborRandom:
            return build_ifs_mask(n, neighbor_range, random_frames(n, key_count, seed));
    }
    fail(ErrorCode::InvalidArgument, "unhandled mask variant");
}

}  // namespace longdiff
