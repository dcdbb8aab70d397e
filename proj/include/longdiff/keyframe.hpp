#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "longdiff/mask.hpp"
#include "longdiff/tensor.hpp"

namespace longdiff {

// N x 3 x hw integer frames in [0, 255] built from hidden states.
class PseudoVideo {
public:
    PseudoVideo() = default;
    PseudoVideo(std::size_t frames, std::size_t spatial, std::vector<std::uint8_t> values);

    std::size_t frames() const noexcept { return frames_; }
    std::size_t spatial() const noexcept { return spatial_; }
    std::size_t frame_stride() const noexcept { return 3 * spatial_; }

    // Channel-major values of frame k: [c0 x hw | c1 x hw | c2 x hw].
    std::span<const std::uint8_t> frame(std::size_t k) const;
    std::uint8_t at(std::size_t k, std::size_t channel, std::size_t pos) const {
        return values_[k * frame_stride() + channel * spatial_ + pos];
    }

    const std::vector<std::uint8_t>& values() const noexcept { return values_; }

    bool operator==(const PseudoVideo&) const = default;

private:
    std::size_t frames_ = 0;
    std::size_t spatial_ = 0;
    std::vector<std::uint8_t> values_;
};

enum class SadMode { Mean, Sum };

const char* to_string(SadMode mode) noexcept;
SadMode parse_sad_mode(const std::string& text);

struct FrameScore {
    std::size_t index = 0;
    double entropy = 0.0;  // bits
    double sad = 0.0;
    double score = 0.0;    // alpha * entropy + sad
};

struct IFSMask {
    AttentionMask allowed;
    std::vector<std::size_t> key_frames;  // sorted, unique
    std::size_t neighbor_range = 0;
};

// Max, mean and min over the channel axis: N x C x hw -> N x 3 x hw.
Tensor pool_channels(const Tensor& features);

// Global min/max affine map to [0, 255], rounded half away from zero. A
// constant input maps to all zeros.
PseudoVideo quantize(const Tensor& pooled);

PseudoVideo make_pseudo_video(const Tensor& features);

// Luminance = round(mean of the 3 channels); Shannon entropy of its 256-bin
// histogram in bits.
double frame_entropy(std::span<const std::uint8_t> frame, std::size_t spatial);
double frame_entropy(const PseudoVideo& video, std::size_t k);

// Absolute difference to frame k-1 over every pixel-channel; 0 for k = 0.
// Mean mode divides by 3 * hw.
double frame_sad(const PseudoVideo& video, std::size_t k, SadMode mode = SadMode::Mean);

std::vector<FrameScore> score_frames(const PseudoVideo& video, double alpha,
                                     SadMode mode = SadMode::Mean);

// Shot s covers [floor(s*N/n), floor((s+1)*N/n)); the highest-scoring frame
// of each shot is selected, earliest on ties.
std::vector<std::size_t> select_keyframes(std::span<const FrameScore> scores, std::size_t shots);

std::vector<std::size_t> detect_keyframes(const PseudoVideo& video, std::size_t shots,
                                          double alpha, SadMode mode = SadMode::Mean);

// allowed(i, j) = |i - j| <= L or j is a key frame.
IFSMask build_ifs_mask(std::size_t frames, std::size_t neighbor_range,
                       std::span<const std::size_t> key_frames);

// Frame-selection ablations. Each variant receives the pseudo-video so it can
// run its own detection.
enum class MaskVariant {
    Ifs,              // neighbors + n key frames
    Neighbor,         // neighbors only
    NeighborPlus,     // neighbor range widened by ceil(n/2) on each side
    KeyFrame,         // n key frames only
    KeyFramePlus,     // n + 2L key frames only
    NeighborUniform,  // neighbors + n evenly spaced frames
    NeighborRandom,   // neighbors + n seeded random frames
};

MaskVariant parse_mask_variant(const std::string& text);
const char* to_string(MaskVariant variant) noexcept;

IFSMask build_variant_mask(MaskVariant variant, const PseudoVideo& video,
                           std::size_t neighbor_range, std::size_t key_count, double alpha,
                           std::uint64_t seed, SadMode mode = SadMode::Mean);

}  // namespace longdiff
