#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "../support/oracles.hpp"
#include "longdiff/error.hpp"
#include "longdiff/keyframe.hpp"
#include "longdiff/tensor_io.hpp"

using namespace longdiff;

namespace {

PseudoVideo random_video(std::mt19937_64& gen, std::size_t n, std::size_t hw, int levels) {
    std::uniform_int_distribution<int> value(0, levels - 1);
    std::vector<std::uint8_t> v(n * 3 * hw);
    for (auto& x : v) x = static_cast<std::uint8_t>(value(gen) * 255 / std::max(levels - 1, 1));
    return PseudoVideo(n, hw, std::move(v));
}

std::vector<std::vector<int>> as_frames(const PseudoVideo& video) {
    std::vector<std::vector<int>> frames;
    for (std::size_t k = 0; k < video.frames(); ++k) {
        const auto f = video.frame(k);
        frames.emplace_back(f.begin(), f.end());
    }
    return frames;
}

}  // namespace

TEST(PoolChannels, MaxMeanMin) {
    const auto pooled = pool_channels(Tensor({1, 3, 1}, {1.0, 2.0, 3.0}));
    EXPECT_EQ(pooled.dims, (std::vector<std::size_t>{1, 3, 1}));
    EXPECT_EQ(pooled.data, (std::vector<double>{3.0, 2.0, 1.0}));
}

TEST(PoolChannels, SingletonChannelRepeats) {
    const auto f = synth_features(3, 1, 5, 4);
    const auto pooled = pool_channels(f);
    for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t c = 0; c < 3; ++c)
            for (std::size_t p = 0; p < 5; ++p)
                EXPECT_EQ(pooled.data[(k * 3 + c) * 5 + p], f.data[k * 5 + p]);
}

TEST(Quantize, Anchors) {
    const auto v = quantize(Tensor({1, 3, 1}, {0.0, 0.5, 1.0}));
    EXPECT_EQ(v.values(), (std::vector<std::uint8_t>{0, 128, 255}));
    const auto ends = quantize(Tensor({1, 3, 2}, {0, 1, 0, 1, 0, 1}));
    EXPECT_EQ(ends.values(), (std::vector<std::uint8_t>{0, 255, 0, 255, 0, 255}));
    const auto flat = quantize(Tensor({2, 3, 2}, std::vector<double>(12, 4.2)));
    EXPECT_EQ(flat.values(), std::vector<std::uint8_t>(12, 0));
}

TEST(Quantize, InvariantUnderPositiveAffineMaps) {
    // Dyadic values keep a*x + b exact, so the comparison is exact too.
    std::mt19937_64 gen(5);
    std::uniform_int_distribution<int> numer(-512, 512);
    Tensor t({4, 3, 8});
    for (auto& x : t.data) x = numer(gen) / 64.0;
    const auto base = quantize(t);
    for (double a : {0.5, 2.0, 8.0}) {
        for (double b : {-3.0, 0.0, 1.25}) {
            Tensor u = t;
            for (auto& x : u.data) x = a * x + b;
            EXPECT_EQ(quantize(u), base) << a << ' ' << b;
        }
    }
}

TEST(FrameEntropy, Anchors) {
    std::vector<std::uint8_t> constant(3 * 16, 77);
    EXPECT_EQ(frame_entropy(constant, 16), 0.0);

    std::vector<std::uint8_t> half(3 * 16, 0);
    for (std::size_t c = 0; c < 3; ++c)
        for (std::size_t p = 8; p < 16; ++p) half[c * 16 + p] = 255;
    EXPECT_EQ(frame_entropy(half, 16), 1.0);

    std::vector<std::uint8_t> full(3 * 256);
    for (std::size_t c = 0; c < 3; ++c)
        for (std::size_t p = 0; p < 256; ++p) full[c * 256 + p] = static_cast<std::uint8_t>(p);
    EXPECT_EQ(frame_entropy(full, 256), 8.0);
}

TEST(FrameEntropy, LuminanceRoundsChannelMean) {
    // (0 + 0 + 1) / 3 rounds to 0; (0 + 1 + 1) / 3 rounds to 1.
    const std::vector<std::uint8_t> frame{0, 0, 0, 1, 1, 1};
    EXPECT_EQ(frame_entropy(frame, 2), 1.0);
    const std::vector<std::uint8_t> same{0, 0, 0, 0, 0, 1};
    EXPECT_EQ(frame_entropy(same, 2), 0.0);
}

TEST(FrameEntropy, MatchesOracleAndStaysInRange) {
    std::mt19937_64 gen(6);
    for (int trial = 0; trial < 40; ++trial) {
        const auto video = random_video(gen, 2, 1 + trial * 7, 2 + trial * 6);
        const auto frames = as_frames(video);
        const double h = frame_entropy(video, 1);
        EXPECT_NEAR(h, oracle::frame_entropy_bits(frames[1], video.spatial()), 1e-12);
        EXPECT_GE(h, 0.0);
        EXPECT_LE(h, 8.0);
    }
}

TEST(FrameSad, Anchors) {
    std::vector<std::uint8_t> v(2 * 3 * 4, 0);
    for (std::size_t i = 12; i < 24; ++i) v[i] = 255;
    const PseudoVideo video(2, 4, v);
    EXPECT_EQ(frame_sad(video, 0), 0.0);
    EXPECT_EQ(frame_sad(video, 1), 255.0);
    EXPECT_EQ(frame_sad(video, 1, SadMode::Sum), 255.0 * 12);
    const PseudoVideo same(2, 4, std::vector<std::uint8_t>(24, 9));
    EXPECT_EQ(frame_sad(same, 1), 0.0);
    EXPECT_THROW(frame_sad(video, 2), Error);
}

TEST(DetectKeyframes, ConstantVideoPicksShotStarts) {
    const PseudoVideo video(16, 4, std::vector<std::uint8_t>(16 * 12, 3));
    EXPECT_EQ(detect_keyframes(video, 4, 2.0), (std::vector<std::size_t>{0, 4, 8, 12}));
}

TEST(DetectKeyframes, SingletonShotsSelectEverything) {
    std::mt19937_64 gen(8);
    const auto video = random_video(gen, 7, 9, 256);
    EXPECT_EQ(detect_keyframes(video, 7, 2.0), (std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6}));
}

TEST(DetectKeyframes, SingleTexturedFrame) {
    // Frame 5 is the only one with two luminance levels; the SAD of 5 and 6
    // is equal, so the entropy term breaks the tie toward 5.
    const std::size_t n = 8, hw = 4;
    std::vector<std::uint8_t> v(n * 3 * hw, 100);
    for (std::size_t c = 0; c < 3; ++c) {
        v[5 * 3 * hw + c * hw + 0] = 200;
        v[5 * 3 * hw + c * hw + 1] = 200;
    }
    const PseudoVideo video(n, hw, v);
    EXPECT_EQ(detect_keyframes(video, 1, 2.0), (std::vector<std::size_t>{5}));
    EXPECT_EQ(oracle::keyframes(as_frames(video), hw, 1, 2.0), (std::vector<std::size_t>{5}));
}

TEST(DetectKeyframes, MatchesBruteForce) {
    std::mt19937_64 gen(9);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 40)(gen);
        const std::size_t hw = std::uniform_int_distribution<std::size_t>(1, 32)(gen);
        const std::size_t shots = std::uniform_int_distribution<std::size_t>(1, n)(gen);
        const int levels = std::uniform_int_distribution<int>(1, 4)(gen);
        const auto video = random_video(gen, n, hw, levels);
        EXPECT_EQ(detect_keyframes(video, shots, 2.0), oracle::keyframes(as_frames(video), hw, shots, 2.0));
    }
}

TEST(DetectKeyframes, InvalidShotCount) {
    const PseudoVideo video(4, 1, std::vector<std::uint8_t>(12, 0));
    EXPECT_THROW(detect_keyframes(video, 5, 2.0), Error);
    EXPECT_THROW(detect_keyframes(video, 0, 2.0), Error);
}

TEST(IfsMask, ReferenceRow) {
    const std::vector<std::size_t> keys{4};
    const auto mask = build_ifs_mask(6, 1, keys);
    for (std::size_t j = 0; j < 6; ++j) EXPECT_EQ(mask.allowed(0, j), j == 0 || j == 1 || j == 4) << j;
}

TEST(IfsMask, DegenerateRanges) {
    const auto full = build_ifs_mask(5, 4, {});
    EXPECT_EQ(full.allowed, AttentionMask::all_ones(5));
    const auto ident = build_ifs_mask(5, 0, {});
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) EXPECT_EQ(ident.allowed(i, j), i == j);
}

TEST(IfsMask, MatchesEnumerationAndIsAsymmetric) {
    std::mt19937_64 gen(10);
    bool saw_asymmetry = false;
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 50)(gen);
        const std::size_t l = std::uniform_int_distribution<std::size_t>(0, n)(gen);
        std::vector<std::size_t> keys;
        for (std::size_t j = 0; j < n; ++j)
            if (std::bernoulli_distribution(0.15)(gen)) keys.push_back(j);
        const auto mask = build_ifs_mask(n, l, keys);
        const auto naive = oracle::ifs_mask(n, l, keys);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                ASSERT_EQ(mask.allowed(i, j), naive[i][j]);
                saw_asymmetry = saw_asymmetry || mask.allowed(i, j) != mask.allowed(j, i);
            }
        }
    }
    EXPECT_TRUE(saw_asymmetry);
}

TEST(IfsMask, OutOfRangeKeyRejected) {
    const std::vector<std::size_t> keys{6};
    EXPECT_THROW(build_ifs_mask(6, 1, keys), Error);
}

TEST(MaskVariants, Shapes) {
    std::mt19937_64 gen(11);
    const auto video = random_video(gen, 32, 8, 256);
    const auto ifs = build_variant_mask(MaskVariant::Ifs, video, 2, 4, 2.0, 0);
    EXPECT_EQ(ifs.key_frames, detect_keyframes(video, 4, 2.0));
    const auto nb = build_variant_mask(MaskVariant::Neighbor, video, 2, 4, 2.0, 0);
    EXPECT_TRUE(nb.key_frames.empty());
    EXPECT_EQ(nb.allowed.max_allowed_per_row(), 5u);
    const auto uni = build_variant_mask(MaskVariant::NeighborUniform, video, 2, 4, 2.0, 0);
    EXPECT_EQ(uni.key_frames, (std::vector<std::size_t>{0, 8, 16, 24}));
    const auto rnd1 = build_variant_mask(MaskVariant::NeighborRandom, video, 2, 4, 2.0, 5);
    const auto rnd2 = build_variant_mask(MaskVariant::NeighborRandom, video, 2, 4, 2.0, 5);
    EXPECT_EQ(rnd1.key_frames, rnd2.key_frames);
    EXPECT_EQ(rnd1.key_frames.size(), 4u);
    const auto kf = build_variant_mask(MaskVariant::KeyFrame, video, 2, 4, 2.0, 0);
    for (std::size_t i = 0; i < 32; ++i) EXPECT_EQ(kf.allowed.allowed_in_row(i), 4u);
}
