#include <gtest/gtest.h>

#include <cstdint>
#include <random>

#include "../support/oracles.hpp"
#include "longdiff/error.hpp"
#include "longdiff/position_mapping.hpp"

using namespace longdiff;

TEST(GroupConfig, ReferenceCase) {
    const auto cfg = group_config(9, 3);
    EXPECT_EQ(cfg.group_size, 4u);
    EXPECT_EQ(cfg.shifts, 3u);
}

TEST(GroupConfig, DefaultPipelineCase) {
    const auto cfg = group_config(128, 16);
    EXPECT_EQ(cfg.group_size, 9u);
    EXPECT_EQ(cfg.shifts, 8u);
}

TEST(GroupConfig, FullResolutionHasNoShifts) {
    const auto cfg = group_config(17, 17);
    EXPECT_EQ(cfg.group_size, 1u);
    EXPECT_EQ(cfg.shifts, 0u);
}

TEST(GroupConfig, SingleFrameIsTrivial) {
    const auto cfg = group_config(1, 1);
    EXPECT_EQ(cfg.group_size, 1u);
    EXPECT_EQ(cfg.shifts, 0u);
    const auto sched = schedule(cfg);
    ASSERT_EQ(sched.matrices.size(), 1u);
    EXPECT_EQ(sched.matrices[0](0, 0), 0);
}

TEST(GroupConfig, InvalidRejected) {
    EXPECT_THROW(group_config(9, 1), Error);
    EXPECT_THROW(group_config(9, 10), Error);
    EXPECT_THROW(group_config(0, 0), Error);
    EXPECT_THROW(group_config(1, 2), Error);
}

TEST(GroupPosition, SignedRounding) {
    const auto cfg = group_config(9, 3);
    const std::int64_t expected[] = {-2, -2, -2, -2, -1, -1, -1, -1, 0, 1, 1, 1, 1, 2, 2, 2, 2};
    for (std::int64_t p = -8; p <= 8; ++p) EXPECT_EQ(group_position(p, cfg), expected[p + 8]) << p;
    EXPECT_THROW(group_position(9, cfg), Error);
    EXPECT_THROW(group_position(-9, cfg), Error);
}

TEST(Schedule, NineFramesThreeGroups) {
    const auto sched = schedule(group_config(9, 3));
    ASSERT_EQ(sched.matrices.size(), 4u);
    EXPECT_EQ(sched.matrices[0].column(0), (std::vector<std::int64_t>{0, 1, 1, 1, 1, 2, 2, 2, 2}));
    EXPECT_EQ(sched.assignment_record(1, 0), (std::vector<std::int64_t>{1, 0, 0, 0}));
    EXPECT_EQ(sched.assignment_record(4, 0), (std::vector<std::int64_t>{1, 1, 1, 1}));
}

TEST(Schedule, MatchesOracleAndInvariants) {
    std::mt19937_64 gen(2024);
    for (int trial = 0; trial < 60; ++trial) {
        const long n = std::uniform_int_distribution<long>(2, 96)(gen);
        const long g = std::uniform_int_distribution<long>(2, n)(gen);
        const auto sched = schedule(group_config(n, g));
        const auto naive = oracle::schedule(n, g);
        ASSERT_EQ(sched.matrices.size(), naive.size()) << n << ' ' << g;
        for (std::size_t m = 0; m < naive.size(); ++m) {
            const auto& mat = sched.matrices[m];
            EXPECT_TRUE(mat.is_antisymmetric());
            for (long i = 0; i < n; ++i) {
                for (long j = 0; j < n; ++j) ASSERT_EQ(mat(i, j), naive[m][i][j]);
            }
        }
        for (long i = 0; i < n; ++i) {
            for (long j = 0; j < n; ++j) {
                std::int64_t sum = 0;
                for (auto v : sched.assignment_record(i, j)) sum += v;
                ASSERT_EQ(sum, i - j) << "N=" << n << " G=" << g;
            }
        }
    }
}

TEST(Schedule, GroupedValuesStayInRange) {
    for (std::size_t n : {2u, 9u, 33u, 128u}) {
        for (std::size_t g : {std::size_t{2}, n / 2 + 1, n}) {
            const auto cfg = group_config(n, g);
            const auto mat = grouped_matrix(cfg);
            EXPECT_GE(mat.min_value(), -static_cast<std::int64_t>(g - 1));
            EXPECT_LE(mat.max_value(), static_cast<std::int64_t>(g - 1));
        }
    }
}

TEST(Schedule, FullGroupsGiveRelativePositions) {
    const auto sched = schedule(group_config(12, 12));
    ASSERT_EQ(sched.matrices.size(), 1u);
    EXPECT_EQ(sched.matrices[0], relative_matrix(12));
}

TEST(Shift, RejectsNonAntisymmetric) {
    PositionMatrix m(3);
    m(0, 1) = 1;
    EXPECT_THROW(shift(m), Error);
}

TEST(AbsoluteSchedule, SumsToIndex) {
    for (auto [n, g] : {std::pair<std::size_t, std::size_t>{9, 3}, {50, 7}, {64, 64}}) {
        const auto cfg = group_config(n, g);
        const auto vecs = absolute_schedule(cfg);
        ASSERT_EQ(vecs.size(), cfg.shifts + 1);
        for (std::size_t i = 0; i < n; ++i) {
            std::int64_t sum = 0;
            for (const auto& v : vecs) sum += v[i];
            EXPECT_EQ(sum, static_cast<std::int64_t>(i));
        }
    }
}

TEST(PositionMatrix, TensorRoundTrip) {
    const auto mat = grouped_matrix(group_config(9, 3));
    EXPECT_EQ(PositionMatrix::from_tensor(mat.to_tensor()), mat);
    EXPECT_THROW(PositionMatrix::from_tensor(Tensor({2, 2}, {0, 0.5, 0, 0})), Error);
}
