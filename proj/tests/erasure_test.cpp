#include <stdexcept>

#include <gtest/gtest.h>

#include "lerw/erasure.hpp"
#include "oracles.hpp"
#include "trace_checks.hpp"

namespace lerw {
namespace {

const WalkPath kBounce = WalkPath::from_points({{0, 0, 0}, {1, 0, 0}, {0, 0, 0}, {0, 1, 0}});

std::vector<Index> indices(std::initializer_list<Index> v) { return v; }

TEST(WindowLength, DirectArithmetic) {
    EXPECT_EQ(window_length(100, 0.5, 1'000'000), 10);
    EXPECT_EQ(window_length(10, 2.0, 1'000'000), 100);
    EXPECT_EQ(window_length(10, kInfiniteAlpha, 500), 500);
}

TEST(WindowLength, SnapsIntegralPowersAndClamps) {
    EXPECT_EQ(window_length(1024, 0.4, 1 << 20), 16);
    EXPECT_EQ(window_length(32, 0.4, 1 << 20), 4);
    EXPECT_EQ(window_length(16384, 0.4, 1 << 20), 48);  // 2^5.6 = 48.5
    EXPECT_EQ(window_length(7, 0.0, 100), 1);
    EXPECT_EQ(window_length(1000, 3.0, 50), 50);
    EXPECT_EQ(window_length(1, 5.0, 50), 1);
}

TEST(WindowLength, RejectsBadArguments) {
    EXPECT_THROW(window_length(0, 0.5, 10), std::invalid_argument);
    EXPECT_THROW(window_length(10, -1.0, 10), std::invalid_argument);
    EXPECT_THROW(window_length(10, 0.5, 0), std::invalid_argument);
}

TEST(EraseWindowed, DistinctPointsAreKept) {
    const WalkPath p = WalkPath::from_points({{0, 0}, {1, 0}, {1, 1}, {2, 1}, {2, 2}});
    for (Index W : {1, 2, 5, 100}) {
        const ErasureTrace t = erase_windowed(p, W);
        EXPECT_EQ(t.sigma, indices({0, 1, 2, 3, 4}));
        EXPECT_EQ(t.erased_path, p.points());
    }
}

TEST(EraseWindowed, SupRuleWithinWindow) {
    const ErasureTrace t = erase_windowed(kBounce, 2);
    EXPECT_EQ(t.sigma, indices({2, 3}));
    ASSERT_EQ(t.erased_path.cols(), 2);
    EXPECT_TRUE(t.erased_path.col(0).isZero());
    EXPECT_EQ(t.erased_path.col(1), kBounce.point(3));
    EXPECT_EQ(t.rho, indices({0, 0, 1, 2}));
}

TEST(EraseWindowed, LoopLongerThanWindowSurvives) {
    const ErasureTrace t = erase_windowed(kBounce, 1);
    EXPECT_EQ(t.sigma, indices({0, 1, 2, 3}));
    EXPECT_EQ(t.rho, indices({1, 2, 3, 4}));
}

TEST(EraseWindowed, SinglePoint) {
    const ErasureTrace t = erase_windowed(WalkPath(3), 4);
    EXPECT_EQ(t.sigma, indices({0}));
}

TEST(EraseWindowed, RejectsZeroWindow) { EXPECT_THROW(erase_windowed(kBounce, 0), std::invalid_argument); }

TEST(EraseWindowedNaive, MatchesHandExamples) {
    EXPECT_EQ(erase_windowed_naive(kBounce, 2).sigma, indices({2, 3}));
    EXPECT_EQ(erase_windowed_naive(kBounce, 1).sigma, indices({0, 1, 2, 3}));
    // Loop at e1 nested inside a loop at the origin.
    const WalkPath nested =
        WalkPath::from_points({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {1, 0, 0}, {0, 0, 0}});
    const ErasureTrace t = erase_windowed_naive(nested, 5);
    EXPECT_EQ(t.sigma, indices({4}));
    EXPECT_EQ(t.erased_path.cols(), 1);
    EXPECT_EQ(erase_windowed(nested, 5), t);
}

TEST(EraseWindowed, MatchesNaiveOnRandomPaths) {
    auto gen = derive_stream(2024, 0);
    for (int c = 0; c < 600; ++c) {
        const int dim = 1 + static_cast<int>(gen.below(3));
        const Index n = 1 + gen.below(2000);
        const Index W = 1 + gen.below(static_cast<std::uint32_t>(n));
        auto rng = derive_stream(2024, 1 + static_cast<std::uint64_t>(c));
        const WalkPath p = generate_walk(rng, n, dim);
        const ErasureTrace fast = erase_windowed(p, W);
        ASSERT_EQ(fast, erase_windowed_naive(p, W)) << "case " << c << " n=" << n << " W=" << W;
        ASSERT_EQ(checks::trace_violation(p, W, fast), "") << "case " << c;
    }
}

TEST(EraseFull, HandExamples) {
    const ErasureTrace t = erase_full(kBounce);
    ASSERT_EQ(t.erased_path.cols(), 2);
    EXPECT_TRUE(t.erased_path.col(0).isZero());
    EXPECT_EQ(t.erased_path.col(1), kBounce.point(3));
    const WalkPath simple = WalkPath::from_points({{0, 0, 0}, {0, 0, 1}, {0, 1, 1}, {1, 1, 1}});
    EXPECT_EQ(erase_full(simple).erased_path, simple.points());
}

TEST(EraseFull, MatchesChronologicalErasure) {
    for (int c = 0; c < 300; ++c) {
        auto rng = derive_stream(99, static_cast<std::uint64_t>(c));
        const int dim = 2 + c % 2;
        const WalkPath p = generate_walk(rng, 1 + (c * 37) % 2000, dim);
        const ErasureTrace full = erase_full(p);
        ASSERT_EQ(full.sigma, oracle::forward_loop_erasure(p)) << "case " << c;
        ASSERT_TRUE(checks::is_self_avoiding(full.erased_path));
        ASSERT_EQ(erase_windowed(p, p.size() + 17), full);
    }
}

TEST(EraseWindowed, UnitWindowKeepsEverything) {
    for (int dim = 1; dim <= 3; ++dim) {
        auto rng = derive_stream(5, static_cast<std::uint64_t>(dim));
        const WalkPath p = generate_walk(rng, 3000, dim);
        const ErasureTrace t = erase_windowed(p, 1);
        EXPECT_EQ(t.erased_path, p.points());
        EXPECT_EQ(std::count(t.y_flags.begin(), t.y_flags.end(), 1), p.size());
    }
}

TEST(WindowedJumpTimes, PrefixOfFullTrace) {
    auto rng = derive_stream(6, 0);
    const WalkPath p = generate_walk(rng, 5000, 3);
    const ErasureTrace t = erase_windowed(p, 30);
    const auto head = windowed_jump_times(p, 30, 100);
    ASSERT_EQ(head.size(), 100u);
    EXPECT_TRUE(std::equal(head.begin(), head.end(), t.sigma.begin()));
    EXPECT_EQ(windowed_jump_times(p, 30, p.size()), t.sigma);
}

TEST(LoopFreeMask, HandExamples) {
    EXPECT_EQ(loop_free_mask(kBounce, 2), (Mask{0, 0, 0, 1}));
    EXPECT_EQ(loop_free_mask(kBounce, 1), (Mask{1, 1, 1, 1}));
}

TEST(LoopFreeMask, MatchesPairwiseBruteForce) {
    for (int c = 0; c < 200; ++c) {
        auto rng = derive_stream(31, static_cast<std::uint64_t>(c));
        const int dim = 1 + c % 3;
        const WalkPath p = generate_walk(rng, 50 + c * 3, dim);
        const Index W = 1 + c % 40;
        const auto brute = oracle::brute_force_loop_free(p, W);
        ASSERT_EQ(loop_free_mask(p, W), brute) << "case " << c;
        ASSERT_EQ(oracle::loop_free_by_revisits(p, W), brute) << "case " << c;
    }
}

TEST(ZIndicator, Examples) {
    const Mask m{0, 0, 0, 1};
    EXPECT_TRUE(z_indicator(m, 0, 2));
    EXPECT_FALSE(z_indicator(m, 0, 3));
    const Mask all(10, 1);
    for (Index j = 0; j < 10; ++j)
        for (Index k = j; k < 10; ++k) EXPECT_FALSE(z_indicator(all, j, k));
}

TEST(ZIndicator, RejectsOutOfRange) {
    const Mask m{0, 0, 0, 1};
    EXPECT_THROW(z_indicator(m, 2, 1), std::out_of_range);
    EXPECT_THROW(z_indicator(m, -1, 1), std::out_of_range);
    EXPECT_THROW(z_indicator(m, 0, 4), std::out_of_range);
}

}  // namespace
}  // namespace lerw
