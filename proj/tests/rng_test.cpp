#include <cstdint>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <gtest/gtest.h>

#include "lerw/rng.hpp"

namespace lerw {
namespace {

// Known-answer vectors from the Random123 distribution (kat_vectors).
TEST(Philox, KnownAnswers) {
    using C = Philox4x32::Counter;
    using K = Philox4x32::Key;
    EXPECT_EQ(Philox4x32::block(C{0, 0, 0, 0}, K{0, 0}),
              (C{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
    EXPECT_EQ(Philox4x32::block(C{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                K{0xffffffffu, 0xffffffffu}),
              (C{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
    EXPECT_EQ(Philox4x32::block(C{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                K{0xa4093822u, 0x299f31d0u}),
              (C{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(RngStream, EqualArgumentsGiveEqualSequences) {
    auto a = derive_stream(42, 0);
    auto b = derive_stream(42, 0);
    for (int i = 0; i < 1'000'000; ++i) ASSERT_EQ(a(), b()) << "position " << i;
}

TEST(RngStream, DistinctStreamsDiffer) {
    auto a = derive_stream(42, 0);
    auto b = derive_stream(42, 1);
    int equal = 0;
    for (int i = 0; i < 1'000'000; ++i) equal += a() == b();
    EXPECT_LT(equal, 1'000'000);
    EXPECT_LE(equal, 2);
}

TEST(RngStream, DistinctSeedsDiffer) {
    auto a = derive_stream(1, 5);
    auto b = derive_stream(2, 5);
    int equal = 0;
    for (int i = 0; i < 10'000; ++i) equal += a() == b();
    EXPECT_EQ(equal, 0);
}

TEST(RngStream, UniformPassesChiSquare) {
    constexpr int kBins = 100;
    constexpr int kDraws = 1'000'000;
    auto rng = derive_stream(42, 7);
    std::vector<double> counts(kBins, 0.0);
    for (int i = 0; i < kDraws; ++i) {
        const double u = rng.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        counts[static_cast<std::size_t>(u * kBins)] += 1.0;
    }
    const double expected = static_cast<double>(kDraws) / kBins;
    double chi2 = 0.0;
    for (double c : counts) chi2 += (c - expected) * (c - expected) / expected;
    const boost::math::chi_squared dist(kBins - 1);
    const double p = boost::math::cdf(boost::math::complement(dist, chi2));
    EXPECT_GT(p, 0.001) << "chi2=" << chi2;
}

TEST(RngStream, BelowIsUnbiasedForSmallBounds) {
    auto rng = derive_stream(9, 3);
    constexpr int kDraws = 600'000;
    std::vector<double> counts(6, 0.0);
    for (int i = 0; i < kDraws; ++i) {
        const auto v = rng.below(6);
        ASSERT_LT(v, 6u);
        counts[v] += 1.0;
    }
    double chi2 = 0.0;
    for (double c : counts) chi2 += (c - kDraws / 6.0) * (c - kDraws / 6.0) / (kDraws / 6.0);
    const boost::math::chi_squared dist(5);
    EXPECT_GT(boost::math::cdf(boost::math::complement(dist, chi2)), 0.001);
}

TEST(RngStream, RecordsItsKey) {
    const auto rng = derive_stream(77, 12);
    EXPECT_EQ(rng.master_seed(), 77u);
    EXPECT_EQ(rng.stream_index(), 12u);
}

}  // namespace
}  // namespace lerw
