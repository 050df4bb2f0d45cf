#include "stochmesh/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace stochmesh;

// Known-answer vectors from the Random123 distribution (philox4x32_10).
TEST(Philox, KnownAnswerZero) {
    const auto r = philox::philox4x32_10({0, 0, 0, 0}, {0, 0});
    EXPECT_EQ(r, (philox::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
}

TEST(Philox, KnownAnswerOnes) {
    const auto r = philox::philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                         {0xffffffffu, 0xffffffffu});
    EXPECT_EQ(r, (philox::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
}

TEST(Philox, KnownAnswerPi) {
    const auto r = philox::philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                         {0xa4093822u, 0x299f31d0u});
    EXPECT_EQ(r, (philox::Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(RngStream, ReproducibleAndDistinct) {
    RngStream a(42, 7, {3, 11}), b(42, 7, {3, 11});
    for (int k = 0; k < 100; ++k) EXPECT_EQ(a.next_block(), b.next_block());
    EXPECT_EQ(a.draws(), 100u);

    const auto first = RngStream(42, 7, {3, 11}).next_block();
    EXPECT_NE(first, RngStream(43, 7, {3, 11}).next_block());
    EXPECT_NE(first, RngStream(42, 8, {3, 11}).next_block());
    EXPECT_NE(first, RngStream(42, 7, {4, 11}).next_block());
    EXPECT_NE(first, RngStream(42, 7, {3, 12}).next_block());
    EXPECT_NE(first, RngStream(42, 7, {3ull | (1ull << 40), 11}).next_block());
}

TEST(RngStream, ZeroSubstepGivesZeroIncrement) {
    RngStream r(1, 0, {0, 0});
    const Vec2 d = brownian_increment(r, 0.0);
    EXPECT_EQ(d.x, 0.0);
    EXPECT_EQ(d.y, 0.0);
}

TEST(RngStream, IncrementMoments) {
    const double dt = 5e-5;
    const int n = 1'000'000;
    RngStream r(2024, 3, {17, 0});
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (int k = 0; k < n; ++k) {
        const Vec2 d = brownian_increment(r, dt);
        sx += d.x;
        sy += d.y;
        sxx += d.x * d.x;
        syy += d.y * d.y;
        sxy += d.x * d.y;
    }
    const double mx = sx / n, my = sy / n;
    const double bound = 4.0 * std::sqrt(dt / n);
    EXPECT_LT(std::abs(mx), bound);
    EXPECT_LT(std::abs(my), bound);
    EXPECT_NEAR((sxx / n - mx * mx) / dt, 1.0, 0.01);
    EXPECT_NEAR((syy / n - my * my) / dt, 1.0, 0.01);
    EXPECT_LT(std::abs(sxy / n) / dt, 0.01);
}

TEST(RngStream, NormalTailsAreSane) {
    // P(|Z| > 3) = 0.0026998
    RngStream r(9, 9, {9, 9});
    int beyond = 0;
    const int n = 400'000;
    for (int k = 0; k < n / 2; ++k) {
        const Vec2 z = r.normal_pair();
        beyond += (std::abs(z.x) > 3.0) + (std::abs(z.y) > 3.0);
        ASSERT_TRUE(std::isfinite(z.x) && std::isfinite(z.y));
    }
    const double p = static_cast<double>(beyond) / n;
    EXPECT_NEAR(p, 0.0026998, 5.0 * std::sqrt(0.0027 / n));
}
