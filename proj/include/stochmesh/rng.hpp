// Counter-based random streams (Philox4x32-10).
//
// Every Monte Carlo path owns a stream addressed by (seed, step, point, path).
// Draw k of a stream is a pure function of that address and k, so results do not
// depend on how paths are scheduled across threads.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace stochmesh {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

namespace philox {

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

inline constexpr std::uint32_t kMul0 = 0xD2511F53u;
inline constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
inline constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

constexpr void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

constexpr Counter round(Counter c, Key k) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, c[0], hi0, lo0);
    mulhilo(kMul1, c[2], hi1, lo1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

constexpr Counter philox4x32_10(Counter c, Key k) {
    for (int r = 0; r < 10; ++r) {
        if (r > 0) {
            k[0] += kWeyl0;
            k[1] += kWeyl1;
        }
        c = round(c, k);
    }
    return c;
}

}  // namespace philox

constexpr std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Identifies one path's random stream.
struct StreamId {
    std::uint64_t point = 0;  // caller-defined point/field tag
    std::uint32_t path = 0;
};

class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t step, StreamId id) : id_(id) {
        const std::uint64_t k = splitmix64(seed ^ splitmix64(step + 0x5851F42D4C957F2Dull));
        key_ = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
    }

    /// Next 128-bit block of the stream.
    philox::Counter next_block() {
        const philox::Counter c{draw_++, id_.path, static_cast<std::uint32_t>(id_.point),
                                static_cast<std::uint32_t>(id_.point >> 32)};
        return philox::philox4x32_10(c, key_);
    }

    /// Two independent N(0,1) draws (Box-Muller on one block).
    Vec2 normal_pair() {
        const auto b = next_block();
        const std::uint64_t a = (static_cast<std::uint64_t>(b[0]) << 32) | b[1];
        const std::uint64_t c = (static_cast<std::uint64_t>(b[2]) << 32) | b[3];
        // u1 in (0, 1], u2 in [0, 1)
        const double u1 = (static_cast<double>(a >> 11) + 1.0) * 0x1.0p-53;
        const double u2 = static_cast<double>(c >> 11) * 0x1.0p-53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        return {r * std::cos(theta), r * std::sin(theta)};
    }

    std::uint32_t draws() const { return draw_; }

private:
    StreamId id_;
    philox::Key key_{};
    std::uint32_t draw_ = 0;
};

/// Brownian increment over dt_sub: each component sqrt(dt_sub) * N(0,1).
inline Vec2 brownian_increment(RngStream& rng, double dt_sub) {
    const Vec2 z = rng.normal_pair();
    const double s = std::sqrt(dt_sub);
    return {s * z.x, s * z.y};
}

}  // namespace stochmesh
