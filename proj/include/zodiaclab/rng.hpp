#pragma once

// Deterministic PCG32 (XSH-RR) generator plus the exact sampling routines built
// on top of it. Every stochastic quantity in this project flows through this
// header. The update rule, seeding sequence, and derived draws are pinned so a
// given (seed, stream) pair reproduces the identical value sequence everywhere:
//
//   state' = state * 6364136223846793005 + increment,  increment = 2*stream + 1
//   output = rotr32(((state >> 18) ^ state) >> 27, state >> 59)
//   seeding: state = 0; advance; state += seed; advance
//   unit draw u = (output + 0.5) * 2^-32, strictly inside (0, 1)
//
// The half-offset unit draw keeps Bernoulli(p) exact at p in {0, 1} and keeps
// log(u) finite for Box-Muller.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace zodiaclab {

class Pcg32 {
public:
    Pcg32(std::uint64_t seed, std::uint64_t stream) noexcept
        : state_(0), inc_((stream << 1u) | 1u) {
        next_u32();
        state_ += seed;
        next_u32();
    }

    std::uint32_t next_u32() noexcept {
        const std::uint64_t old = state_;
        state_ = old * 6364136223846793005ULL + inc_;
        const auto xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
        const auto rot = static_cast<std::uint32_t>(old >> 59u);
        return (xorshifted >> rot) | (xorshifted << ((0u - rot) & 31u));
    }

    double next_unit() noexcept {
        return (static_cast<double>(next_u32()) + 0.5) * 0x1p-32;
    }

    // Unbiased draw in [0, n): reject outputs >= floor(2^32 / n) * n, reduce modulo n.
    std::uint32_t uniform_int(std::uint32_t n) {
        if (n == 0) throw std::invalid_argument("uniform_int: n must be >= 1");
        const std::uint64_t limit = ((std::uint64_t{1} << 32) / n) * n;
        for (;;) {
            const std::uint32_t r = next_u32();
            if (r < limit) return r % n;
        }
    }

    bool bernoulli(double p) noexcept { return next_unit() < p; }

    // Box-Muller, cosine branch only: consumes exactly two unit draws.
    double normal(double mean, double stddev) noexcept {
        const double u1 = next_unit();
        const double u2 = next_unit();
        return mean + stddev * std::sqrt(-2.0 * std::log(u1)) *
                          std::cos(2.0 * std::numbers::pi * u2);
    }

    // Poisson by inversion (sequential search on the CDF): one unit draw.
    std::uint32_t poisson(double rate) {
        if (!(rate > 0.0)) throw std::invalid_argument("poisson: rate must be positive");
        const double u = next_unit();
        double term = std::exp(-rate);
        double cdf = term;
        std::uint32_t k = 0;
        while (u > cdf) {
            ++k;
            term *= rate / k;
            cdf += term;
            if (term == 0.0) break;  // underflow saturation at extreme rates
        }
        return k;
    }

    double uniform_real(double lo, double hi) noexcept {
        return lo + (hi - lo) * next_unit();
    }

private:
    std::uint64_t state_;
    std::uint64_t inc_;
};

// Seeded Fisher-Yates. The loop shape (descending i, j = uniform_int(i)) is part
// of the determinism contract.
template <typename T>
void shuffle(std::vector<T>& values, Pcg32& rng) {
    for (std::size_t i = values.size(); i > 1; --i) {
        const auto j = rng.uniform_int(static_cast<std::uint32_t>(i));
        std::swap(values[i - 1], values[j]);
    }
}

}  // namespace zodiaclab
