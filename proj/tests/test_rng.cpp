#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "zodiaclab/rng.hpp"

using zodiaclab::Pcg32;

TEST_CASE("pcg32 matches the published reference stream") {
    // pcg32_srandom(42, 54) demo outputs
    Pcg32 rng(42, 54);
    const std::vector<std::uint32_t> expected = {0xa15c02b7u, 0x7b47f409u, 0xba1d3330u,
                                                 0x83d2f293u, 0xbfa4784bu, 0xcbed606eu};
    for (const auto value : expected) REQUIRE(rng.next_u32() == value);
}

TEST_CASE("pcg32 frozen vectors for project seeds") {
    Pcg32 a(1, 0);
    const std::vector<std::uint32_t> expected_a = {0xe2393051u, 0x01112f35u, 0xd3509d35u,
                                                   0x0b932f4au, 0x8aa46776u, 0x8c532036u,
                                                   0xa0cd21d8u, 0xb8e6a8d0u};
    for (const auto value : expected_a) REQUIRE(a.next_u32() == value);

    Pcg32 b(123456789, 99);
    const std::vector<std::uint32_t> expected_b = {0x46af4142u, 0xa14eb5b8u, 0xc93402a4u,
                                                   0xc306fb72u, 0x8263c640u, 0xc5de9486u,
                                                   0x66567e15u, 0x63fae4c1u};
    for (const auto value : expected_b) REQUIRE(b.next_u32() == value);
}

TEST_CASE("same seed and stream reproduce the identical sequence") {
    Pcg32 a(7, 3);
    Pcg32 b(7, 3);
    for (int i = 0; i < 1000; ++i) REQUIRE(a.next_u32() == b.next_u32());
}

TEST_CASE("adjacent streams diverge") {
    Pcg32 a(7, 3);
    Pcg32 b(7, 4);
    int differing = 0;
    for (int i = 0; i < 64; ++i) {
        if (a.next_u32() != b.next_u32()) ++differing;
    }
    REQUIRE(differing > 32);
}

TEST_CASE("unit draws sit strictly inside (0, 1) with frozen leading values") {
    Pcg32 rng(1, 0);
    REQUIRE(rng.next_unit() == 0.88368513097520918);
    REQUIRE(rng.next_unit() == 0.0041684632888063788);
    REQUIRE(rng.next_unit() == 0.82544882351066917);
    REQUIRE(rng.next_unit() == 0.045214610756374896);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.next_unit();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
    }
}

TEST_CASE("unit draw mean approaches one half") {
    Pcg32 rng(2024, 0);
    const int n = 100000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += rng.next_unit();
    REQUIRE(std::abs(sum / n - 0.5) < 0.01);
}

TEST_CASE("uniform_int with n = 1 always yields zero and advances the state") {
    Pcg32 rng(5, 5);
    Pcg32 untouched(5, 5);
    for (int i = 0; i < 16; ++i) REQUIRE(rng.uniform_int(1) == 0);
    // the sixteen draws consumed sixteen outputs
    for (int i = 0; i < 16; ++i) untouched.next_u32();
    REQUIRE(rng.next_u32() == untouched.next_u32());
}

TEST_CASE("uniform_int frequencies stay within five sigma of uniform") {
    Pcg32 rng(99, 0);
    const int n = 100000;
    const int k = 12;
    std::vector<int> counts(k, 0);
    for (int i = 0; i < n; ++i) ++counts[rng.uniform_int(k)];
    const double p = 1.0 / k;
    const double tolerance = 5.0 * std::sqrt(p * (1.0 - p) / n);
    for (const int c : counts) {
        REQUIRE(std::abs(static_cast<double>(c) / n - p) < tolerance);
    }
}

TEST_CASE("uniform_int is deterministic and in range") {
    Pcg32 a(11, 0);
    Pcg32 b(11, 0);
    for (int i = 0; i < 2000; ++i) {
        const auto x = a.uniform_int(100);
        REQUIRE(x == b.uniform_int(100));
        REQUIRE(x < 100u);
    }
    REQUIRE_THROWS_AS(a.uniform_int(0), std::invalid_argument);
}

TEST_CASE("normal draws match the requested moments") {
    Pcg32 rng(31, 0);
    const int n = 200000;
    const double mean = 7.0;
    const double sd = 1.0;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal(mean, sd);
        sum += x;
        sum_sq += x * x;
    }
    const double m = sum / n;
    const double v = sum_sq / n - m * m;
    REQUIRE(std::abs(m - mean) < 5.0 * sd / std::sqrt(static_cast<double>(n)));
    REQUIRE(std::abs(std::sqrt(v) - sd) < 5.0 * sd / std::sqrt(2.0 * n));
}

TEST_CASE("poisson draws match the rate") {
    Pcg32 rng(17, 0);
    const int n = 100000;
    const double rate = 3.0;
    double sum = 0.0;
    std::size_t zeros = 0;
    for (int i = 0; i < n; ++i) {
        const auto k = rng.poisson(rate);
        sum += k;
        if (k == 0) ++zeros;
    }
    REQUIRE(std::abs(sum / n - rate) < 5.0 * std::sqrt(rate / n));
    const double p0 = std::exp(-rate);
    REQUIRE(std::abs(static_cast<double>(zeros) / n - p0) <
            5.0 * std::sqrt(p0 * (1.0 - p0) / n));
    REQUIRE_THROWS_AS(rng.poisson(0.0), std::invalid_argument);
}

TEST_CASE("shuffle preserves the multiset and is seed-deterministic") {
    std::vector<int> values(257);
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = static_cast<int>(i % 13);
    auto a = values;
    auto b = values;
    Pcg32 rng_a(3, 9);
    Pcg32 rng_b(3, 9);
    zodiaclab::shuffle(a, rng_a);
    zodiaclab::shuffle(b, rng_b);
    REQUIRE(a == b);

    auto sorted_a = a;
    auto sorted_orig = values;
    std::sort(sorted_a.begin(), sorted_a.end());
    std::sort(sorted_orig.begin(), sorted_orig.end());
    REQUIRE(sorted_a == sorted_orig);
    REQUIRE(a != values);  // 257 elements: an identity shuffle would be astonishing

    std::vector<int> single = {42};
    Pcg32 rng_c(1, 1);
    zodiaclab::shuffle(single, rng_c);
    REQUIRE(single == std::vector<int>{42});
}
