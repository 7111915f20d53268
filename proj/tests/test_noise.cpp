/// Piecewise-constant uniform noise paths and the counter-based generator behind them.
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <vector>

#include "snv/common.hpp"
#include "snv/noise.hpp"
#include "snv/philox.hpp"

using namespace snv;

TEST_CASE("zero amplitude produces exact zeros") {
    NoiseConfig cfg{0.0, 0.1, 42u, 3u};
    NoisePath path = sample_noise_path(cfg, 1.0);
    REQUIRE(path.r_t() == 10);
    for (double v : path.values) CHECK(v == 0.0);
    CHECK(noise_at(path, 0.55) == 0.0);
    CHECK(noise_total_variation(path) == 0.0);
}

TEST_CASE("mesh layout and the quiet first cell") {
    NoiseConfig cfg{1.0, 0.25, 7u, 0u};
    NoisePath path = sample_noise_path(cfg, 1.0);
    REQUIRE(path.r_t() == 4);
    // [0, 0.25) carries no noise; [0.25, 0.5) carries the first drawn value.
    CHECK(noise_at(path, 0.0) == 0.0);
    CHECK(noise_at(path, 0.1) == 0.0);
    CHECK(noise_at(path, 0.3) == path.values[0]);
    CHECK(noise_at(path, 0.99) == path.values[2]);
    CHECK(noise_at(path, 1.0) == path.values[3]);
    for (double v : path.values) {
        CHECK(v >= -1.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("lookup is right-continuous at mesh points") {
    NoiseConfig cfg{0.5, 0.2, 11u, 5u};
    NoisePath path = sample_noise_path(cfg, 1.0);
    for (int k = 1; k < path.r_t(); ++k) {
        const double t = k * path.delta_r;
        CHECK(noise_at(path, t) == path.values[static_cast<std::size_t>(k - 1)]);
        // Safely below the mesh point (outside the index snap zone): previous cell.
        CHECK(noise_at(path, t - 1e-6) ==
              (k == 1 ? 0.0 : path.values[static_cast<std::size_t>(k - 2)]));
    }
    // The horizon itself is still a valid lookup (last cell extends to it).
    CHECK(noise_at(path, 1.0) == path.values.back());
    CHECK_THROWS_AS(noise_at(path, 1.01), std::domain_error);
    CHECK_THROWS_AS(noise_at(path, -0.01), std::domain_error);
}

TEST_CASE("misuse is rejected with its own messages") {
    CHECK_THROWS_WITH(sample_noise_path({0.5, 0.0, 0u, 0u}, 1.0),
                      "noise mesh must be resolved before sampling");
    CHECK_THROWS_WITH(sample_noise_path({0.5, 0.1, 0u, 0u}, 0.0),
                      "noise horizon must be positive");
    CHECK_THROWS_WITH(sample_noise_path({-0.25, 0.1, 0u, 0u}, 1.0),
                      "noise.tau must be non-negative");
}

TEST_CASE("identical configuration reproduces bit-identical paths") {
    NoiseConfig cfg{0.7, 0.01, 123456789u, 17u};
    NoisePath a = sample_noise_path(cfg, 2.0);
    NoisePath b = sample_noise_path(cfg, 2.0);
    REQUIRE(a.values.size() == b.values.size());
    for (std::size_t i = 0; i < a.values.size(); ++i) CHECK(a.values[i] == b.values[i]);

    // A longer horizon extends the same stream without disturbing the prefix.
    NoisePath c = sample_noise_path(cfg, 3.0);
    for (std::size_t i = 0; i < a.values.size(); ++i) CHECK(c.values[i] == a.values[i]);
}

TEST_CASE("distinct seeds or streams decorrelate") {
    NoiseConfig cfg{0.7, 0.01, 1u, 0u};
    NoisePath base = sample_noise_path(cfg, 1.0);
    cfg.realization_index = 1;
    NoisePath other_stream = sample_noise_path(cfg, 1.0);
    cfg.realization_index = 0;
    cfg.master_seed = 2;
    NoisePath other_seed = sample_noise_path(cfg, 1.0);
    int same_stream = 0, same_seed = 0;
    for (int i = 0; i < base.r_t(); ++i) {
        same_stream += base.values[static_cast<std::size_t>(i)] ==
                       other_stream.values[static_cast<std::size_t>(i)];
        same_seed += base.values[static_cast<std::size_t>(i)] ==
                     other_seed.values[static_cast<std::size_t>(i)];
    }
    CHECK(same_stream == 0);
    CHECK(same_seed == 0);
}

TEST_CASE("streams never collide across a realization sweep") {
    // 10^4 realizations, a few draws each: every 53-bit output must be unique.
    std::set<double> seen;
    std::size_t total = 0;
    for (std::uint64_t r = 0; r < 10000; ++r)
        for (std::uint64_t k = 1; k <= 4; ++k) {
            seen.insert(uniform01(2026u, r, k));
            ++total;
        }
    CHECK(seen.size() == total);
}

TEST_CASE("pooled draws match the uniform law") {
    const double tau = 0.8;
    NoiseConfig cfg{tau, 0.001, 99u, 0u};
    double acc = 0.0, acc2 = 0.0;
    std::size_t n = 0;
    for (std::uint64_t r = 0; r < 1000; ++r) {
        cfg.realization_index = r;
        NoisePath p = sample_noise_path(cfg, 1.0);
        for (double v : p.values) {
            acc += v;
            acc2 += v * v;
            ++n;
        }
    }
    REQUIRE(n == 1000u * 1000u);
    const double mean = acc / static_cast<double>(n);
    const double var = acc2 / static_cast<double>(n) - mean * mean;
    const double sd = tau / std::sqrt(3.0);
    // 4 standard errors for the mean, 1% relative for the variance.
    CHECK(std::abs(mean) < 4.0 * sd / 1000.0);
    CHECK(std::abs(var - tau * tau / 3.0) < 0.01 * tau * tau / 3.0);
}

TEST_CASE("total variation respects the jump-count bound") {
    NoiseConfig cfg{0.6, 0.05, 31u, 2u};
    NoisePath path = sample_noise_path(cfg, 1.0);
    double tv = 0.0, prev = 0.0;
    for (double v : path.values) {
        tv += std::abs(v - prev);
        prev = v;
    }
    CHECK(noise_total_variation(path) == doctest::Approx(tv).epsilon(1e-15));
    CHECK(noise_total_variation(path) <= 2.0 * path.tau * path.r_t());
}

TEST_CASE("block function matches its published reference vector") {
    // Philox4x32-10 with key = counter = 0 and with all-ones inputs; the expected
    // words are the round-trip constants of the reference implementation.
    std::array<std::uint32_t, 4> zero = philox4x32(0u, 0u, 0u);
    CHECK(zero[0] == 0x6627e8d5u);
    CHECK(zero[1] == 0xe169c58du);
    CHECK(zero[2] == 0xbc57ac4cu);
    CHECK(zero[3] == 0x9b00dbd8u);
    std::array<std::uint32_t, 4> ones =
        philox4x32(0xffffffffffffffffull, 0xffffffffffffffffull, 0xffffffffffffffffull);
    CHECK(ones[0] == 0x408f276du);
    CHECK(ones[1] == 0x41c83b0eu);
    CHECK(ones[2] == 0xa20bc7c6u);
    CHECK(ones[3] == 0x6d5451fdu);
}

TEST_CASE("uniform01 stays inside [0, 1) and uses 53-bit resolution") {
    for (std::uint64_t d = 0; d < 2000; ++d) {
        const double u = uniform01(7u, 7u, d);
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        CHECK(u * 9007199254740992.0 == std::floor(u * 9007199254740992.0));
    }
}
