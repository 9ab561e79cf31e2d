#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "dhtrng/analytic.hpp"
#include "dhtrng/errors.hpp"

using namespace dhtrng;

namespace {

// Exhaustive oracle: P(XOR of independent bits = 1) over all 2^n outcomes.
double xor_enumeration(const std::vector<double>& mus) {
    const size_t n = mus.size();
    double p_one = 0.0;
    for (uint64_t mask = 0; mask < (1ULL << n); ++mask) {
        double p = 1.0;
        int parity = 0;
        for (size_t i = 0; i < n; ++i) {
            if (mask & (1ULL << i)) {
                p *= mus[i];
                parity ^= 1;
            } else {
                p *= 1.0 - mus[i];
            }
        }
        if (parity) p_one += p;
    }
    return p_one;
}

}  // namespace

TEST_CASE("xor2_expectation basics") {
    CHECK(analytic::xor2_expectation(0.5, 0.9) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(analytic::xor2_expectation(0.6, 0.7) == doctest::Approx(0.46).epsilon(1e-15));
    CHECK(analytic::xor2_expectation(1.0, 1.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK_THROWS_AS(analytic::xor2_expectation(-0.1, 0.5), ConfigError);
    CHECK_THROWS_AS(analytic::xor2_expectation(0.1, 1.5), ConfigError);
}

TEST_CASE("xor_n_expectation equals exhaustive enumeration up to n=12") {
    std::mt19937_64 gen(42);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int n = 1; n <= 12; ++n) {
        for (int rep = 0; rep < 8; ++rep) {
            std::vector<double> mus;
            for (int i = 0; i < n; ++i) mus.push_back(uni(gen));
            const double expected = xor_enumeration(mus);
            const double got = analytic::xor_n_expectation(mus);
            CHECK(std::fabs(got - expected) < 1e-12);
        }
    }
}

TEST_CASE("xor_n_expectation spec values") {
    std::vector<double> half{0.5, 0.5, 0.5};
    CHECK(analytic::xor_n_expectation(half) == doctest::Approx(0.5).epsilon(1e-15));
    std::vector<double> two{0.6, 0.6};
    CHECK(analytic::xor_n_expectation(two) == doctest::Approx(0.48).epsilon(1e-14));
    std::vector<double> ten(10, 0.6);
    CHECK(analytic::xor_n_expectation(ten) ==
          doctest::Approx((1.0 - std::pow(-0.2, 10)) / 2.0).epsilon(1e-14));
    CHECK(analytic::xor_n_expectation(ten) == doctest::Approx(0.4999999488).epsilon(1e-12));
    CHECK_THROWS_AS(analytic::xor_n_expectation(std::vector<double>{}), ConfigError);
}

TEST_CASE("appending a biased bit moves the expectation strictly toward 1/2") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> uni(0.01, 0.99);
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<double> mus;
        const int n = 1 + static_cast<int>(gen() % 6);
        for (int i = 0; i < n; ++i) mus.push_back(uni(gen));
        const double before = analytic::xor_n_expectation(mus);
        if (std::fabs(before - 0.5) < 1e-12) continue;
        double extra = uni(gen);
        if (std::fabs(extra - 0.5) < 1e-3) extra += 0.01;
        mus.push_back(extra);
        const double after = analytic::xor_n_expectation(mus);
        CHECK(std::fabs(after - 0.5) < std::fabs(before - 0.5));
    }
}

TEST_CASE("randomness_coverage worked values") {
    analytic::CoverageParams p;
    p.jitter_probability = 0.5;
    p.jitter_width_s = {1e-11};
    p.ring_period_s = {1e-9};
    p.hold_sample_probability = 0.1;
    p.edge_width_s = 1e-11;
    p.frequency_hz = {5e8};
    CHECK(analytic::randomness_coverage(p) == doctest::Approx(0.1189).epsilon(1e-12));

    // tau = 1 makes the metastability factor vanish (edge term must stay in
    // domain, so it drops to zero here).
    p.hold_sample_probability = 1.0;
    p.edge_width_s = 0.0;
    CHECK(analytic::randomness_coverage(p) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("randomness_coverage is non-decreasing when appending a factor") {
    analytic::CoverageParams p;
    p.jitter_probability = 0.4;
    p.jitter_width_s = {1e-11, 2e-11};
    p.ring_period_s = {1e-9, 8e-10};
    p.hold_sample_probability = 0.05;
    p.edge_width_s = 5e-12;
    p.frequency_hz = {5e8, 7e8};
    const double before = analytic::randomness_coverage(p);
    p.jitter_width_s.push_back(1.5e-11);
    p.ring_period_s.push_back(9e-10);
    p.frequency_hz.push_back(6e8);
    const double after = analytic::randomness_coverage(p);
    CHECK(after >= before);
    CHECK(after <= 1.0);
    CHECK(before >= 0.0);
}

TEST_CASE("randomness_coverage domain errors") {
    analytic::CoverageParams p;
    p.jitter_width_s = {1e-9};   // 2*a*w/T = 1.0 at a=0.5 -> still valid edge
    p.ring_period_s = {1e-9};
    p.frequency_hz = {5e8};
    CHECK_NOTHROW(analytic::randomness_coverage(p));
    p.jitter_width_s = {2e-9};  // term 2.0 -> outside [0,1]
    CHECK_THROWS_AS(analytic::randomness_coverage(p), ConfigError);
    p.jitter_width_s = {1e-11, 1e-11};  // mismatched lengths
    CHECK_THROWS_AS(analytic::randomness_coverage(p), ConfigError);
}

TEST_CASE("phase_noise_floor value and homogeneity") {
    analytic::PhaseNoiseParams p;
    p.ring_order = 3;
    p.proportionality = 1;
    p.boltzmann = 1.38e-23;
    p.temperature_k = 300;
    p.power_w = 1e-3;
    p.vdd_v = 1;
    p.characteristic_v = 1;
    p.current_a = 1e-3;
    p.resistance_ohm = 1e3;
    p.ring_freq_hz = 1e9;
    p.offset_freq_hz = 1e6;
    // Independent recomputation: 8*3/3 * (1.38e-23*300/1e-3) * (1+1) * (1e3)^2.
    const double expected = 8.0 * (1.38e-23 * 300.0 / 1e-3) * 2.0 * 1e6;
    CHECK(analytic::phase_noise_floor(p) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(analytic::phase_noise_floor(p) == doctest::Approx(6.624e-11).epsilon(1e-10));

    auto doubled = p;
    doubled.ring_order *= 2;
    CHECK(analytic::phase_noise_floor(doubled) ==
          doctest::Approx(2.0 * analytic::phase_noise_floor(p)).epsilon(1e-12));
    auto faster = p;
    faster.ring_freq_hz *= 2;
    CHECK(analytic::phase_noise_floor(faster) ==
          doctest::Approx(4.0 * analytic::phase_noise_floor(p)).epsilon(1e-12));

    auto bad = p;
    bad.power_w = 0.0;
    CHECK_THROWS_AS(analytic::phase_noise_floor(bad), ConfigError);
}

TEST_CASE("bias_percent") {
    CHECK(analytic::bias_percent(500000, 500000) == 0.0);
    CHECK(analytic::bias_percent(500100, 499900) == doctest::Approx(0.02).epsilon(1e-12));
    CHECK(analytic::bias_percent(1, 0) == 100.0);
    CHECK_THROWS_AS(analytic::bias_percent(0, 0), ConfigError);
}
