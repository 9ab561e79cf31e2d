#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace dhtrng::analytic {

// Device constants for the ring-order phase-noise relation. All SI units.
struct PhaseNoiseParams {
    double ring_order = 3.0;        // N
    double ring_freq_hz = 1.0e9;    // f0
    double offset_freq_hz = 1.0e6;  // delta f
    double power_w = 1.0e-3;        // P
    double boltzmann = 1.380649e-23;  // K
    double temperature_k = 300.0;   // T
    double proportionality = 1.0;   // eta
    double vdd_v = 1.0;
    double characteristic_v = 1.0;  // V
    double current_a = 1.0e-3;      // I
    double resistance_ohm = 1.0e3;  // R
};

// Phase-noise floor (8N/3eta)*(KT/P)*(Vdd/V + Vdd/(IR))*(f0/df)^2.
double phase_noise_floor(const PhaseNoiseParams& p);

// Expected value of the XOR of two independent bits with means mu1, mu2:
// 1/2 - 2(mu1 - 1/2)(mu2 - 1/2).
double xor2_expectation(double mu1, double mu2);

// Exact parity-one probability for n independent bits (piling-up form):
// (1 - prod(1 - 2 mu_i)) / 2. Reduces to xor2_expectation at n = 2. The
// complementary form (1 + prod(1 - 2 mu_i)) / 2 gives P(parity = 0); some
// texts print that complement with a n/2 exponent over the pairwise
// product, which agrees only for equal mu pairs.
double xor_n_expectation(std::span<const double> mus);

// Per-edge randomness-coverage factors of the hybrid entropy unit.
struct CoverageParams {
    double jitter_probability = 0.5;        // a
    std::vector<double> jitter_width_s;     // w_i
    std::vector<double> ring_period_s;      // T_ro_i
    double hold_sample_probability = 0.1;   // tau
    double edge_width_s = 1.0e-11;          // epsilon
    std::vector<double> frequency_hz;       // f_i

    size_t xor_count() const { return jitter_width_s.size(); }
};

// 1 - prod_i (1 - 2 a w_i / T_ro_i)(1 - (tau + 2 eps f_i)).
double randomness_coverage(const CoverageParams& p);

// |N1 - N2| / (N1 + N2) * 100.
double bias_percent(uint64_t n_ones, uint64_t n_zeros);

}  // namespace dhtrng::analytic
