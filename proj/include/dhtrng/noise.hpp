#pragma once

#include <cstdint>

#include "dhtrng/rng.hpp"

namespace dhtrng {

// Stochastic physical model every circuit element draws from.
struct NoiseParams {
    double delay_mean = 1.0e-10;    // seconds per gate
    double jitter_sigma = 8.0e-12;  // std-dev of per-transition Gaussian delay perturbation
    double meta_sigma = 1.2e-11;    // sigma of the metastability window (seconds)
    double hold_bias = 0.5;         // resolution bias for subthreshold hold-region latching

    void validate() const;  // throws ConfigError
};

struct PvtCondition {
    double temperature_c = 20.0;
    double voltage_v = 1.0;

    void validate() const;  // throws ConfigError
};

struct NoiseRngSeed {
    uint64_t seed = 1;
};

// Linear first-order PVT scaling relative to (20 C, 1.0 V). The scale
// factors are clamped at 1% so extreme inputs cannot drive delays negative.
struct PvtCoefficients {
    double temp_on_delay = 0.002;    // per degree C
    double temp_on_jitter = 0.003;   // per degree C
    double volt_on_delay = -1.5;     // per volt
    double ref_temperature_c = 20.0;
    double ref_voltage_v = 1.0;
};

// Gaussian upper-tail probability Q(x) = integral_x^inf phi(u) du.
// Rejects non-finite input.
double q_function(double x);

// One gate traversal time: delay_mean plus a Gaussian jitter draw, clamped
// below at delay_mean/100 so delays stay causal.
double sample_gate_delay(const NoiseParams& params, NoiseRng& rng);

enum class EdgeDirection { rising, falling };

// Flip-flop resolution when sampling near a data transition. delta is the
// signed time from the sampling edge to the nearest transition (positive =
// transition after the edge). Inside the +-6 sigma window the outcome is a
// Bernoulli draw with P(1) = Q(delta/sigma) for a rising transition and
// 1 - Q(delta/sigma) for a falling one; outside it the settled logic level
// is returned. meta_sigma = 0 degenerates to a deterministic threshold at
// delta = 0.
int metastable_resolve(double delta_seconds, EdgeDirection direction, const NoiseParams& params,
                       NoiseRng& rng);

// Scales delay_mean and jitter_sigma for an operating condition. The
// nominal condition is the identity.
NoiseParams apply_pvt(const NoiseParams& params, const PvtCondition& cond,
                      const PvtCoefficients& coeff = PvtCoefficients{});

}  // namespace dhtrng
