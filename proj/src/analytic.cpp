#include "dhtrng/analytic.hpp"

#include <cmath>

#include "dhtrng/errors.hpp"

namespace dhtrng::analytic {

double phase_noise_floor(const PhaseNoiseParams& p) {
    const double values[] = {p.ring_order,  p.ring_freq_hz,    p.offset_freq_hz, p.power_w,
                             p.boltzmann,   p.temperature_k,   p.proportionality, p.vdd_v,
                             p.characteristic_v, p.current_a,  p.resistance_ohm};
    for (double v : values) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw ConfigError("phase_noise_floor: all parameters must be strictly positive");
        }
    }
    const double order_term = 8.0 * p.ring_order / (3.0 * p.proportionality);
    const double thermal_term = p.boltzmann * p.temperature_k / p.power_w;
    const double supply_term =
        p.vdd_v / p.characteristic_v + p.vdd_v / (p.current_a * p.resistance_ohm);
    const double freq_ratio = p.ring_freq_hz / p.offset_freq_hz;
    return order_term * thermal_term * supply_term * freq_ratio * freq_ratio;
}

double xor2_expectation(double mu1, double mu2) {
    const double mus[] = {mu1, mu2};
    return xor_n_expectation(mus);
}

double xor_n_expectation(std::span<const double> mus) {
    if (mus.empty()) throw ConfigError("xor_n_expectation: empty probability list");
    double prod = 1.0;
    for (double mu : mus) {
        if (!(mu >= 0.0 && mu <= 1.0)) {
            throw ConfigError("xor_n_expectation: probabilities must be in [0,1]");
        }
        prod *= 1.0 - 2.0 * mu;
    }
    return (1.0 - prod) / 2.0;
}

double randomness_coverage(const CoverageParams& p) {
    const size_t n = p.xor_count();
    if (n == 0) throw ConfigError("randomness_coverage: empty factor lists");
    if (p.ring_period_s.size() != n || p.frequency_hz.size() != n) {
        throw ConfigError("randomness_coverage: factor lists must have equal length");
    }
    if (!(p.jitter_probability >= 0.0 && p.jitter_probability <= 1.0)) {
        throw ConfigError("randomness_coverage: jitter probability must be in [0,1]");
    }
    if (!(p.hold_sample_probability >= 0.0 && p.hold_sample_probability <= 1.0)) {
        throw ConfigError("randomness_coverage: hold sample probability must be in [0,1]");
    }
    if (!(p.edge_width_s >= 0.0)) {
        throw ConfigError("randomness_coverage: edge width must be >= 0");
    }
    double prod = 1.0;
    for (size_t i = 0; i < n; ++i) {
        if (!(p.ring_period_s[i] > 0.0) || !(p.frequency_hz[i] > 0.0) ||
            !(p.jitter_width_s[i] >= 0.0)) {
            throw ConfigError("randomness_coverage: periods and frequencies must be positive");
        }
        const double jitter_term = 2.0 * p.jitter_probability * p.jitter_width_s[i] / p.ring_period_s[i];
        const double meta_term = p.hold_sample_probability + 2.0 * p.edge_width_s * p.frequency_hz[i];
        if (!(jitter_term >= 0.0 && jitter_term <= 1.0) || !(meta_term >= 0.0 && meta_term <= 1.0)) {
            throw ConfigError("randomness_coverage: per-factor terms must land in [0,1]");
        }
        prod *= (1.0 - jitter_term) * (1.0 - meta_term);
    }
    return 1.0 - prod;
}

double bias_percent(uint64_t n_ones, uint64_t n_zeros) {
    if (n_ones + n_zeros == 0) throw ConfigError("bias_percent: empty sample");
    const double n1 = static_cast<double>(n_ones);
    const double n2 = static_cast<double>(n_zeros);
    return std::fabs(n1 - n2) / (n1 + n2) * 100.0;
}

}  // namespace dhtrng::analytic
