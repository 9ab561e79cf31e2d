#include "dhtrng/noise.hpp"

#include <algorithm>
#include <cmath>

#include "dhtrng/errors.hpp"
#include "dhtrng/special.hpp"

namespace dhtrng {

void NoiseParams::validate() const {
    if (!(delay_mean > 0.0)) throw ConfigError("noise.delay_mean must be > 0");
    if (!(jitter_sigma >= 0.0)) throw ConfigError("noise.jitter_sigma must be >= 0");
    if (!(meta_sigma >= 0.0)) throw ConfigError("noise.meta_sigma must be >= 0");
    if (!(hold_bias >= 0.0 && hold_bias <= 1.0)) {
        throw ConfigError("noise.hold_bias must be in [0,1]");
    }
}

void PvtCondition::validate() const {
    if (!(temperature_c >= -55.0 && temperature_c <= 125.0)) {
        throw ConfigError("pvt.temperature_c must be in [-55, 125]");
    }
    if (!(voltage_v > 0.0)) throw ConfigError("pvt.voltage_v must be > 0");
}

double q_function(double x) {
    if (!std::isfinite(x)) throw ConfigError("q_function: input must be finite");
    return 0.5 * special::erfc(x * 0.7071067811865475244);
}

double sample_gate_delay(const NoiseParams& params, NoiseRng& rng) {
    const double floor = params.delay_mean / 100.0;
    if (params.jitter_sigma == 0.0) return params.delay_mean;
    const double d = params.delay_mean + params.jitter_sigma * rng.next_gaussian();
    return std::max(floor, d);
}

int metastable_resolve(double delta_seconds, EdgeDirection direction, const NoiseParams& params,
                       NoiseRng& rng) {
    const double sigma = params.meta_sigma;
    const bool rising = direction == EdgeDirection::rising;
    if (sigma == 0.0 || std::fabs(delta_seconds) > 6.0 * sigma) {
        // Settled: a transition after the edge (delta >= 0) means the
        // pre-transition level was sampled.
        const int pre = rising ? 0 : 1;
        return delta_seconds >= 0.0 ? pre : 1 - pre;
    }
    const double q = q_function(delta_seconds / sigma);
    const double p_one = rising ? q : 1.0 - q;
    return rng.next_unit() < p_one ? 1 : 0;
}

NoiseParams apply_pvt(const NoiseParams& params, const PvtCondition& cond,
                      const PvtCoefficients& coeff) {
    params.validate();
    cond.validate();
    const double dt = cond.temperature_c - coeff.ref_temperature_c;
    const double dv = cond.voltage_v - coeff.ref_voltage_v;
    const double delay_scale = std::max(0.01, 1.0 + coeff.temp_on_delay * dt + coeff.volt_on_delay * dv);
    const double jitter_scale = std::max(0.01, 1.0 + coeff.temp_on_jitter * dt);
    NoiseParams out = params;
    out.delay_mean = params.delay_mean * delay_scale;
    out.jitter_sigma = params.jitter_sigma * jitter_scale;
    return out;
}

}  // namespace dhtrng
