#include "dhtrng/experiment.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "dhtrng/analytic.hpp"
#include "dhtrng/errors.hpp"

namespace dhtrng {

SweepAxis sweep_axis_from_string(const std::string& name) {
    if (name == "temperature") return SweepAxis::temperature;
    if (name == "voltage") return SweepAxis::voltage;
    if (name == "xor_count") return SweepAxis::xor_count;
    if (name == "ro1_stages") return SweepAxis::ro1_stages;
    throw ConfigError("sweep: unknown axis '" + name + "'");
}

std::string to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::temperature: return "temperature";
        case SweepAxis::voltage: return "voltage";
        case SweepAxis::xor_count: return "xor_count";
        case SweepAxis::ro1_stages: return "ro1_stages";
    }
    return "?";
}

void SweepSpec::validate() const {
    if (values.empty()) throw ConfigError("sweep: values must be non-empty");
    for (size_t i = 1; i < values.size(); ++i) {
        if (!(values[i] > values[i - 1])) {
            throw ConfigError("sweep: values must be strictly increasing");
        }
    }
    if (repeats < 1) throw ConfigError("sweep: repeats must be >= 1");
    if (axis == SweepAxis::xor_count || axis == SweepAxis::ro1_stages) {
        for (double v : values) {
            if (v < 1.0 || v != std::floor(v)) {
                throw ConfigError("sweep: " + to_string(axis) + " values must be positive integers");
            }
        }
    }
}

CircuitConfig sweep_point_config(const CircuitConfig& base, SweepAxis axis, double value) {
    CircuitConfig cfg = base;
    switch (axis) {
        case SweepAxis::temperature:
            cfg.pvt.temperature_c = value;
            break;
        case SweepAxis::voltage:
            cfg.pvt.voltage_v = value;
            break;
        case SweepAxis::xor_count: {
            const int n = static_cast<int>(value);
            cfg.coupling_sets = 1;
            cfg.edge_rings_per_set = n;
            cfg.central_rings_per_set = 0;
            cfg.entropy_units_per_set = 0;
            cfg.coupling_enabled = false;
            cfg.feedback_enabled = false;
            break;
        }
        case SweepAxis::ro1_stages: {
            const int n = static_cast<int>(value);
            cfg.coupling_sets = 1;
            cfg.edge_rings_per_set = std::max(1, base.edge_rings_per_set);
            cfg.central_rings_per_set = 0;
            cfg.entropy_units_per_set = 0;
            cfg.edge_ring_stages = n;
            cfg.ro1_stages = n;
            cfg.coupling_enabled = false;
            cfg.feedback_enabled = false;
            break;
        }
    }
    cfg.validate();
    return cfg;
}

std::vector<SweepRow> run_sweep(const CircuitConfig& base, const SweepSpec& spec,
                                uint64_t bits_per_point, int jobs) {
    spec.validate();
    if (bits_per_point < 4096) {
        throw ConfigError("sweep: bits_per_point must be >= 4096 for the MCV estimate");
    }
    if (jobs < 1) throw ConfigError("sweep: jobs must be >= 1");

    struct Point {
        double value;
        int repeat;
    };
    std::vector<Point> points;
    for (double v : spec.values) {
        for (int r = 0; r < spec.repeats; ++r) points.push_back({v, r});
    }
    // Reject bad axis values before any simulation starts.
    for (double v : spec.values) sweep_point_config(base, spec.axis, v);

    std::vector<SweepRow> rows(points.size());
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= points.size()) return;
            CircuitConfig cfg = sweep_point_config(base, spec.axis, points[i].value);
            cfg.seed.seed = base.seed.seed + static_cast<uint64_t>(points[i].repeat);
            const BitStream bits = generate(cfg, bits_per_point);
            const uint64_t ones = bits.popcount();
            SweepRow row;
            row.axis_value = points[i].value;
            row.repeat = points[i].repeat;
            row.seed = cfg.seed.seed;
            row.mcv_h_min = stats::mcv_estimate(bits).h_min;
            row.bias_percent = analytic::bias_percent(ones, bits.size() - ones);
            row.max_abs_acf = stats::acf(bits, 100).max_abs();
            rows[i] = row;
        }
    };

    const int threads = std::min<int>(jobs, static_cast<int>(points.size()));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(threads));
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return rows;
}

}  // namespace dhtrng
