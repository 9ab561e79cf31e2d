#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dhtrng/circuit.hpp"
#include "dhtrng/stats.hpp"

namespace dhtrng {

enum class SweepAxis { temperature, voltage, xor_count, ro1_stages };

SweepAxis sweep_axis_from_string(const std::string& name);  // throws ConfigError
std::string to_string(SweepAxis axis);

struct SweepSpec {
    SweepAxis axis = SweepAxis::temperature;
    std::vector<double> values;  // strictly monotone, non-empty
    int repeats = 1;

    void validate() const;  // throws ConfigError
};

struct SweepRow {
    double axis_value = 0.0;
    int repeat = 0;
    uint64_t seed = 0;
    double mcv_h_min = 0.0;
    double bias_percent = 0.0;
    double max_abs_acf = 0.0;
};

// Maps one axis value onto a concrete circuit. The temperature/voltage axes
// reuse the base topology; xor_count builds a standalone bank of that many
// XORed sampled rings and ro1_stages a bank of plain rings of that order,
// both with coupling and feedback off the way the unit-level experiments
// are run.
CircuitConfig sweep_point_config(const CircuitConfig& base, SweepAxis axis, double value);

// One row per (value, repeat), ordered by value then repeat; repeat i runs
// with seed base_seed + i. jobs > 1 runs points on that many threads; the
// output order is deterministic regardless.
std::vector<SweepRow> run_sweep(const CircuitConfig& base, const SweepSpec& spec,
                                uint64_t bits_per_point, int jobs = 1);

}  // namespace dhtrng
