#pragma once

#include <string>
#include <vector>

#include "dhtrng/circuit.hpp"

namespace dhtrng {

// CLI-facing experiment description loaded from a flat key=value file with
// dotted sections (circuit.*, noise.*, pvt.*, experiment.*).
struct ExperimentConfig {
    CircuitConfig circuit;
    std::vector<std::string> tests;  // battery identifiers
    int streams = 1;
    uint64_t bits_per_stream = 1000000;
    std::string output_dir = ".";
    std::string report_format = "json";

    void validate() const;  // throws ConfigError
};

// Applies one key=value entry; unknown keys are rejected.
void apply_config_entry(ExperimentConfig& config, const std::string& key,
                        const std::string& value);

ExperimentConfig load_experiment_config(const std::string& path);

// Serializes the circuit section back to the flat format.
std::string circuit_config_to_text(const CircuitConfig& config);

}  // namespace dhtrng
