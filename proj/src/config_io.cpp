#include "dhtrng/config_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "dhtrng/errors.hpp"

namespace dhtrng {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: bad numeric value for " + key + ": '" + value + "'");
    }
}

int64_t parse_int(const std::string& key, const std::string& value) {
    int64_t v = 0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
    if (res.ec != std::errc{} || res.ptr != value.data() + value.size()) {
        throw ConfigError("config: bad integer value for " + key + ": '" + value + "'");
    }
    return v;
}

uint64_t parse_u64(const std::string& key, const std::string& value) {
    uint64_t v = 0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
    if (res.ec != std::errc{} || res.ptr != value.data() + value.size()) {
        throw ConfigError("config: bad unsigned value for " + key + ": '" + value + "'");
    }
    return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
    if (value == "false" || value == "0" || value == "no" || value == "off") return false;
    throw ConfigError("config: bad boolean value for " + key + ": '" + value + "'");
}

}  // namespace

void ExperimentConfig::validate() const {
    circuit.validate();
    if (streams < 1) throw ConfigError("experiment.streams must be >= 1");
    if (bits_per_stream < 1) throw ConfigError("experiment.bits_per_stream must be >= 1");
    if (report_format != "json" && report_format != "csv") {
        throw ConfigError("experiment.report_format must be json or csv");
    }
    static const char* known[] = {"ais", "nist", "entropy", "acf", "bias", "all"};
    for (const std::string& t : tests) {
        bool ok = false;
        for (const char* k : known) ok = ok || t == k;
        if (!ok) throw ConfigError("experiment.tests: unknown battery '" + t + "'");
    }
}

void apply_config_entry(ExperimentConfig& config, const std::string& key,
                        const std::string& value) {
    CircuitConfig& c = config.circuit;
    if (key == "circuit.coupling_sets") c.coupling_sets = static_cast<int>(parse_int(key, value));
    else if (key == "circuit.edge_rings_per_set") c.edge_rings_per_set = static_cast<int>(parse_int(key, value));
    else if (key == "circuit.central_rings_per_set") c.central_rings_per_set = static_cast<int>(parse_int(key, value));
    else if (key == "circuit.central_ring_xor_stages") c.central_ring_xor_stages = static_cast<int>(parse_int(key, value));
    else if (key == "circuit.entropy_units_per_set") c.entropy_units_per_set = static_cast<int>(parse_int(key, value));
    else if (key == "circuit.ro1_stages") c.ro1_stages = static_cast<int>(parse_int(key, value));
    else if (key == "circuit.edge_ring_stages") c.edge_ring_stages = static_cast<int>(parse_int(key, value));
    else if (key == "circuit.sample_clock_hz") c.sample_clock_hz = parse_double(key, value);
    else if (key == "circuit.feedback_enabled") c.feedback_enabled = parse_bool(key, value);
    else if (key == "circuit.coupling_enabled") c.coupling_enabled = parse_bool(key, value);
    else if (key == "circuit.process_spread") c.process_spread = parse_double(key, value);
    else if (key == "circuit.warmup_edges") c.warmup_edges = static_cast<int>(parse_int(key, value));
    else if (key == "circuit.seed" || key == "seed") c.seed.seed = parse_u64(key, value);
    else if (key == "noise.delay_mean") c.noise.delay_mean = parse_double(key, value);
    else if (key == "noise.jitter_sigma") c.noise.jitter_sigma = parse_double(key, value);
    else if (key == "noise.meta_sigma") c.noise.meta_sigma = parse_double(key, value);
    else if (key == "noise.hold_bias") c.noise.hold_bias = parse_double(key, value);
    else if (key == "pvt.temperature_c") c.pvt.temperature_c = parse_double(key, value);
    else if (key == "pvt.voltage_v") c.pvt.voltage_v = parse_double(key, value);
    else if (key == "experiment.streams") config.streams = static_cast<int>(parse_int(key, value));
    else if (key == "experiment.bits_per_stream") config.bits_per_stream = parse_u64(key, value);
    else if (key == "experiment.output_dir") config.output_dir = value;
    else if (key == "experiment.report_format") config.report_format = value;
    else if (key == "experiment.tests") {
        config.tests.clear();
        std::stringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (!item.empty()) config.tests.push_back(item);
        }
    } else {
        throw ConfigError("config: unknown key '" + key + "'");
    }
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    ExperimentConfig config;
    std::string line;
    int line_no = 0;
    while (std::getline(f, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config: line " + std::to_string(line_no) + " is not key=value");
        }
        apply_config_entry(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    config.validate();
    return config;
}

std::string circuit_config_to_text(const CircuitConfig& c) {
    std::ostringstream out;
    out << "circuit.coupling_sets=" << c.coupling_sets << '\n'
        << "circuit.edge_rings_per_set=" << c.edge_rings_per_set << '\n'
        << "circuit.central_rings_per_set=" << c.central_rings_per_set << '\n'
        << "circuit.central_ring_xor_stages=" << c.central_ring_xor_stages << '\n'
        << "circuit.entropy_units_per_set=" << c.entropy_units_per_set << '\n'
        << "circuit.ro1_stages=" << c.ro1_stages << '\n'
        << "circuit.edge_ring_stages=" << c.edge_ring_stages << '\n'
        << "circuit.sample_clock_hz=" << c.sample_clock_hz << '\n'
        << "circuit.feedback_enabled=" << (c.feedback_enabled ? "true" : "false") << '\n'
        << "circuit.coupling_enabled=" << (c.coupling_enabled ? "true" : "false") << '\n'
        << "circuit.process_spread=" << c.process_spread << '\n'
        << "circuit.warmup_edges=" << c.warmup_edges << '\n'
        << "circuit.seed=" << c.seed.seed << '\n'
        << "noise.delay_mean=" << c.noise.delay_mean << '\n'
        << "noise.jitter_sigma=" << c.noise.jitter_sigma << '\n'
        << "noise.meta_sigma=" << c.noise.meta_sigma << '\n'
        << "noise.hold_bias=" << c.noise.hold_bias << '\n'
        << "pvt.temperature_c=" << c.pvt.temperature_c << '\n'
        << "pvt.voltage_v=" << c.pvt.voltage_v << '\n';
    return out.str();
}

}  // namespace dhtrng
