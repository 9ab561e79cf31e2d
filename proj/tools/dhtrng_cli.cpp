#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dhtrng/analytic.hpp"
#include "dhtrng/bitstream.hpp"
#include "dhtrng/circuit.hpp"
#include "dhtrng/config_io.hpp"
#include "dhtrng/errors.hpp"
#include "dhtrng/experiment.hpp"
#include "dhtrng/report.hpp"
#include "dhtrng/rng.hpp"
#include "dhtrng/stats.hpp"

namespace {

using namespace dhtrng;

// Exit-status contract: 0 all pass, 1 test failures, 2 usage/config error,
// 3 insufficient data, 4 simulation fault.
constexpr int kExitOk = 0;
constexpr int kExitTestFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInsufficient = 3;
constexpr int kExitSimFault = 4;

ExperimentConfig load_config_or_default(const std::string& path) {
    if (path.empty()) return ExperimentConfig{};
    return load_experiment_config(path);
}

// Seed precedence: --seed flag, then DHTRNG_SEED, then config file.
void apply_seed_overrides(CircuitConfig& cfg, bool seed_flag_set, uint64_t seed_flag) {
    if (const char* env = std::getenv("DHTRNG_SEED"); env && *env && !seed_flag_set) {
        try {
            cfg.seed.seed = std::stoull(env);
        } catch (const std::exception&) {
            throw ConfigError("DHTRNG_SEED is not a valid unsigned integer");
        }
    }
    if (seed_flag_set) cfg.seed.seed = seed_flag;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot open for writing: " + path);
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw ConfigError("write failed: " + path);
}

std::vector<double> parse_value_list(const std::string& csv) {
    std::vector<double> values;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        values.push_back(std::stod(item));
    }
    return values;
}

int cmd_generate(const std::string& config_path, uint64_t n_bits, const std::string& out_path,
                 const std::string& format, bool seed_set, uint64_t seed) {
    ExperimentConfig config = load_config_or_default(config_path);
    apply_seed_overrides(config.circuit, seed_set, seed);
    config.circuit.validate();
    if (n_bits < 1) throw ConfigError("--bits must be >= 1");

    const auto t0 = std::chrono::steady_clock::now();
    const BitStream bits = generate(config.circuit, n_bits);
    const auto t1 = std::chrono::steady_clock::now();

    if (format == "bin") {
        bits.write_bin(out_path);
    } else if (format == "txt") {
        bits.write_txt(out_path);
    } else {
        throw ConfigError("--format must be bin or txt");
    }
    const double secs = std::chrono::duration<double>(t1 - t0).count();
    std::cout << "wrote " << n_bits << " bits to " << out_path << "\n";
    std::cout << "simulation rate: " << std::fixed << std::setprecision(0)
              << (secs > 0 ? static_cast<double>(n_bits) / secs : 0.0) << " bits/s\n";
    return kExitOk;
}

struct BatterySelection {
    bool ais = false;
    bool nist = false;
    bool entropy = false;
    bool acf = false;
    bool bias = false;
};

BatterySelection parse_battery(const std::string& list) {
    BatterySelection sel;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        if (item == "all") {
            sel.ais = sel.nist = sel.entropy = sel.acf = sel.bias = true;
        } else if (item == "ais" || item == "aisT0..T5") {
            sel.ais = true;
        } else if (item == "nist" || item == "nist-subset") {
            sel.nist = true;
        } else if (item == "entropy") {
            sel.entropy = true;
        } else if (item == "acf") {
            sel.acf = true;
        } else if (item == "bias") {
            sel.bias = true;
        } else {
            throw ConfigError("unknown battery '" + item + "'");
        }
    }
    return sel;
}

int cmd_test(const std::string& config_path, const std::string& stream_path, std::string battery,
             std::string report_format, std::string out_path) {
    const ExperimentConfig config = load_config_or_default(config_path);
    if (battery.empty()) {
        // Fall back to the experiment.tests list from the config file.
        if (config.tests.empty()) {
            battery = "all";
        } else {
            for (const std::string& t : config.tests) {
                if (!battery.empty()) battery += ',';
                battery += t;
            }
        }
    }
    if (report_format.empty()) report_format = config.report_format;
    const BitStream stream = BitStream::read_file(stream_path);
    const BatterySelection sel = parse_battery(battery);
    report::TestBundle bundle;
    bundle.meta["stream"] = stream_path;
    bundle.meta["stream_bits"] = std::to_string(stream.size());
    bundle.meta["battery"] = battery;

    bool any_insufficient = false;
    auto run_test = [&](auto&& fn, const char* name) {
        try {
            bundle.tests.push_back(fn());
        } catch (const InsufficientData&) {
            stats::TestReport r;
            r.test_name = name;
            r.verdict = stats::Verdict::not_applicable;
            r.sample_bits = stream.size();
            r.note = "stream below the test's minimum length";
            bundle.tests.push_back(r);
            any_insufficient = true;
        }
    };

    if (sel.ais) {
        run_test([&] { return stats::disjointness_t0(stream); }, "ais31.T0.disjointness");
        run_test([&] { return stats::monobit_t1(stream); }, "ais31.T1.monobit");
        run_test([&] { return stats::poker_t2(stream); }, "ais31.T2.poker");
        run_test([&] { return stats::runs_t3(stream); }, "ais31.T3.runs");
        run_test([&] { return stats::longrun_t4(stream); }, "ais31.T4.longrun");
        run_test([&] { return stats::autocorr_t5(stream); }, "ais31.T5.autocorrelation");
    }
    if (sel.nist) {
        run_test([&] { return stats::nist_frequency(stream); }, "nist.frequency");
        run_test([&] { return stats::nist_block_frequency(stream); }, "nist.block_frequency");
        run_test([&] { return stats::nist_cusum(stream); }, "nist.cumulative_sums");
        run_test([&] { return stats::nist_runs(stream); }, "nist.runs");
        run_test([&] { return stats::nist_longest_run(stream); }, "nist.longest_run");
        run_test([&] { return stats::nist_serial(stream); }, "nist.serial");
        run_test([&] { return stats::nist_approx_entropy(stream); }, "nist.approximate_entropy");
    }
    if (sel.entropy) {
        auto run_estimate = [&](auto&& fn, const char* name) {
            try {
                bundle.estimates.push_back(fn());
            } catch (const InsufficientData&) {
                stats::TestReport r;
                r.test_name = name;
                r.verdict = stats::Verdict::not_applicable;
                r.sample_bits = stream.size();
                r.note = "stream below the estimator's minimum length";
                bundle.tests.push_back(r);
                any_insufficient = true;
            }
        };
        run_estimate([&] { return stats::mcv_estimate(stream); }, "entropy.mcv");
        run_estimate([&] { return stats::markov_estimate(stream); }, "entropy.markov");
        run_estimate([&] { return stats::collision_estimate(stream); }, "entropy.collision");
    }
    if (sel.acf) {
        try {
            const stats::AcfSeries series = stats::acf(stream, 100);
            bundle.acf_coefficients = series.coefficients;
            stats::TestReport r;
            r.test_name = "acf.max_abs";
            r.statistics = {series.max_abs()};
            r.bounds = stats::Interval{0.0, 0.3, false};
            r.verdict = series.degenerate ? stats::Verdict::fail
                        : (series.max_abs() < 0.3 ? stats::Verdict::pass : stats::Verdict::fail);
            r.sample_bits = stream.size();
            r.note = series.degenerate ? "degenerate: constant slice" : "lags 1..100";
            bundle.tests.push_back(r);
        } catch (const InsufficientData&) {
            stats::TestReport r;
            r.test_name = "acf.max_abs";
            r.verdict = stats::Verdict::not_applicable;
            r.sample_bits = stream.size();
            r.note = "stream below the test's minimum length";
            bundle.tests.push_back(r);
            any_insufficient = true;
        }
    }
    if (sel.bias) {
        const uint64_t ones = stream.popcount();
        const uint64_t zeros = stream.size() - ones;
        stats::TestReport r;
        r.test_name = "bias.percent";
        r.statistics = {analytic::bias_percent(ones, zeros)};
        // Aligned with the AIS-31 monobit bound: 346/20000 of imbalance.
        r.bounds = stats::Interval{0.0, 1.73, true};
        r.verdict = r.bounds->contains(r.statistics[0]) ? stats::Verdict::pass
                                                        : stats::Verdict::fail;
        r.sample_bits = stream.size();
        bundle.tests.push_back(r);
    }

    if (out_path.empty()) {
        out_path = stream_path + ".report." + report_format;
    }
    if (report_format == "json") {
        write_text_file(out_path, report::bundle_to_json(bundle));
    } else if (report_format == "csv") {
        write_text_file(out_path, report::bundle_to_csv(bundle));
    } else {
        throw ConfigError("--report must be json or csv");
    }

    bool any_fail = false;
    for (const auto& t : bundle.tests) {
        const char* mark = t.verdict == stats::Verdict::pass          ? "PASS"
                           : t.verdict == stats::Verdict::not_applicable ? "N/A "
                                                                         : "FAIL";
        std::cout << mark << "  " << t.test_name;
        if (t.p_value) std::cout << "  p=" << *t.p_value;
        if (!t.statistics.empty()) std::cout << "  stat=" << t.statistics.front();
        std::cout << "\n";
        if (t.verdict == stats::Verdict::fail) any_fail = true;
    }
    for (const auto& e : bundle.estimates) {
        std::cout << "INFO  " << e.estimator << "  p_max=" << e.p_max << "  h_min=" << e.h_min
                  << "\n";
    }
    std::cout << "report: " << out_path << "\n";
    if (any_fail) return kExitTestFailure;
    if (any_insufficient) return kExitInsufficient;
    return kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::string& axis,
              const std::string& values_csv, int repeats, uint64_t bits, int jobs,
              const std::string& out_path, bool seed_set, uint64_t seed) {
    ExperimentConfig config = load_config_or_default(config_path);
    apply_seed_overrides(config.circuit, seed_set, seed);
    SweepSpec spec;
    spec.axis = sweep_axis_from_string(axis);
    spec.values = parse_value_list(values_csv);
    spec.repeats = repeats;
    const uint64_t point_bits = bits > 0 ? bits : config.bits_per_stream;
    const std::vector<SweepRow> rows = run_sweep(config.circuit, spec, point_bits, jobs);
    const std::string csv = report::sweep_to_csv(rows);
    if (out_path.empty()) {
        std::cout << csv;
    } else {
        write_text_file(out_path, csv);
        std::cout << "wrote " << rows.size() << " rows to " << out_path << "\n";
    }
    return kExitOk;
}

int cmd_restart(const std::string& config_path, int trials, int prefix_bits, bool identical,
                bool seed_set, uint64_t seed) {
    ExperimentConfig config = load_config_or_default(config_path);
    apply_seed_overrides(config.circuit, seed_set, seed);
    std::vector<uint64_t> prefixes;
    stats::TestReport report;
    if (trials == 1) {
        // Single trial is trivially distinct.
        const BitStream bits = generate(config.circuit, static_cast<uint64_t>(prefix_bits));
        prefixes.push_back(bits.word(0, prefix_bits));
        report.test_name = "restart";
        report.verdict = stats::Verdict::pass;
        report.note = "single trial";
    } else {
        report = stats::restart_test(config.circuit, trials, prefix_bits, identical, &prefixes);
    }
    const int hex_digits = (prefix_bits + 3) / 4;
    for (uint64_t w : prefixes) {
        std::cout << "0x" << std::uppercase << std::hex << std::setfill('0')
                  << std::setw(hex_digits) << w << std::dec << "\n";
    }
    std::cout << (report.passed() ? "all prefixes distinct: pass" : "duplicate prefixes: fail")
              << "\n";
    return report.passed() ? kExitOk : kExitTestFailure;
}

int cmd_image(const std::string& stream_path, int width, int height, const std::string& out_path,
              bool invert) {
    if (width < 1 || height < 1) throw ConfigError("--width/--height must be >= 1");
    const BitStream stream = BitStream::read_file(stream_path);
    const size_t pixels = static_cast<size_t>(width) * static_cast<size_t>(height);
    if (stream.size() < pixels) {
        throw InsufficientData("image: stream shorter than width*height bits");
    }
    std::string data;
    data.reserve(pixels);
    for (size_t i = 0; i < pixels; ++i) {
        const bool one = stream[i] != 0;
        // Default palette: 1 -> black, 0 -> white.
        const uint8_t value = (one != invert) ? 0 : 255;
        data.push_back(static_cast<char>(value));
    }
    std::ostringstream header;
    header << "P5\n" << width << ' ' << height << "\n255\n";
    write_text_file(out_path, header.str() + data);
    std::cout << "wrote " << width << "x" << height << " PGM to " << out_path << "\n";
    return kExitOk;
}

int cmd_analyze(const std::string& formula, const std::vector<double>& mu,
                const analytic::PhaseNoiseParams& pn, double coverage_a, double coverage_tau,
                double coverage_eps, const std::vector<double>& coverage_w,
                const std::vector<double>& coverage_T, const std::vector<double>& coverage_f,
                uint64_t ones, uint64_t zeros, uint64_t mc_trials, uint64_t mc_seed) {
    std::cout.precision(10);
    if (formula == "phasenoise") {
        std::cout << "phase_noise_floor = " << analytic::phase_noise_floor(pn) << "\n";
        return kExitOk;
    }
    if (formula == "xor2" || formula == "xorn") {
        std::vector<double> mus = mu;
        if (formula == "xor2" && mus.size() != 2) {
            throw ConfigError("analyze xor2 needs exactly two --mu values");
        }
        const double exact = analytic::xor_n_expectation(mus);
        std::cout << "xor_expectation = " << exact << "\n";
        // Monte-Carlo cross-check of the closed form.
        NoiseRng rng = NoiseRng::from_seed(mc_seed);
        uint64_t ones_count = 0;
        for (uint64_t t = 0; t < mc_trials; ++t) {
            int parity = 0;
            for (double m : mus) parity ^= rng.next_unit() < m ? 1 : 0;
            ones_count += static_cast<uint64_t>(parity);
        }
        const double mc = static_cast<double>(ones_count) / static_cast<double>(mc_trials);
        const double se =
            std::sqrt(std::max(1e-12, exact * (1.0 - exact)) / static_cast<double>(mc_trials));
        std::cout << "monte_carlo = " << mc << "  (trials=" << mc_trials << ", se=" << se
                  << ", |diff|=" << std::fabs(mc - exact) << ")\n";
        return kExitOk;
    }
    if (formula == "coverage") {
        analytic::CoverageParams cp;
        cp.jitter_probability = coverage_a;
        cp.hold_sample_probability = coverage_tau;
        cp.edge_width_s = coverage_eps;
        cp.jitter_width_s = coverage_w;
        cp.ring_period_s = coverage_T;
        cp.frequency_hz = coverage_f;
        std::cout << "randomness_coverage = " << analytic::randomness_coverage(cp) << "\n";
        return kExitOk;
    }
    if (formula == "bias") {
        std::cout << "bias_percent = " << analytic::bias_percent(ones, zeros) << "\n";
        return kExitOk;
    }
    throw ConfigError("unknown formula '" + formula + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"DH-TRNG gate-level simulator and randomness evaluation suite"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string format = "bin";
    std::string report_format;
    std::string battery;
    std::string stream_path;
    std::string axis = "temperature";
    std::string values_csv;
    std::string formula;
    uint64_t bits = 0;
    uint64_t seed = 0;
    bool seed_set = false;
    int jobs = 1;
    int trials = 6;
    int prefix_bits = 32;
    bool identical_seeds = false;
    int width = 256;
    int height = 256;
    bool invert = false;
    int repeats = 1;
    std::vector<double> mu;
    analytic::PhaseNoiseParams pn;
    double cov_a = 0.5;
    double cov_tau = 0.1;
    double cov_eps = 1e-11;
    std::vector<double> cov_w;
    std::vector<double> cov_T;
    std::vector<double> cov_f;
    uint64_t ones = 0;
    uint64_t zeros = 0;
    uint64_t mc_trials = 200000;
    uint64_t mc_seed = 1;

    auto* gen = app.add_subcommand("generate", "simulate and write a bitstream");
    gen->add_option("--config", config_path, "config file (flat key=value)");
    gen->add_option("--bits", bits, "number of bits to generate")->required();
    gen->add_option("--out", out_path, "output file path")->required();
    gen->add_option("--format", format, "bin|txt")->check(CLI::IsMember({"bin", "txt"}));
    gen->add_option("--seed", seed, "seed override")->each([&](const std::string&) { seed_set = true; });

    auto* tst = app.add_subcommand("test", "run a statistical battery on a stream file");
    tst->add_option("stream", stream_path, "bitstream file (.bin or .txt)")->required();
    tst->add_option("--config", config_path, "config file (experiment.tests default battery)");
    tst->add_option("--battery", battery, "comma list: ais,nist,entropy,acf,bias,all");
    tst->add_option("--report", report_format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
    tst->add_option("--out", out_path, "report file path");

    auto* swp = app.add_subcommand("sweep", "parameter sweep with per-point statistics");
    swp->add_option("--config", config_path, "config file");
    swp->add_option("--axis", axis, "temperature|voltage|xor_count|ro1_stages")->required();
    swp->add_option("--values", values_csv, "comma-separated axis values")->required();
    swp->add_option("--repeats", repeats, "repeats per point");
    swp->add_option("--bits", bits, "bits per point (default experiment.bits_per_stream)");
    swp->add_option("--jobs", jobs, "concurrent simulations");
    swp->add_option("--out", out_path, "CSV output path (stdout if omitted)");
    swp->add_option("--seed", seed, "seed override")->each([&](const std::string&) { seed_set = true; });

    auto* rst = app.add_subcommand("restart", "restart test: distinct prefixes across trials");
    rst->add_option("--config", config_path, "config file");
    rst->add_option("--trials", trials, "number of restarts");
    rst->add_option("--prefix-bits", prefix_bits, "prefix length in bits");
    rst->add_flag("--identical-seeds", identical_seeds, "negative control: reuse one seed");
    rst->add_option("--seed", seed, "seed override")->each([&](const std::string&) { seed_set = true; });

    auto* img = app.add_subcommand("image", "render a bitstream as a binary PGM");
    img->add_option("stream", stream_path, "bitstream file")->required();
    img->add_option("--width", width, "image width");
    img->add_option("--height", height, "image height");
    img->add_option("--out", out_path, "output PGM path")->required();
    img->add_flag("--invert", invert, "swap the palette (1 -> white)");

    auto* ana = app.add_subcommand("analyze", "closed-form formula reports");
    ana->add_option("--formula", formula, "phasenoise|xor2|xorn|coverage|bias")->required();
    ana->add_option("--mu", mu, "bit expectation(s) for xor2/xorn");
    ana->add_option("--order", pn.ring_order, "phasenoise: ring order N");
    ana->add_option("--f0", pn.ring_freq_hz, "phasenoise: ring frequency");
    ana->add_option("--df", pn.offset_freq_hz, "phasenoise: offset frequency");
    ana->add_option("--power", pn.power_w, "phasenoise: power");
    ana->add_option("--boltzmann", pn.boltzmann, "phasenoise: K");
    ana->add_option("--temperature", pn.temperature_k, "phasenoise: T in kelvin");
    ana->add_option("--eta", pn.proportionality, "phasenoise: eta");
    ana->add_option("--vdd", pn.vdd_v, "phasenoise: Vdd");
    ana->add_option("--vchar", pn.characteristic_v, "phasenoise: V");
    ana->add_option("--current", pn.current_a, "phasenoise: I");
    ana->add_option("--resistance", pn.resistance_ohm, "phasenoise: R");
    ana->add_option("--a", cov_a, "coverage: jitter probability");
    ana->add_option("--tau", cov_tau, "coverage: hold sampling probability");
    ana->add_option("--eps", cov_eps, "coverage: transition edge width");
    ana->add_option("--w", cov_w, "coverage: jitter widths");
    ana->add_option("--T", cov_T, "coverage: ring periods");
    ana->add_option("--f", cov_f, "coverage: oscillation frequencies");
    ana->add_option("--ones", ones, "bias: count of ones");
    ana->add_option("--zeros", zeros, "bias: count of zeros");
    ana->add_option("--mc-trials", mc_trials, "Monte-Carlo cross-check trials");
    ana->add_option("--mc-seed", mc_seed, "Monte-Carlo seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (gen->parsed()) return cmd_generate(config_path, bits, out_path, format, seed_set, seed);
        if (tst->parsed()) return cmd_test(config_path, stream_path, battery, report_format, out_path);
        if (swp->parsed())
            return cmd_sweep(config_path, axis, values_csv, repeats, bits, jobs, out_path,
                             seed_set, seed);
        if (rst->parsed())
            return cmd_restart(config_path, trials, prefix_bits, identical_seeds, seed_set, seed);
        if (img->parsed()) return cmd_image(stream_path, width, height, out_path, invert);
        if (ana->parsed())
            return cmd_analyze(formula, mu, pn, cov_a, cov_tau, cov_eps, cov_w, cov_T, cov_f,
                               ones, zeros, mc_trials, mc_seed);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const InsufficientData& e) {
        std::cerr << "insufficient data: " << e.what() << "\n";
        return kExitInsufficient;
    } catch (const SimulationFault& e) {
        std::cerr << "simulation fault: " << e.what() << "\n";
        return kExitSimFault;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
