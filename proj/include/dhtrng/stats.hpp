#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dhtrng/bitstream.hpp"
#include "dhtrng/circuit.hpp"

namespace dhtrng::stats {

enum class Verdict { pass, fail, not_applicable };

// Pass interval for bound-based tests. Exclusive intervals test
// low < s < high, inclusive ones low <= s <= high.
struct Interval {
    double low;
    double high;
    bool inclusive;
    bool contains(double s) const {
        return inclusive ? (s >= low && s <= high) : (s > low && s < high);
    }
};

// Result of one statistical test. Exactly one of p_value / bounds is set.
// Tests with subtests (cumulative sums, serial) store every subtest p-value
// in statistics, set p_value to the worst subtest so that
// verdict == pass  <=>  p_value >= 0.01, and note the subtest average.
struct TestReport {
    std::string test_name;
    std::vector<double> statistics;
    std::optional<double> p_value;
    std::optional<Interval> bounds;
    Verdict verdict = Verdict::fail;
    uint64_t sample_bits = 0;
    std::string note;

    bool passed() const { return verdict == Verdict::pass; }
};

struct MinEntropyEstimate {
    std::string estimator;  // MCV | Markov | Collision
    double p_max = 1.0;
    double h_min = 0.0;
    double confidence_z = 2.576;  // z-score of the upper confidence bound (99%)
    uint64_t sample_bits = 0;
};

// Pearson autocorrelation of the +-1-mapped stream, lags 1..max_lag.
struct AcfSeries {
    std::vector<double> coefficients;  // index 0 holds lag 1
    int max_lag = 0;
    bool degenerate = false;  // constant slice encountered
    double max_abs() const;
};

// Reference constants of the AIS-31 procedure-A tests (FIPS 140-1 family);
// pinned against the committed fixture file by the unit tests.
struct Ais31Bounds {
    Interval monobit{9654, 10346, false};
    Interval poker{1.03, 57.4, false};
    int run_low[6] = {2267, 1079, 502, 223, 90, 90};
    int run_high[6] = {2733, 1421, 748, 402, 223, 223};
    int longrun_limit = 34;  // a run this long fails T4
    Interval autocorr{2326, 2674, false};
    int block_bits = 20000;
};
const Ais31Bounds& ais31_reference_bounds();

// AIS-31 procedure-A tests. Each consumes successive 20000-bit blocks and
// passes only if every block passes.
TestReport monobit_t1(const BitStream& stream);
TestReport poker_t2(const BitStream& stream);
TestReport runs_t3(const BitStream& stream);
TestReport longrun_t4(const BitStream& stream);
TestReport autocorr_t5(const BitStream& stream);

// Pairwise distinctness of 2^16 consecutive 48-bit words.
TestReport disjointness_t0(const BitStream& stream);

// NIST SP 800-22 subset. P-values use the project's own erfc / regularized
// incomplete gamma; pass threshold is p >= 0.01.
TestReport nist_frequency(const BitStream& stream);
TestReport nist_block_frequency(const BitStream& stream, int block_len = 128);
TestReport nist_cusum(const BitStream& stream);
TestReport nist_runs(const BitStream& stream);
TestReport nist_longest_run(const BitStream& stream);
TestReport nist_serial(const BitStream& stream, int m = 2);
TestReport nist_approx_entropy(const BitStream& stream, int m = 2);

// SP 800-90B estimator subset for binary sources.
MinEntropyEstimate mcv_estimate(const BitStream& stream);
MinEntropyEstimate markov_estimate(const BitStream& stream);
MinEntropyEstimate collision_estimate(const BitStream& stream);

AcfSeries acf(const BitStream& stream, int max_lag = 100);

// Generates `trials` streams with distinct per-trial noise seeds (or one
// shared seed for the negative control) and checks the prefix words are
// pairwise distinct. Prefix words are stream-order, most significant bit
// first.
TestReport restart_test(const CircuitConfig& config, int trials, int prefix_bits,
                        bool identical_seeds = false,
                        std::vector<uint64_t>* prefixes_out = nullptr);

// Smallest p <= max_period with bits[i] == bits[i+p] over the stream after
// `skip` bits (prefix-function search). Empty when no such period exists.
std::optional<size_t> find_period(const BitStream& stream, size_t max_period, size_t skip = 0);

// Acceptance interval for a pass proportion over k streams at significance
// alpha: p_hat +- 3 sqrt(p_hat (1 - p_hat) / k).
std::pair<double, double> proportion_interval(double alpha, int k);

}  // namespace dhtrng::stats
