#include "dhtrng/stats.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_set>

#include "dhtrng/errors.hpp"
#include "dhtrng/special.hpp"

namespace dhtrng::stats {

namespace {

constexpr double kAlpha = 0.01;

// 64-bit view of a packed stream for popcount-heavy tests. Bit i of the
// stream is bit (i mod 64) of word i/64, matching the LSB-first packing.
struct PackedBits {
    std::vector<uint64_t> words;
    size_t nbits;

    explicit PackedBits(const BitStream& s) : nbits(s.size()) {
        const auto& bytes = s.bytes();
        words.assign((nbits + 63) / 64 + 1, 0);
        for (size_t i = 0; i < bytes.size(); ++i) {
            words[i / 8] |= static_cast<uint64_t>(bytes[i]) << (8 * (i % 8));
        }
    }

    uint64_t window(size_t bit_offset) const {
        const size_t q = bit_offset / 64;
        const size_t r = bit_offset % 64;
        if (r == 0) return words[q];
        return (words[q] >> r) | (words[q + 1] << (64 - r));
    }

    // Ones in [first, first + len).
    uint64_t ones(size_t first, size_t len) const {
        uint64_t total = 0;
        size_t off = first;
        size_t remaining = len;
        while (remaining >= 64) {
            total += std::popcount(window(off));
            off += 64;
            remaining -= 64;
        }
        if (remaining > 0) {
            total += std::popcount(window(off) & ((~0ULL) >> (64 - remaining)));
        }
        return total;
    }

    // Hamming distance between [a, a+len) and [b, b+len).
    uint64_t xor_distance(size_t a, size_t b, size_t len) const {
        uint64_t total = 0;
        size_t remaining = len;
        size_t off = 0;
        while (remaining >= 64) {
            total += std::popcount(window(a + off) ^ window(b + off));
            off += 64;
            remaining -= 64;
        }
        if (remaining > 0) {
            total += std::popcount((window(a + off) ^ window(b + off)) &
                                   ((~0ULL) >> (64 - remaining)));
        }
        return total;
    }
};

void require_bits(const BitStream& s, size_t minimum, const char* test) {
    if (s.size() < minimum) {
        throw InsufficientData(std::string(test) + ": stream shorter than required minimum");
    }
}

double clamp_p(double p) { return std::clamp(p, 0.0, 1.0); }

TestReport p_value_report(std::string name, double p, uint64_t bits,
                          std::vector<double> statistics = {}, std::string note = {}) {
    TestReport r;
    r.test_name = std::move(name);
    r.statistics = std::move(statistics);
    r.p_value = clamp_p(p);
    r.verdict = *r.p_value >= kAlpha ? Verdict::pass : Verdict::fail;
    r.sample_bits = bits;
    r.note = std::move(note);
    return r;
}

TestReport bounds_report(std::string name, double statistic, Interval bounds, uint64_t bits,
                         std::string note = {}) {
    TestReport r;
    r.test_name = std::move(name);
    r.statistics = {statistic};
    r.bounds = bounds;
    r.verdict = bounds.contains(statistic) ? Verdict::pass : Verdict::fail;
    r.sample_bits = bits;
    r.note = std::move(note);
    return r;
}

}  // namespace

const Ais31Bounds& ais31_reference_bounds() {
    static const Ais31Bounds bounds;
    return bounds;
}

double AcfSeries::max_abs() const {
    double m = 0.0;
    for (double c : coefficients) m = std::max(m, std::fabs(c));
    return m;
}

TestReport monobit_t1(const BitStream& stream) {
    const Ais31Bounds& b = ais31_reference_bounds();
    require_bits(stream, b.block_bits, "monobit_t1");
    const size_t blocks = stream.size() / b.block_bits;
    PackedBits packed(stream);
    double worst = 10000.0;
    bool all_pass = true;
    for (size_t k = 0; k < blocks; ++k) {
        const double ones = static_cast<double>(packed.ones(k * b.block_bits, b.block_bits));
        if (!b.monobit.contains(ones)) all_pass = false;
        if (std::fabs(ones - 10000.0) > std::fabs(worst - 10000.0)) worst = ones;
    }
    TestReport r = bounds_report("ais31.T1.monobit", worst, b.monobit,
                                 blocks * b.block_bits,
                                 std::to_string(blocks) + " blocks");
    r.verdict = all_pass ? Verdict::pass : Verdict::fail;
    return r;
}

TestReport poker_t2(const BitStream& stream) {
    const Ais31Bounds& b = ais31_reference_bounds();
    require_bits(stream, b.block_bits, "poker_t2");
    const size_t blocks = stream.size() / b.block_bits;
    double worst = 0.0;
    bool first = true;
    bool all_pass = true;
    for (size_t k = 0; k < blocks; ++k) {
        uint64_t freq[16] = {0};
        const size_t base = k * b.block_bits;
        for (size_t i = 0; i < 5000; ++i) {
            ++freq[stream.word(base + 4 * i, 4)];
        }
        double sum = 0.0;
        for (uint64_t f : freq) sum += static_cast<double>(f) * static_cast<double>(f);
        const double x = 16.0 / 5000.0 * sum - 5000.0;
        if (!b.poker.contains(x)) {
            all_pass = false;
            worst = x;
            first = false;
        } else if (first || (all_pass && x > worst)) {
            worst = x;
            first = false;
        }
    }
    TestReport r = bounds_report("ais31.T2.poker", worst, b.poker, blocks * b.block_bits,
                                 std::to_string(blocks) + " blocks");
    r.verdict = all_pass ? Verdict::pass : Verdict::fail;
    return r;
}

TestReport runs_t3(const BitStream& stream) {
    const Ais31Bounds& b = ais31_reference_bounds();
    require_bits(stream, b.block_bits, "runs_t3");
    const size_t blocks = stream.size() / b.block_bits;
    uint64_t violations = 0;
    for (size_t k = 0; k < blocks; ++k) {
        uint64_t runs[2][6] = {{0}};
        const size_t base = k * b.block_bits;
        size_t i = 0;
        while (i < static_cast<size_t>(b.block_bits)) {
            const int v = stream[base + i];
            size_t len = 1;
            while (i + len < static_cast<size_t>(b.block_bits) && stream[base + i + len] == v) {
                ++len;
            }
            ++runs[v][std::min<size_t>(len, 6) - 1];
            i += len;
        }
        for (int v = 0; v < 2; ++v) {
            for (int l = 0; l < 6; ++l) {
                if (runs[v][l] < static_cast<uint64_t>(b.run_low[l]) ||
                    runs[v][l] > static_cast<uint64_t>(b.run_high[l])) {
                    ++violations;
                }
            }
        }
    }
    return bounds_report("ais31.T3.runs", static_cast<double>(violations), Interval{0, 0, true},
                         blocks * b.block_bits,
                         std::to_string(blocks) + " blocks, statistic = interval violations");
}

TestReport longrun_t4(const BitStream& stream) {
    const Ais31Bounds& b = ais31_reference_bounds();
    require_bits(stream, b.block_bits, "longrun_t4");
    const size_t blocks = stream.size() / b.block_bits;
    size_t longest = 0;
    for (size_t k = 0; k < blocks; ++k) {
        const size_t base = k * b.block_bits;
        size_t i = 0;
        while (i < static_cast<size_t>(b.block_bits)) {
            const int v = stream[base + i];
            size_t len = 1;
            while (i + len < static_cast<size_t>(b.block_bits) && stream[base + i + len] == v) {
                ++len;
            }
            longest = std::max(longest, len);
            i += len;
        }
    }
    return bounds_report("ais31.T4.longrun", static_cast<double>(longest),
                         Interval{0, static_cast<double>(b.longrun_limit - 1), true},
                         blocks * b.block_bits, std::to_string(blocks) + " blocks");
}

TestReport autocorr_t5(const BitStream& stream) {
    const Ais31Bounds& b = ais31_reference_bounds();
    require_bits(stream, b.block_bits, "autocorr_t5");
    const size_t blocks = stream.size() / b.block_bits;
    PackedBits packed(stream);
    double worst = 2500.0;
    bool all_pass = true;
    for (size_t k = 0; k < blocks; ++k) {
        const size_t base = k * b.block_bits;
        // Select the lag with maximal deviation on the first half, then test
        // it on the fresh second half.
        size_t tau0 = 1;
        uint64_t best_dev = 0;
        for (size_t tau = 1; tau <= 5000; ++tau) {
            const uint64_t z = packed.xor_distance(base, base + tau, 5000);
            const uint64_t dev =
                z > 2500 ? z - 2500 : 2500 - z;
            if (dev > best_dev) {
                best_dev = dev;
                tau0 = tau;
            }
        }
        const uint64_t z_test = packed.xor_distance(base + 10000, base + 10000 + tau0, 5000);
        const double z = static_cast<double>(z_test);
        if (!b.autocorr.contains(z)) all_pass = false;
        if (std::fabs(z - 2500.0) > std::fabs(worst - 2500.0)) worst = z;
    }
    TestReport r = bounds_report("ais31.T5.autocorrelation", worst, b.autocorr,
                                 blocks * b.block_bits,
                                 std::to_string(blocks) + " blocks");
    r.verdict = all_pass ? Verdict::pass : Verdict::fail;
    return r;
}

TestReport disjointness_t0(const BitStream& stream) {
    constexpr size_t kWords = 1 << 16;
    constexpr size_t kWordBits = 48;
    require_bits(stream, kWords * kWordBits, "disjointness_t0");
    std::unordered_set<uint64_t> seen;
    seen.reserve(kWords * 2);
    uint64_t duplicates = 0;
    for (size_t i = 0; i < kWords; ++i) {
        if (!seen.insert(stream.word(i * kWordBits, kWordBits)).second) ++duplicates;
    }
    return bounds_report("ais31.T0.disjointness", static_cast<double>(duplicates),
                         Interval{0, 0, true}, kWords * kWordBits,
                         "statistic = duplicate 48-bit words");
}

TestReport nist_frequency(const BitStream& stream) {
    require_bits(stream, 100, "nist_frequency");
    const size_t n = stream.size();
    PackedBits packed(stream);
    const double ones = static_cast<double>(packed.ones(0, n));
    const double s = 2.0 * ones - static_cast<double>(n);
    const double s_obs = std::fabs(s) / std::sqrt(static_cast<double>(n));
    const double p = special::erfc(s_obs / std::sqrt(2.0));
    return p_value_report("nist.frequency", p, n, {s_obs});
}

TestReport nist_block_frequency(const BitStream& stream, int block_len) {
    if (block_len < 2) throw ConfigError("nist_block_frequency: block_len must be >= 2");
    require_bits(stream, static_cast<size_t>(block_len), "nist_block_frequency");
    const size_t n = stream.size();
    const size_t blocks = n / static_cast<size_t>(block_len);
    PackedBits packed(stream);
    double chi2 = 0.0;
    for (size_t k = 0; k < blocks; ++k) {
        const double pi =
            static_cast<double>(packed.ones(k * block_len, block_len)) / block_len;
        chi2 += (pi - 0.5) * (pi - 0.5);
    }
    chi2 *= 4.0 * block_len;
    const double p = special::gamma_q(static_cast<double>(blocks) / 2.0, chi2 / 2.0);
    return p_value_report("nist.block_frequency", p, blocks * block_len, {chi2},
                          "M=" + std::to_string(block_len));
}

namespace {

double cusum_p_value(double z, double n) {
    const double sqn = std::sqrt(n);
    double p = 1.0;
    const long k_lo1 = static_cast<long>(std::floor((-n / z + 1.0) / 4.0));
    const long k_hi1 = static_cast<long>(std::floor((n / z - 1.0) / 4.0));
    for (long k = k_lo1; k <= k_hi1; ++k) {
        p -= special::gauss_cdf((4.0 * k + 1.0) * z / sqn) -
             special::gauss_cdf((4.0 * k - 1.0) * z / sqn);
    }
    const long k_lo2 = static_cast<long>(std::floor((-n / z - 3.0) / 4.0));
    for (long k = k_lo2; k <= k_hi1; ++k) {
        p += special::gauss_cdf((4.0 * k + 3.0) * z / sqn) -
             special::gauss_cdf((4.0 * k + 1.0) * z / sqn);
    }
    return p;
}

}  // namespace

TestReport nist_cusum(const BitStream& stream) {
    require_bits(stream, 100, "nist_cusum");
    const size_t n = stream.size();
    long s = 0;
    long max_fwd = 0;
    for (size_t i = 0; i < n; ++i) {
        s += stream[i] ? 1 : -1;
        max_fwd = std::max(max_fwd, std::labs(s));
    }
    // Backward mode: partial sums of the reversed sequence. The total is s,
    // so the running maximum of |s - prefix_i| gives the same walk.
    long prefix = 0;
    long max_bwd = std::labs(s);
    for (size_t i = 0; i < n; ++i) {
        prefix += stream[i] ? 1 : -1;
        max_bwd = std::max(max_bwd, std::labs(s - prefix));
    }
    const double p_fwd = clamp_p(cusum_p_value(static_cast<double>(max_fwd), static_cast<double>(n)));
    const double p_bwd = clamp_p(cusum_p_value(static_cast<double>(max_bwd), static_cast<double>(n)));
    const double avg = (p_fwd + p_bwd) / 2.0;
    TestReport r = p_value_report("nist.cumulative_sums", std::min(p_fwd, p_bwd), n,
                                  {p_fwd, p_bwd, avg},
                                  "statistics = [p_forward, p_backward, average]");
    return r;
}

TestReport nist_runs(const BitStream& stream) {
    require_bits(stream, 100, "nist_runs");
    const size_t n = stream.size();
    PackedBits packed(stream);
    const double pi = static_cast<double>(packed.ones(0, n)) / static_cast<double>(n);
    if (std::fabs(pi - 0.5) >= 2.0 / std::sqrt(static_cast<double>(n))) {
        return p_value_report("nist.runs", 0.0, n, {pi}, "frequency pre-test failed");
    }
    uint64_t v_obs = 1;
    for (size_t i = 0; i + 1 < n; ++i) {
        if (stream[i] != stream[i + 1]) ++v_obs;
    }
    const double nn = static_cast<double>(n);
    const double expected = 2.0 * nn * pi * (1.0 - pi);
    const double p = special::erfc(std::fabs(static_cast<double>(v_obs) - expected) /
                                   (2.0 * std::sqrt(2.0 * nn) * pi * (1.0 - pi)));
    return p_value_report("nist.runs", p, n, {static_cast<double>(v_obs)});
}

TestReport nist_longest_run(const BitStream& stream) {
    require_bits(stream, 128, "nist_longest_run");
    const size_t n = stream.size();
    int m;
    int k;
    std::vector<double> pi;
    int min_class;
    if (n >= 750000) {
        m = 10000;
        k = 6;
        pi = {0.0882, 0.2092, 0.2483, 0.1933, 0.1208, 0.0675, 0.0727};
        min_class = 10;
    } else if (n >= 6272) {
        m = 128;
        k = 5;
        pi = {0.1174, 0.2430, 0.2493, 0.1752, 0.1027, 0.1124};
        min_class = 4;
    } else {
        m = 8;
        k = 3;
        pi = {0.2148, 0.3672, 0.2305, 0.1875};
        min_class = 1;
    }
    const size_t blocks = n / static_cast<size_t>(m);
    std::vector<uint64_t> nu(static_cast<size_t>(k) + 1, 0);
    for (size_t b = 0; b < blocks; ++b) {
        const size_t base = b * static_cast<size_t>(m);
        int longest = 0;
        int run = 0;
        for (int i = 0; i < m; ++i) {
            if (stream[base + static_cast<size_t>(i)]) {
                ++run;
                longest = std::max(longest, run);
            } else {
                run = 0;
            }
        }
        const int cls = std::clamp(longest - min_class, 0, k);
        ++nu[static_cast<size_t>(cls)];
    }
    double chi2 = 0.0;
    for (int c = 0; c <= k; ++c) {
        const double expected = static_cast<double>(blocks) * pi[static_cast<size_t>(c)];
        const double diff = static_cast<double>(nu[static_cast<size_t>(c)]) - expected;
        chi2 += diff * diff / expected;
    }
    const double p = special::gamma_q(k / 2.0, chi2 / 2.0);
    return p_value_report("nist.longest_run", p, blocks * static_cast<size_t>(m), {chi2},
                          "M=" + std::to_string(m));
}

namespace {

// psi-squared statistic over cyclic m-bit windows.
double psi_squared(const BitStream& stream, int m) {
    if (m <= 0) return 0.0;
    const size_t n = stream.size();
    std::vector<uint64_t> counts(static_cast<size_t>(1) << m, 0);
    uint64_t window = 0;
    const uint64_t mask = (static_cast<uint64_t>(1) << m) - 1;
    for (size_t i = 0; i < n + static_cast<size_t>(m) - 1; ++i) {
        window = ((window << 1) | static_cast<uint64_t>(stream[i % n])) & mask;
        if (i + 1 >= static_cast<size_t>(m)) ++counts[window];
    }
    double sum = 0.0;
    for (uint64_t c : counts) sum += static_cast<double>(c) * static_cast<double>(c);
    return std::ldexp(sum, m) / static_cast<double>(n) - static_cast<double>(n);
}

}  // namespace

TestReport nist_serial(const BitStream& stream, int m) {
    if (m < 2) throw ConfigError("nist_serial: m must be >= 2");
    require_bits(stream, 100, "nist_serial");
    const size_t n = stream.size();
    const double psi_m = psi_squared(stream, m);
    const double psi_m1 = psi_squared(stream, m - 1);
    const double psi_m2 = psi_squared(stream, m - 2);
    const double d1 = psi_m - psi_m1;
    const double d2 = psi_m - 2.0 * psi_m1 + psi_m2;
    const double p1 = special::gamma_q(std::ldexp(1.0, m - 2), d1 / 2.0);
    const double p2 = special::gamma_q(std::ldexp(1.0, m - 3), d2 / 2.0);
    const double avg = (p1 + p2) / 2.0;
    return p_value_report("nist.serial", std::min(p1, p2), n, {p1, p2, avg},
                          "m=" + std::to_string(m) + ", statistics = [p1, p2, average]");
}

TestReport nist_approx_entropy(const BitStream& stream, int m) {
    if (m < 1) throw ConfigError("nist_approx_entropy: m must be >= 1");
    require_bits(stream, 100, "nist_approx_entropy");
    const size_t n = stream.size();
    auto phi = [&](int mm) {
        const size_t states = static_cast<size_t>(1) << mm;
        std::vector<uint64_t> counts(states, 0);
        uint64_t window = 0;
        const uint64_t mask = states - 1;
        for (size_t i = 0; i < n + static_cast<size_t>(mm) - 1; ++i) {
            window = ((window << 1) | static_cast<uint64_t>(stream[i % n])) & mask;
            if (i + 1 >= static_cast<size_t>(mm)) ++counts[window];
        }
        double sum = 0.0;
        for (uint64_t c : counts) {
            if (c > 0) {
                const double ci = static_cast<double>(c) / static_cast<double>(n);
                sum += ci * std::log(ci);
            }
        }
        return sum;
    };
    const double apen = phi(m) - phi(m + 1);
    const double chi2 = 2.0 * static_cast<double>(n) * (std::log(2.0) - apen);
    const double p = special::gamma_q(std::ldexp(1.0, m - 1), chi2 / 2.0);
    return p_value_report("nist.approximate_entropy", p, n, {apen, chi2},
                          "m=" + std::to_string(m));
}

MinEntropyEstimate mcv_estimate(const BitStream& stream) {
    require_bits(stream, 4096, "mcv_estimate");
    const size_t n = stream.size();
    PackedBits packed(stream);
    const uint64_t ones = packed.ones(0, n);
    const double p_hat =
        static_cast<double>(std::max(ones, n - ones)) / static_cast<double>(n);
    const double p_u = std::min(
        1.0, p_hat + 2.576 * std::sqrt(p_hat * (1.0 - p_hat) / (static_cast<double>(n) - 1.0)));
    MinEntropyEstimate e;
    e.estimator = "MCV";
    e.p_max = p_u;
    e.h_min = -std::log2(p_u);
    e.sample_bits = n;
    return e;
}

MinEntropyEstimate markov_estimate(const BitStream& stream) {
    require_bits(stream, 1000000, "markov_estimate");
    const size_t n = stream.size();
    PackedBits packed(stream);
    const uint64_t n1 = packed.ones(0, n);
    const uint64_t n0 = n - n1;
    // Transition counts over adjacent pairs: c[prev][next].
    // ones(1..n) of (stream & stream<<1) would need a shifted AND; direct
    // xor_distance gives the toggle count instead.
    const uint64_t toggles = packed.xor_distance(0, 1, n - 1);
    const uint64_t last = static_cast<uint64_t>(stream[n - 1]);
    // pairs with prev=1: n1 minus the final bit if it is 1.
    const uint64_t from1 = n1 - last;
    const uint64_t from0 = (n - 1) - from1;
    // toggles = c01 + c10; ones among successors of 1 = c11.
    // c10 = toggles_from_1; count directly:
    uint64_t c10 = 0;
    {
        // (prev=1, next=0) pairs: prev & (prev XOR next).
        // Count via word scan to stay O(n/64).
        for (size_t off = 0; off + 1 < n; off += 64) {
            const size_t len = std::min<size_t>(64, n - 1 - off);
            const uint64_t prev = packed.window(off);
            const uint64_t next = packed.window(off + 1);
            uint64_t mask = len == 64 ? ~0ULL : ((~0ULL) >> (64 - len));
            c10 += std::popcount(prev & ~next & mask);
        }
    }
    const uint64_t c01 = toggles - c10;
    const uint64_t c11 = from1 - c10;
    const uint64_t c00 = from0 - c01;

    auto upper = [](double p, double count) {
        if (count <= 1.0) return 1.0;
        return std::min(1.0, p + 2.576 * std::sqrt(p * (1.0 - p) / (count - 1.0)));
    };
    const double u0 = upper(static_cast<double>(n0) / static_cast<double>(n), static_cast<double>(n));
    const double u1 = upper(static_cast<double>(n1) / static_cast<double>(n), static_cast<double>(n));
    const double u00 = from0 ? upper(static_cast<double>(c00) / from0, static_cast<double>(from0)) : 1.0;
    const double u01 = from0 ? upper(static_cast<double>(c01) / from0, static_cast<double>(from0)) : 1.0;
    const double u10 = from1 ? upper(static_cast<double>(c10) / from1, static_cast<double>(from1)) : 1.0;
    const double u11 = from1 ? upper(static_cast<double>(c11) / from1, static_cast<double>(from1)) : 1.0;

    // Most likely 128-step path among the canonical candidates, in log2.
    auto lg = [](double x) { return x > 0.0 ? std::log2(x) : -1.0e9; };
    const double paths[6] = {
        lg(u0) + 127.0 * lg(u00),
        lg(u1) + 127.0 * lg(u11),
        lg(u0) + 63.0 * (lg(u01) + lg(u10)) + lg(u01),
        lg(u1) + 63.0 * (lg(u10) + lg(u01)) + lg(u10),
        lg(u0) + lg(u01) + 126.0 * lg(u11),
        lg(u1) + lg(u10) + 126.0 * lg(u00),
    };
    const double best_log2 = *std::max_element(paths, paths + 6);
    MinEntropyEstimate e;
    e.estimator = "Markov";
    e.p_max = std::exp2(best_log2);
    e.h_min = std::min(1.0, -best_log2 / 128.0);
    e.sample_bits = n;
    return e;
}

MinEntropyEstimate collision_estimate(const BitStream& stream) {
    require_bits(stream, 20000, "collision_estimate");
    const size_t n = stream.size();
    // Mean waiting time for a repeated symbol, restarting after each
    // collision. For binary data t is 2 or 3.
    uint64_t count = 0;
    uint64_t sum = 0;
    uint64_t sum_sq = 0;
    size_t i = 0;
    while (i + 1 < n) {
        uint64_t t;
        if (stream[i] == stream[i + 1]) {
            t = 2;
            i += 2;
        } else if (i + 2 < n) {
            t = 3;
            i += 3;
        } else {
            break;
        }
        ++count;
        sum += t;
        sum_sq += t * t;
    }
    const double k = static_cast<double>(count);
    const double mean = static_cast<double>(sum) / k;
    const double var = (static_cast<double>(sum_sq) - k * mean * mean) / (k - 1.0);
    const double sigma = std::sqrt(std::max(0.0, var));
    const double x_bar = mean - 2.576 * sigma / std::sqrt(k);

    // Solve E[T](p) = 2 + 2 p (1 - p) = x_bar for p in [1/2, 1] by binary
    // search (E[T] is strictly decreasing in p there).
    double p;
    if (x_bar >= 2.5) {
        p = 0.5;
    } else if (x_bar <= 2.0) {
        p = 1.0;
    } else {
        double lo = 0.5;
        double hi = 1.0;
        for (int iter = 0; iter < 200; ++iter) {
            const double mid = 0.5 * (lo + hi);
            const double value = 2.0 + 2.0 * mid * (1.0 - mid);
            if (value > x_bar) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        p = 0.5 * (lo + hi);
    }
    MinEntropyEstimate e;
    e.estimator = "Collision";
    e.p_max = p;
    e.h_min = -std::log2(p);
    e.sample_bits = n;
    return e;
}

AcfSeries acf(const BitStream& stream, int max_lag) {
    if (max_lag < 1) throw ConfigError("acf: max_lag must be >= 1");
    require_bits(stream, static_cast<size_t>(max_lag) * 10, "acf");
    const size_t n = stream.size();
    PackedBits packed(stream);
    AcfSeries series;
    series.max_lag = max_lag;
    series.coefficients.reserve(static_cast<size_t>(max_lag));
    for (int lag = 1; lag <= max_lag; ++lag) {
        const size_t len = n - static_cast<size_t>(lag);
        const double dlen = static_cast<double>(len);
        const double ones_a = static_cast<double>(packed.ones(0, len));
        const double ones_b = static_cast<double>(packed.ones(static_cast<size_t>(lag), len));
        const double mismatches =
            static_cast<double>(packed.xor_distance(0, static_cast<size_t>(lag), len));
        // +-1 mapping: sums and cross products from popcounts.
        const double s1 = 2.0 * ones_a - dlen;
        const double s2 = 2.0 * ones_b - dlen;
        const double cross = dlen - 2.0 * mismatches;
        const double cov = cross - s1 * s2 / dlen;
        const double var1 = dlen - s1 * s1 / dlen;
        const double var2 = dlen - s2 * s2 / dlen;
        if (var1 <= 0.0 || var2 <= 0.0) {
            series.degenerate = true;
            series.coefficients.push_back(0.0);
        } else {
            series.coefficients.push_back(cov / std::sqrt(var1 * var2));
        }
    }
    return series;
}

TestReport restart_test(const CircuitConfig& config, int trials, int prefix_bits,
                        bool identical_seeds, std::vector<uint64_t>* prefixes_out) {
    if (trials < 2) throw ConfigError("restart_test: trials must be >= 2");
    if (prefix_bits < 8 || prefix_bits > 64) {
        throw ConfigError("restart_test: prefix_bits must be in [8, 64]");
    }
    std::vector<uint64_t> prefixes;
    prefixes.reserve(static_cast<size_t>(trials));
    for (int t = 0; t < trials; ++t) {
        CircuitConfig trial = config;
        if (!identical_seeds) trial.seed.seed = config.seed.seed + static_cast<uint64_t>(t);
        const BitStream bits = generate(trial, static_cast<uint64_t>(prefix_bits));
        prefixes.push_back(bits.word(0, prefix_bits));
    }
    uint64_t duplicate_pairs = 0;
    for (size_t a = 0; a < prefixes.size(); ++a) {
        for (size_t b = a + 1; b < prefixes.size(); ++b) {
            if (prefixes[a] == prefixes[b]) ++duplicate_pairs;
        }
    }
    if (prefixes_out) *prefixes_out = prefixes;
    return bounds_report("restart", static_cast<double>(duplicate_pairs), Interval{0, 0, true},
                         static_cast<uint64_t>(trials) * static_cast<uint64_t>(prefix_bits),
                         std::to_string(trials) + " trials, statistic = duplicate prefix pairs");
}

std::optional<size_t> find_period(const BitStream& stream, size_t max_period, size_t skip) {
    if (stream.size() <= skip + 1) return std::nullopt;
    const size_t n = stream.size() - skip;
    // Prefix function: smallest p with s[i] == s[i+p] is n - pi[n-1].
    std::vector<uint32_t> pi(n, 0);
    for (size_t i = 1; i < n; ++i) {
        uint32_t j = pi[i - 1];
        while (j > 0 && stream[skip + i] != stream[skip + j]) j = pi[j - 1];
        if (stream[skip + i] == stream[skip + j]) ++j;
        pi[i] = j;
    }
    const size_t period = n - pi[n - 1];
    if (period <= max_period && period < n) return period;
    return std::nullopt;
}

std::pair<double, double> proportion_interval(double alpha, int k) {
    const double p_hat = 1.0 - alpha;
    const double margin = 3.0 * std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(k));
    return {p_hat - margin, std::min(1.0, p_hat + margin)};
}

}  // namespace dhtrng::stats
