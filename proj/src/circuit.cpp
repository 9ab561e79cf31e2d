#include "dhtrng/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "dhtrng/errors.hpp"

namespace dhtrng {

namespace {

constexpr double kFsPerSecond = 1.0e15;

int64_t to_fs(double seconds) {
    return std::llround(seconds * kFsPerSecond);
}

}  // namespace

void CircuitConfig::validate() const {
    noise.validate();
    pvt.validate();
    if (coupling_sets < 1) throw ConfigError("circuit.coupling_sets must be >= 1");
    if (edge_rings_per_set < 0 || central_rings_per_set < 0 || entropy_units_per_set < 0) {
        throw ConfigError("circuit ring counts must be >= 0");
    }
    if (entropy_units_per_set > central_rings_per_set) {
        throw ConfigError("circuit.entropy_units_per_set cannot exceed central_rings_per_set");
    }
    if (total_sampled_rings() < 1) {
        throw ConfigError("degenerate topology: no sampled rings");
    }
    if (ro1_stages < 1) throw ConfigError("circuit.ro1_stages must be >= 1");
    if (edge_ring_stages < 1) throw ConfigError("circuit.edge_ring_stages must be >= 1");
    if (central_ring_xor_stages < 1) {
        throw ConfigError("circuit.central_ring_xor_stages must be >= 1");
    }
    if (central_rings_per_set > 0 && central_ring_xor_stages < 2) {
        throw ConfigError("central rings need an XOR stage plus a loop element (>= 2 stages)");
    }
    if (!(sample_clock_hz > 0.0) || !std::isfinite(sample_clock_hz)) {
        throw ConfigError("circuit.sample_clock_hz must be > 0");
    }
    if (!(process_spread >= 0.0) || !std::isfinite(process_spread)) {
        throw ConfigError("circuit.process_spread must be >= 0");
    }
    if (warmup_edges < 0) throw ConfigError("circuit.warmup_edges must be >= 0");
}

Circuit::Circuit(const CircuitConfig& config) : config_(config) {
    config_.validate();
    noise_ = apply_pvt(config_.noise, config_.pvt);
    meta_sigma_fs_ = noise_.meta_sigma * kFsPerSecond;
    period_fs_ = std::max<int64_t>(1, to_fs(1.0 / config_.sample_clock_hz));

    NoiseRng root = NoiseRng::from_seed(config_.seed.seed);
    NoiseRng process = root.fork(0x400);
    const double gate_fs = noise_.delay_mean * kFsPerSecond;
    const double jitter_fs = noise_.jitter_sigma * kFsPerSecond;

    auto static_scale = [&]() {
        if (config_.process_spread == 0.0) return 1.0;
        return std::max(0.2, 1.0 + config_.process_spread * process.next_gaussian());
    };

    uint64_t ring_id = 0;
    uint64_t central_id = 0;
    for (int set = 0; set < config_.coupling_sets; ++set) {
        const int central_base = static_cast<int>(central_.size());
        std::vector<int> set_edges;

        for (int e = 0; e < config_.edge_rings_per_set; ++e) {
            FreeRing r;
            r.rng = root.fork(0x100 + ring_id);
            const double scale = static_scale();
            r.half_period_fs = config_.edge_ring_stages * gate_fs * scale;
            r.sigma_fs = std::sqrt(static_cast<double>(config_.edge_ring_stages)) * jitter_fs;
            r.floor_fs = std::max<int64_t>(1, std::llround(r.half_period_fs / 100.0));
            set_edges.push_back(static_cast<int>(free_rings_.size()));
            sampled_.push_back({false, static_cast<int16_t>(free_rings_.size())});
            free_rings_.push_back(r);
            ++ring_id;
        }

        for (int c = 0; c < config_.central_rings_per_set; ++c) {
            CentralRing ring;
            ring.rng = root.fork(0x200 + central_id);
            const double scale_x = static_scale();
            const double scale_m = static_scale();
            ring.x_delay_fs = gate_fs * scale_x;
            ring.x_sigma_fs = jitter_fs;
            const int loop_gates = config_.central_ring_xor_stages - 1;
            ring.m_delay_fs = loop_gates * gate_fs * scale_m;
            ring.m_sigma_fs = std::sqrt(static_cast<double>(loop_gates)) * jitter_fs;
            ring.select_delay_fs = gate_fs * scale_m;
            ring.select_sigma_fs = jitter_fs;
            ring.floor_fs = std::max<int64_t>(1, std::llround(gate_fs / 100.0));
            ring.tap_polarity = static_cast<uint8_t>(c & 1);  // reversed insertion of unit pairs
            if (config_.coupling_enabled) {
                const int a = 2 * c;
                const int b = 2 * c + 1;
                if (a < static_cast<int>(set_edges.size())) {
                    ring.tap_a = static_cast<int16_t>(set_edges[a]);
                }
                if (b < static_cast<int>(set_edges.size())) {
                    ring.tap_b = static_cast<int16_t>(set_edges[b]);
                }
            }
            ring.has_unit = c < config_.entropy_units_per_set;
            sampled_.push_back({true, static_cast<int16_t>(central_.size())});
            central_.push_back(ring);
            ++central_id;
        }

        for (int u = 0; u < config_.entropy_units_per_set; ++u) {
            FreeRing r;
            r.rng = root.fork(0x100 + ring_id);
            const double scale = static_scale();
            r.half_period_fs = config_.ro1_stages * gate_fs * scale;
            r.sigma_fs = std::sqrt(static_cast<double>(config_.ro1_stages)) * jitter_fs;
            r.floor_fs = std::max<int64_t>(1, std::llround(r.half_period_fs / 100.0));
            r.select_sink = static_cast<int16_t>(central_base + u);
            unit_to_central_.push_back(static_cast<int16_t>(central_base + u));
            free_rings_.push_back(r);
            ++ring_id;
        }
    }

    // Wire taps to XOR sinks (one sink per edge ring with this topology).
    for (size_t c = 0; c < central_.size(); ++c) {
        if (central_[c].tap_a >= 0) free_rings_[central_[c].tap_a].xor_sink = static_cast<int16_t>(c);
        if (central_[c].tap_b >= 0) free_rings_[central_[c].tap_b].xor_sink = static_cast<int16_t>(c);
    }

    dff_rngs_.reserve(sampled_.size());
    for (size_t i = 0; i < sampled_.size(); ++i) dff_rngs_.push_back(root.fork(0x300 + i));

    // Startup: levels low, first events one sampled gate delay out.
    const int64_t gate_floor = std::max<int64_t>(1, std::llround(gate_fs / 100.0));
    for (size_t i = 0; i < free_rings_.size(); ++i) {
        FreeRing& r = free_rings_[i];
        r.next_transition = draw_delay(gate_fs, jitter_fs, gate_floor, r.rng);
        schedule(r.next_transition, static_cast<uint32_t>(i), EventKind::free_toggle, 0, 0);
    }
    for (size_t c = 0; c < central_.size(); ++c) {
        reevaluate_xor(static_cast<int>(c), 0);
        reevaluate_mux(static_cast<int>(c), 0);
    }
}

int64_t Circuit::draw_delay(double mean_fs, double sigma_fs, int64_t floor_fs, NoiseRng& rng) {
    int64_t d;
    if (sigma_fs == 0.0) {
        d = std::llround(mean_fs);
    } else {
        d = std::llround(mean_fs + sigma_fs * rng.next_gaussian());
    }
    return std::max<int64_t>(1, std::max(floor_fs, d));
}

void Circuit::schedule(int64_t time, uint32_t node, EventKind kind, uint8_t target,
                       uint32_t version) {
    queue_.push(Event{time, ++seq_, node, kind, target, version});
}

int Circuit::xor_target(const CentralRing& c) const {
    // Reversed insertion inverts the first tap of the odd unit in each pair;
    // a tapless ring reduces to a plain inverter loop.
    int t = c.m_level;
    if (c.tap_a >= 0) t ^= free_rings_[c.tap_a].level ^ c.tap_polarity;
    if (c.tap_b >= 0) t ^= free_rings_[c.tap_b].level;
    if (config_.feedback_enabled) t ^= fb_level_;
    return t;
}

void Circuit::reevaluate_xor(int idx, int64_t now) {
    CentralRing& c = central_[idx];
    const uint8_t target = static_cast<uint8_t>(xor_target(c));
    if (c.x_pending_time >= 0) {
        if (target == c.x_pending_target) return;
        // Binary signal: a reversal lands back on the current level, so the
        // pulse is shorter than the gate delay and gets filtered (inertial).
        c.x_pending_time = -1;
        ++c.x_version;
        return;
    }
    if (target == c.x_level) return;
    ++c.x_version;
    c.x_pending_target = target;
    c.x_pending_time = now + draw_delay(c.x_delay_fs, c.x_sigma_fs, c.floor_fs, c.rng);
    schedule(c.x_pending_time, static_cast<uint32_t>(idx), EventKind::xor_commit, target,
             c.x_version);
}

void Circuit::reevaluate_mux(int idx, int64_t now) {
    CentralRing& c = central_[idx];
    if (c.holding) return;
    const uint8_t target = static_cast<uint8_t>(1 - c.x_level);  // inverting loop path
    if (c.m_pending_time >= 0) {
        if (target == c.m_pending_target) return;
        c.m_pending_time = -1;
        ++c.m_version;
        return;
    }
    if (target == c.m_level) return;
    ++c.m_version;
    c.m_pending_target = target;
    c.m_pending_time = now + draw_delay(c.m_delay_fs, c.m_sigma_fs, c.floor_fs, c.rng);
    schedule(c.m_pending_time, static_cast<uint32_t>(idx), EventKind::mux_commit, target,
             c.m_version);
}

void Circuit::free_toggle(int idx, int64_t now) {
    FreeRing& r = free_rings_[idx];
    r.level ^= 1;
    r.last_transition = now;
    r.next_transition = now + draw_delay(r.half_period_fs, r.sigma_fs, r.floor_fs, r.rng);
    schedule(r.next_transition, static_cast<uint32_t>(idx), EventKind::free_toggle, 0, 0);

    if (r.select_sink >= 0) {
        CentralRing& c = central_[r.select_sink];
        if (!c.select_forced) {
            const int64_t t =
                now + draw_delay(c.select_delay_fs, c.select_sigma_fs, c.floor_fs, c.rng);
            schedule(t, static_cast<uint32_t>(r.select_sink), EventKind::mode_apply, r.level,
                     ++c.mode_version);
        }
    }
    if (r.xor_sink >= 0) reevaluate_xor(r.xor_sink, now);
}

void Circuit::apply_mode(int idx, int64_t now, bool hold) {
    CentralRing& c = central_[idx];
    if (hold == c.holding) return;
    c.holding = hold;
    if (hold) {
        // Latch capture: a data edge inside the metastability window of the
        // capture moment resolves as a biased coin, otherwise the settled
        // level sticks.
        int64_t delta = now - c.m_last_transition;  // >= 0
        if (c.m_pending_time >= 0) delta = std::min(delta, c.m_pending_time - now);
        uint8_t latched = c.m_level;
        if (static_cast<double>(delta) <= meta_sigma_fs_) {
            latched = c.rng.next_unit() < noise_.hold_bias ? 1 : 0;
        }
        if (c.m_pending_time >= 0) {
            c.m_pending_time = -1;
            ++c.m_version;
        }
        if (latched != c.m_level) {
            c.m_level = latched;
            c.m_last_transition = now;
            ++c.m_transitions;
            reevaluate_xor(idx, now);
        }
    } else {
        reevaluate_mux(idx, now);
    }
}

void Circuit::dispatch(const Event& e) {
    now_fs_ = e.time;
    switch (e.kind) {
        case EventKind::free_toggle:
            free_toggle(static_cast<int>(e.node), e.time);
            break;
        case EventKind::xor_commit: {
            CentralRing& c = central_[e.node];
            if (e.version != c.x_version || c.x_pending_time != e.time) return;
            c.x_level = e.target;
            c.x_pending_time = -1;
            reevaluate_mux(static_cast<int>(e.node), e.time);
            break;
        }
        case EventKind::mux_commit: {
            CentralRing& c = central_[e.node];
            if (e.version != c.m_version || c.m_pending_time != e.time || c.holding) return;
            c.m_level = e.target;
            c.m_last_transition = e.time;
            c.m_pending_time = -1;
            ++c.m_transitions;
            reevaluate_xor(static_cast<int>(e.node), e.time);
            break;
        }
        case EventKind::mode_apply: {
            CentralRing& c = central_[e.node];
            if (e.version != c.mode_version) return;
            apply_mode(static_cast<int>(e.node), e.time, e.target != 0);
            break;
        }
    }
}

void Circuit::run_until(int64_t t_fs) {
    while (!queue_.empty() && queue_.top().time < t_fs) {
        const Event e = queue_.top();
        queue_.pop();
        dispatch(e);
    }
    now_fs_ = t_fs;
}

int Circuit::sample_ring(const SampledRef& ref, int64_t edge_fs, int dff_index) {
    int64_t delta;
    EdgeDirection dir;
    if (!ref.central) {
        const FreeRing& r = free_rings_[ref.index];
        const int64_t ahead = r.next_transition - edge_fs;  // >= 0
        const int64_t behind = edge_fs - r.last_transition;  // >= 1
        if (ahead <= behind) {
            delta = ahead;
            dir = r.level == 0 ? EdgeDirection::rising : EdgeDirection::falling;
        } else {
            delta = -behind;
            dir = r.level == 1 ? EdgeDirection::rising : EdgeDirection::falling;
        }
    } else {
        const CentralRing& c = central_[ref.index];
        const int64_t behind = edge_fs - c.m_last_transition;
        if (c.m_pending_time >= 0 && c.m_pending_time - edge_fs <= behind) {
            delta = c.m_pending_time - edge_fs;
            dir = c.m_pending_target == 1 ? EdgeDirection::rising : EdgeDirection::falling;
        } else {
            delta = -behind;
            dir = c.m_level == 1 ? EdgeDirection::rising : EdgeDirection::falling;
        }
    }
    return metastable_resolve(static_cast<double>(delta) * 1.0e-15, dir, noise_,
                              dff_rngs_[dff_index]);
}

SamplerState Circuit::advance_to_clock_edge(int64_t edge_fs) {
    if (edge_fs <= last_edge_fs_) {
        throw ConfigError("clock edge must be strictly after the previous edge");
    }
    if (queue_.empty()) {
        throw SimulationFault("event queue starved: all rings dead");
    }
    run_until(edge_fs);

    SamplerState state;
    state.sampled_bits.resize(sampled_.size());
    int parity = 0;
    for (size_t i = 0; i < sampled_.size(); ++i) {
        const int bit = sample_ring(sampled_[i], edge_fs, static_cast<int>(i));
        state.sampled_bits[i] = static_cast<uint8_t>(bit);
        parity ^= bit;
    }
    state.output_bit = static_cast<uint8_t>(parity);

    // Feedback register chain: the output register holds the previous bit;
    // it reaches the central-ring XOR inputs one full clock behind.
    const uint8_t new_fb = output_reg_;
    output_reg_ = state.output_bit;
    if (config_.feedback_enabled && new_fb != fb_level_) {
        fb_level_ = new_fb;
        for (size_t c = 0; c < central_.size(); ++c) {
            reevaluate_xor(static_cast<int>(c), edge_fs);
        }
    }
    state.feedback_bit = fb_level_;
    last_edge_fs_ = edge_fs;
    return state;
}

int Circuit::next_output_bit() {
    const int64_t edge = last_edge_fs_ < 0 ? period_fs_ : last_edge_fs_ + period_fs_;
    return advance_to_clock_edge(edge).output_bit;
}

void Circuit::force_unit_select(int unit_index, int level) {
    if (unit_index < 0 || unit_index >= static_cast<int>(unit_to_central_.size())) {
        throw ConfigError("force_unit_select: no such entropy unit");
    }
    CentralRing& c = central_[unit_to_central_[unit_index]];
    c.select_forced = true;
    const int64_t t = now_fs_ + draw_delay(c.select_delay_fs, c.select_sigma_fs, c.floor_fs, c.rng);
    schedule(t, static_cast<uint32_t>(unit_to_central_[unit_index]), EventKind::mode_apply,
             static_cast<uint8_t>(level != 0), ++c.mode_version);
}

int Circuit::unit_output_level(int unit_index) const {
    return central_[unit_to_central_.at(unit_index)].m_level;
}

uint64_t Circuit::unit_transition_count(int unit_index) const {
    return central_[unit_to_central_.at(unit_index)].m_transitions;
}

bool Circuit::unit_holding(int unit_index) const {
    return central_[unit_to_central_.at(unit_index)].holding;
}

RingState Circuit::sampled_ring_state(int index) const {
    const SampledRef& ref = sampled_.at(index);
    RingState s;
    if (!ref.central) {
        const FreeRing& r = free_rings_[ref.index];
        s.level = r.level;
        s.last_transition_fs = r.last_transition;
        s.next_event_fs = r.next_transition;
    } else {
        const CentralRing& c = central_[ref.index];
        s.level = c.m_level;
        s.last_transition_fs = c.m_last_transition;
        if (c.m_pending_time >= 0) s.next_event_fs = c.m_pending_time;
        s.holding = c.holding;
    }
    return s;
}

int Circuit::dff_count() const {
    return static_cast<int>(sampled_.size()) + 1 + (config_.feedback_enabled ? 1 : 0);
}

int Circuit::mux_count() const { return static_cast<int>(unit_to_central_.size()); }

int Circuit::feedback_arc_count() const {
    return config_.feedback_enabled ? static_cast<int>(central_.size()) : 0;
}

BitStream generate(const CircuitConfig& config, uint64_t n_bits) {
    if (n_bits < 1) throw ConfigError("generate: n_bits must be >= 1");
    Circuit circuit(config);
    for (int i = 0; i < config.warmup_edges; ++i) circuit.next_output_bit();
    BitStream out;
    out.reserve_bits(n_bits);
    for (uint64_t i = 0; i < n_bits; ++i) out.push_back(circuit.next_output_bit());
    return out;
}

BitStream generate_fast(const CircuitConfig& config, uint64_t n_bits) {
    config.validate();
    if (n_bits < 1) throw ConfigError("generate_fast: n_bits must be >= 1");
    if (config.coupling_enabled || config.feedback_enabled || config.entropy_units_per_set != 0) {
        throw ConfigError(
            "generate_fast models plain rings only: disable coupling, feedback and entropy units");
    }
    const NoiseParams noise = apply_pvt(config.noise, config.pvt);
    const double gate_fs = noise.delay_mean * kFsPerSecond;
    const double jitter_fs = noise.jitter_sigma * kFsPerSecond;
    const int64_t period_fs = std::max<int64_t>(1, to_fs(1.0 / config.sample_clock_hz));

    struct PlainRing {
        double half_period_fs;
        double sigma_fs;
        int64_t floor_fs;
        uint8_t level = 0;
        int64_t last = 0;
        int64_t next = 0;
        NoiseRng rng;
    };

    NoiseRng root = NoiseRng::from_seed(config.seed.seed);
    NoiseRng process = root.fork(0x400);
    auto static_scale = [&]() {
        if (config.process_spread == 0.0) return 1.0;
        return std::max(0.2, 1.0 + config.process_spread * process.next_gaussian());
    };

    std::vector<PlainRing> rings;
    std::vector<NoiseRng> dff_rngs;
    uint64_t ring_id = 0;
    const int64_t gate_floor = std::max<int64_t>(1, std::llround(gate_fs / 100.0));
    for (int set = 0; set < config.coupling_sets; ++set) {
        for (int e = 0; e < config.edge_rings_per_set; ++e) {
            PlainRing r;
            r.rng = root.fork(0x100 + ring_id++);
            const double scale = static_scale();
            r.half_period_fs = config.edge_ring_stages * gate_fs * scale;
            r.sigma_fs = std::sqrt(static_cast<double>(config.edge_ring_stages)) * jitter_fs;
            r.floor_fs = std::max<int64_t>(1, std::llround(r.half_period_fs / 100.0));
            rings.push_back(r);
        }
        for (int c = 0; c < config.central_rings_per_set; ++c) {
            PlainRing r;
            r.rng = root.fork(0x180 + ring_id++);
            const double scale = static_scale();
            r.half_period_fs = config.central_ring_xor_stages * gate_fs * scale;
            r.sigma_fs = std::sqrt(static_cast<double>(config.central_ring_xor_stages)) * jitter_fs;
            r.floor_fs = std::max<int64_t>(1, std::llround(r.half_period_fs / 100.0));
            rings.push_back(r);
        }
    }
    for (size_t i = 0; i < rings.size(); ++i) {
        dff_rngs.push_back(root.fork(0x300 + i));
        int64_t first = std::llround(gate_fs);
        if (jitter_fs > 0.0) {
            first = std::llround(gate_fs + jitter_fs * rings[i].rng.next_gaussian());
        }
        rings[i].next = std::max<int64_t>(1, std::max(gate_floor, first));
    }

    BitStream out;
    out.reserve_bits(n_bits);
    const uint64_t total = n_bits + static_cast<uint64_t>(config.warmup_edges);
    int64_t edge = 0;
    for (uint64_t k = 0; k < total; ++k) {
        edge += period_fs;
        int parity = 0;
        for (size_t i = 0; i < rings.size(); ++i) {
            PlainRing& r = rings[i];
            while (r.next < edge) {
                r.level ^= 1;
                r.last = r.next;
                int64_t d;
                if (r.sigma_fs == 0.0) {
                    d = std::llround(r.half_period_fs);
                } else {
                    d = std::llround(r.half_period_fs + r.sigma_fs * r.rng.next_gaussian());
                }
                r.next += std::max<int64_t>(1, std::max(r.floor_fs, d));
            }
            const int64_t ahead = r.next - edge;
            const int64_t behind = edge - r.last;
            int64_t delta;
            EdgeDirection dir;
            if (ahead <= behind) {
                delta = ahead;
                dir = r.level == 0 ? EdgeDirection::rising : EdgeDirection::falling;
            } else {
                delta = -behind;
                dir = r.level == 1 ? EdgeDirection::rising : EdgeDirection::falling;
            }
            parity ^= metastable_resolve(static_cast<double>(delta) * 1.0e-15, dir, noise,
                                         dff_rngs[i]);
        }
        if (k >= static_cast<uint64_t>(config.warmup_edges)) out.push_back(parity);
    }
    return out;
}

}  // namespace dhtrng
