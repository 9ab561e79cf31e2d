#pragma once

#include <cstdint>
#include <optional>
#include <queue>
#include <vector>

#include "dhtrng/bitstream.hpp"
#include "dhtrng/noise.hpp"

namespace dhtrng {

// Full parameterization of the TRNG topology and noise model. Counts follow
// the two-set nested coupling layout: per set there are edge rings, central
// XOR rings and hybrid entropy units (each unit owns one central ring's MUX
// plus a free-running select ring). Sampled rings = edge + central per set.
struct CircuitConfig {
    int coupling_sets = 2;
    int edge_rings_per_set = 4;
    int central_rings_per_set = 2;
    int central_ring_xor_stages = 2;
    int entropy_units_per_set = 2;
    int ro1_stages = 3;
    int edge_ring_stages = 3;
    double sample_clock_hz = 6.2e8;
    NoiseParams noise;
    PvtCondition pvt;
    NoiseRngSeed seed;
    bool feedback_enabled = true;
    bool coupling_enabled = true;
    double process_spread = 0.08;  // static per-element delay mismatch (fraction of nominal)
    int warmup_edges = 64;

    int total_sampled_rings() const {
        return coupling_sets * (edge_rings_per_set + central_rings_per_set);
    }
    void validate() const;  // throws ConfigError
};

// Snapshot of one committed sample-clock edge.
struct SamplerState {
    std::vector<uint8_t> sampled_bits;  // one per sampled ring
    uint8_t feedback_bit = 0;           // value on the feedback line after this edge
    uint8_t output_bit = 0;             // XOR-tree reduction of sampled_bits
};

// Oscillation state of a sampled ring, exposed for inspection.
struct RingState {
    uint8_t level = 0;
    int64_t last_transition_fs = 0;
    std::optional<int64_t> next_event_fs;  // pending transition, if scheduled
    bool holding = false;                  // MUX rings only
};

// Event-driven gate-level instance. Time is kept in integer femtoseconds so
// runs are bit-exact for a given (config, seed) and the noise-free system is
// finite-state. Instances are single-threaded; run one per thread.
class Circuit {
public:
    explicit Circuit(const CircuitConfig& config);

    // Processes all events strictly before edge_fs, samples every ring
    // through its D flip-flop, reduces through the XOR tree and advances the
    // feedback register. edge_fs must exceed the previous edge.
    SamplerState advance_to_clock_edge(int64_t edge_fs);

    // Convenience: advances one nominal sample-clock period and returns the
    // output bit only.
    int next_output_bit();

    // Event processing without sampling (entropy-unit probes, tests).
    void run_until(int64_t t_fs);

    // Pins an entropy unit's hold/oscillate select to a fixed level; the
    // mode change lands after one gate delay, like a real select edge.
    void force_unit_select(int unit_index, int level);

    int unit_output_level(int unit_index) const;
    uint64_t unit_transition_count(int unit_index) const;
    bool unit_holding(int unit_index) const;

    RingState sampled_ring_state(int index) const;

    // Structure inspection.
    int sampled_ring_count() const { return static_cast<int>(sampled_.size()); }
    int dff_count() const;             // samplers + output + feedback registers
    int mux_count() const;             // one per entropy unit
    int feedback_arc_count() const;    // central XOR inputs fed by the output register

    int64_t now_fs() const { return now_fs_; }
    int64_t sample_period_fs() const { return period_fs_; }
    const CircuitConfig& config() const { return config_; }

private:
    struct FreeRing {
        double half_period_fs = 0.0;
        double sigma_fs = 0.0;
        int64_t floor_fs = 1;
        uint8_t level = 0;
        int64_t last_transition = 0;
        int64_t next_transition = 0;
        int16_t select_sink = -1;  // central ring whose MUX this ring drives
        int16_t xor_sink = -1;     // central ring whose XOR tap this ring feeds
        NoiseRng rng;
    };

    struct CentralRing {
        // XOR element.
        uint8_t x_level = 0;
        int64_t x_pending_time = -1;
        uint8_t x_pending_target = 0;
        uint32_t x_version = 0;
        double x_delay_fs = 0.0;
        double x_sigma_fs = 0.0;
        // Loop element (inverting MUX path); this node is the sampled signal.
        uint8_t m_level = 0;
        int64_t m_last_transition = 0;
        int64_t m_pending_time = -1;
        uint8_t m_pending_target = 0;
        uint32_t m_version = 0;
        uint64_t m_transitions = 0;
        double m_delay_fs = 0.0;
        double m_sigma_fs = 0.0;
        int64_t floor_fs = 1;

        bool holding = false;
        uint32_t mode_version = 0;
        bool has_unit = false;
        bool select_forced = false;
        double select_delay_fs = 0.0;
        double select_sigma_fs = 0.0;

        int16_t tap_a = -1;  // free-ring indices
        int16_t tap_b = -1;
        uint8_t tap_polarity = 0;
        NoiseRng rng;
    };

    enum class EventKind : uint8_t { free_toggle, xor_commit, mux_commit, mode_apply };

    struct Event {
        int64_t time;
        uint64_t seq;
        uint32_t node;
        EventKind kind;
        uint8_t target;
        uint32_t version;
    };

    struct EventLater {
        bool operator()(const Event& a, const Event& b) const {
            if (a.time != b.time) return a.time > b.time;
            return a.seq > b.seq;  // FIFO for equal timestamps
        }
    };

    struct SampledRef {
        bool central;
        int16_t index;
    };

    void schedule(int64_t time, uint32_t node, EventKind kind, uint8_t target, uint32_t version);
    void dispatch(const Event& e);
    void free_toggle(int idx, int64_t now);
    void reevaluate_xor(int idx, int64_t now);
    void reevaluate_mux(int idx, int64_t now);
    void apply_mode(int idx, int64_t now, bool hold);
    int xor_target(const CentralRing& c) const;
    int64_t draw_delay(double mean_fs, double sigma_fs, int64_t floor_fs, NoiseRng& rng);
    int sample_ring(const SampledRef& ref, int64_t edge_fs, int dff_index);

    CircuitConfig config_;
    NoiseParams noise_;  // after PVT scaling
    std::vector<FreeRing> free_rings_;
    std::vector<CentralRing> central_;
    std::vector<int16_t> unit_to_central_;
    std::vector<SampledRef> sampled_;
    std::vector<NoiseRng> dff_rngs_;
    std::priority_queue<Event, std::vector<Event>, EventLater> queue_;
    uint64_t seq_ = 0;
    int64_t now_fs_ = 0;
    int64_t last_edge_fs_ = -1;
    int64_t period_fs_ = 1;
    uint8_t fb_level_ = 0;
    uint8_t output_reg_ = 0;
    double meta_sigma_fs_ = 0.0;
};

// Builds a circuit and produces n_bits output bits (after the warm-up
// discard), packed LSB-first. Pure function of (config, n_bits).
BitStream generate(const CircuitConfig& config, uint64_t n_bits);

// Behavioral fast path for plain-ring configurations: every sampled ring is
// modeled as an accumulated-Gaussian phase walk without the event queue.
// Requires coupling, feedback and entropy units all disabled; statistically
// equivalent to the event-driven mode, not bit-identical.
BitStream generate_fast(const CircuitConfig& config, uint64_t n_bits);

}  // namespace dhtrng
