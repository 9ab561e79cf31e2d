#pragma once

#include <cstdint>

namespace dhtrng {

// Counter-based pseudo-random source used as the simulator's stand-in for
// physical noise. Output word i of a stream is mix(key + i*GAMMA), so a
// stream is a pure function of (key, counter) and never carries hidden
// state. Streams fork into independent substreams by re-keying, which lets
// every gate in a netlist own its own deterministic noise sequence.
class NoiseRng {
public:
    NoiseRng() : NoiseRng(0) {}
    explicit NoiseRng(uint64_t key) : key_(key), counter_(0) {}

    // Root stream for a simulation seed.
    static NoiseRng from_seed(uint64_t seed) { return NoiseRng(mix(seed ^ kSeedTag)); }

    // Independent substream; child_id may be any value, including ones
    // derived from nested forks.
    NoiseRng fork(uint64_t child_id) const {
        return NoiseRng(mix(key_ ^ mix(child_id + kForkTag)));
    }

    uint64_t next_u64() { return mix(key_ + kGamma * ++counter_); }

    uint32_t next_u32() { return static_cast<uint32_t>(next_u64() >> 32); }

    // Uniform on (0,1); never returns 0 or 1 exactly.
    double next_unit() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal draw (Marsaglia-Tsang ziggurat, 128 layers).
    double next_gaussian();

    uint64_t key() const { return key_; }

private:
    // SplitMix64 finalizer (Steele, Lea, Flood 2014).
    static uint64_t mix(uint64_t z) {
        z += 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    static constexpr uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
    static constexpr uint64_t kSeedTag = 0x5D49E0C3F2A8B174ULL;
    static constexpr uint64_t kForkTag = 0xA3EC647659359ACDULL;

    uint64_t key_;
    uint64_t counter_;
};

}  // namespace dhtrng
