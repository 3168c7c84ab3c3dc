#pragma once

#include <cstdint>
#include <memory>
#include <random>

#include "chainsim/types.hpp"

namespace chainsim {

// splitmix64; full-avalanche 64-bit mixer.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t mix64(std::uint64_t seed, std::uint64_t v) {
    return splitmix64(seed ^ (v + 0xd1b54a32d192ed03ULL));
}

// Role of a random stream; part of its lineage together with the master seed
// and the stream id, so every consumer draws from a disjoint sequence.
enum class StreamPurpose : std::uint64_t {
    Topology = 1,
    AttackerSelection = 2,
    MinerSelection = 3,
    Gossip = 4,
    Mining = 5,
};

// Deterministic random stream identified by (master_seed, stream_id, purpose).
//
// Two kinds of draws:
//  - sequential draws (next_*) advance internal mt19937_64 state;
//  - keyed draws (*_at) are pure functions of (lineage, a, b) and never touch
//    state, so a draw for one message cannot perturb draws for another. The
//    engine's hot paths use keyed draws only, which is what makes results
//    independent of worker count and of which other messages are in flight.
class RngStream {
public:
    explicit RngStream(std::uint64_t lineage_seed) : base_(lineage_seed) {}

    std::uint64_t lineage_seed() const { return base_; }

    std::uint64_t next_u64() { return engine()(); }

    // Uniform in [0, 1).
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, bound); bound must be nonzero. Unbiased by rejection.
    std::uint64_t index_below(std::uint64_t bound) {
        const std::uint64_t limit = bound * (UINT64_MAX / bound);
        std::uint64_t r;
        do {
            r = next_u64();
        } while (r >= limit);
        return r % bound;
    }

    // Pure keyed draw: depends only on lineage and (a, b).
    std::uint64_t u64_at(std::uint64_t a, std::uint64_t b) const {
        return splitmix64(mix64(mix64(base_, a), b));
    }

    double unit_at(std::uint64_t a, std::uint64_t b) const {
        return static_cast<double>(u64_at(a, b) >> 11) * 0x1.0p-53;
    }

private:
    std::mt19937_64& engine() {
        if (!engine_) engine_ = std::make_unique<std::mt19937_64>(base_);
        return *engine_;
    }

    std::uint64_t base_;
    std::unique_ptr<std::mt19937_64> engine_; // lazy; keyed-only streams stay 8 bytes
};

// Derives the stream for (master_seed, stream_id, purpose). Equal lineage gives
// bitwise-equal sequences; any differing component decorrelates the stream.
inline RngStream rng_for(std::uint64_t master_seed, std::uint32_t stream_id, StreamPurpose purpose) {
    const std::uint64_t s = mix64(mix64(master_seed, static_cast<std::uint64_t>(purpose)), stream_id);
    return RngStream(s);
}

} // namespace chainsim
