#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "chainsim/types.hpp"

namespace chainsim {

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Scheduled emission of transactions from a single origin node:
// one transaction at step i*period for i in [0, count), clipped to the run length.
struct TxSchedule {
    NodeId origin = 0;
    std::uint32_t period = 35;
    std::uint32_t count = 140;

    bool operator==(const TxSchedule&) const = default;
};

struct AttackConfig {
    bool enabled = false;
    NodeId target = 0;
    std::uint32_t count = 0;
    std::uint64_t seed = 42;

    bool operator==(const AttackConfig&) const = default;
};

// Every model and run parameter. Defaults mirror a Q4-2018 Bitcoin snapshot:
// 10^4 nodes, 70% miners, network hashrate ~4.4e19 H/s, difficulty ~6.49e12,
// TTL-16 degree-dependent gossip on a random overlay with 8 outbound edges.
struct SimConfig {
    std::uint32_t ttl = 16;
    std::uint32_t dissemination = 7;        // 1=broadcast, 2=fixed probability, 7=degree dependent
    std::uint32_t probability_function = 2; // selector for the degree-dependent family
    double func_coeff_higher = 4.0;
    double func_coeff_lower = 74.0;         // percent scale
    std::uint32_t end_clock = 5000;
    std::uint32_t nodes = 10000;
    double miners_percent = 70.0;           // percent of nodes that mine, in (0, 100]
    double difficulty = 6489747252517.0;
    double total_hashrate = 4.3983561622e19; // hashes/second, whole network
    std::uint32_t edges_per_node = 8;
    std::uint64_t master_seed = 42;
    std::uint32_t workers = 1;
    double fixed_prob = 1.0;                // relay probability when dissemination=2
    std::uint32_t max_block_tx = 0;         // per-block transaction cap; 0 = unbounded
    TxSchedule tx;
    AttackConfig attack;

    double miner_fraction() const { return miners_percent / 100.0; }
    std::uint32_t miner_count() const;

    bool operator==(const SimConfig&) const = default;
};

// Parses a key=value document ('#' starts a comment). Unknown keys are
// rejected; absent keys keep their defaults; all invariants are validated.
SimConfig parse_config(std::string_view text);
SimConfig parse_config_file(const std::string& path);

// Applies one KEY=VALUE assignment (the CLI --set mechanism). Does not validate.
void apply_config_kv(SimConfig& cfg, std::string_view key, std::string_view value);

// Throws ConfigError naming the offending key.
void validate_config(const SimConfig& cfg);

// Renders every key in a fixed order such that parse_config(render_config(c)) == c.
std::string render_config(const SimConfig& cfg);

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

} // namespace chainsim
