#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "chainsim/adversary.hpp"
#include "chainsim/chain.hpp"
#include "chainsim/config.hpp"
#include "chainsim/gossip.hpp"
#include "chainsim/metrics.hpp"
#include "chainsim/overlay.hpp"
#include "chainsim/types.hpp"

namespace chainsim {

// Contiguous range [begin, end) of agents owned by one worker.
struct Partition {
    std::uint32_t index = 0;
    NodeId begin = 0;
    NodeId end = 0;
};

// Near-equal contiguous ranges covering [0, n); sizes differ by at most one.
std::vector<Partition> partition_nodes(NodeId n, std::uint32_t workers);

enum class EventKind : std::uint8_t {
    Accept,     // first reception (peer = sender)
    Duplicate,  // reception deduplicated by the relay cache (peer = sender)
    FilterDrop, // reception dropped by an attacker (peer = sender)
    Relay,      // copy placed in flight (peer = destination)
    Inject,     // fresh message created at its origin
    Mint,       // block found (msg = block id)
    TipSwitch,  // ledger tip changed (msg = new tip id)
};

struct Event {
    TimeStep step = 0;
    EventKind kind = EventKind::Accept;
    NodeId node = 0;
    NodeId peer = kInvalidNode;
    MsgId msg = 0;

    bool operator==(const Event&) const = default;
};

// Optional per-event record stream in canonical (step, phase, node) order.
// Counters in Metrics stay exact whether or not this is collected.
struct EventLog {
    bool enabled = false;
    std::vector<Event> events;
};

struct RunOptions {
    bool collect_events = false;
    std::uint32_t event_node_limit = 2000; // refuse per-event records above this many nodes
    std::uint32_t progress_interval = 0;   // stderr progress every N steps; 0 = silent
};

// A message copy in flight between two agents; sent at step t, delivered at t+1.
struct Envelope {
    NodeId dest = 0;
    NodeId sender = 0;
    GossipMessage msg;
};

// One simulated network node: its ledger, gossip dedup cache, optional miner
// role, and the inbox of envelopes to process this step. Owned by exactly one
// partition.
struct AgentState {
    LedgerState ledger;
    RelayCache relay_cache;
    double miner_hashrate = 0.0;
    std::vector<Envelope> inbox;
    RngStream gossip;
    RngStream mining;

    AgentState(RngStream g, RngStream m) : gossip(std::move(g)), mining(std::move(m)) {}
};

// Per-partition accumulators; merged at deterministic points so results do not
// depend on the worker count.
struct PartitionScratch {
    std::vector<std::vector<Envelope>> out; // per destination partition, next step's mail
    std::vector<std::uint32_t> reach;       // per message id, local first-acceptance count
    std::vector<TimeStep> last_reach;       // per message id, local latest acceptance step
    Counters counters;
    std::vector<Event> events;
    std::vector<RelayDecision> relay_buf;
};

struct SimState {
    SimConfig config;
    std::shared_ptr<const Overlay> overlay;
    AttackSpec attack;
    DisseminationProtocol protocol;
    RunOptions options;

    TimeStep clock = 0;
    std::vector<AgentState> agents;
    std::vector<NodeId> miners; // ascending
    std::vector<Partition> partitions;
    std::vector<std::uint32_t> part_of; // node -> partition index

    // mail[src][dst]: envelopes sent by partition src last step, addressed to dst.
    std::vector<std::vector<std::vector<Envelope>>> mail;
    std::vector<PartitionScratch> scratch;

    BlockStore blocks;
    std::vector<Transaction> txs; // id == index
    MessageIdSource msg_ids;
    Metrics metrics;
    EventLog events;

    std::uint32_t tx_emitted = 0;
    std::uint32_t tx_kind_counter = 0;
    std::uint32_t block_kind_counter = 0;
    bool finalized = false;
};

DisseminationProtocol protocol_from(const SimConfig& cfg);

// Assembles the initial state; throws on config/overlay mismatch.
SimState init_state(SimConfig cfg, std::shared_ptr<const Overlay> overlay, AttackSpec attack,
                    DisseminationProtocol protocol, RunOptions options = {});

// Advances one tick, single-threaded. Per step: (1) deliver mail sent at t-1,
// applying the attacker filter per receiver, (2) agents process inboxes,
// (3) scheduled transactions fire, (4) miners attempt a block and gossip any
// find, (5) outboxes are collected for delivery at t+1. Throws past end_clock.
void step(SimState& state);

// Merges per-partition accumulators into state.metrics. Idempotent; called by
// run() automatically.
void finalize(SimState& state);

// Executes exactly end_clock steps with config.workers barrier-synchronized
// workers (single-threaded when workers == 1) and finalizes. For a fixed
// config and seed the results are identical for any worker count.
SimState run(SimConfig cfg, std::shared_ptr<const Overlay> overlay, AttackSpec attack,
             DisseminationProtocol protocol, RunOptions options = {});

// Convenience: derives overlay, attacker set and protocol from the config's
// seeds, then runs.
SimState run(const SimConfig& cfg, RunOptions options = {});

// Envelopes still in flight (sent during the final step, never delivered).
std::uint64_t in_flight_count(const SimState& state);

} // namespace chainsim
