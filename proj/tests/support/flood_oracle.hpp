#pragma once

// Brute-force recomputation of a single message's propagation, used as an
// independent oracle against the engine. It walks the overlay hop layer by
// hop layer instead of going through agents, inboxes or mail buckets; only
// the keyed coin definition (the randomness itself) is shared with the
// implementation under test.

#include <cstdint>
#include <vector>

#include "chainsim/adversary.hpp"
#include "chainsim/gossip.hpp"
#include "chainsim/overlay.hpp"
#include "chainsim/rng.hpp"
#include "chainsim/types.hpp"

namespace chainsim::testing {

struct FloodResult {
    std::vector<std::int64_t> accepted_step; // -1 = never accepted; origin gets t0
    std::uint32_t reached = 0;               // accepted nodes excluding the origin
    TimeStep last_reach_step = 0;            // == t0 when nothing was reached
};

inline FloodResult flood_oracle(const Overlay& overlay, const DisseminationProtocol& protocol,
                                const AttackSpec& attack, std::uint64_t master_seed, NodeId origin,
                                MsgId msg_id, TimeStep t0, std::uint32_t ttl) {
    const NodeId n = overlay.size();
    FloodResult res;
    res.accepted_step.assign(n, -1);
    res.accepted_step[origin] = static_cast<std::int64_t>(t0);
    res.last_reach_step = t0;

    std::vector<NodeId> first_sender(n, kInvalidNode);
    first_sender[origin] = origin;

    GossipMessage probe; // only origin and id matter for the filter
    probe.id = msg_id;
    probe.origin = origin;

    std::vector<NodeId> frontier{origin};
    std::vector<NodeId> best(n, kInvalidNode); // min relaying sender per new node
    for (std::uint32_t depth = 0; depth < ttl && !frontier.empty(); ++depth) {
        std::vector<NodeId> touched;
        for (NodeId u : frontier) {
            const double p = forward_probability(protocol, overlay.degree(u));
            const RngStream coins = rng_for(master_seed, u, StreamPurpose::Gossip);
            for (NodeId v : overlay.neighbors(u)) {
                if (v == first_sender[u]) continue;
                if (p < 1.0 && coins.unit_at(msg_id, v) >= p) continue;
                if (filter_decision(attack, v, probe) == FilterDecision::Drop) continue;
                if (res.accepted_step[v] != -1) continue; // duplicate
                if (best[v] == kInvalidNode) touched.push_back(v);
                if (best[v] == kInvalidNode || u < best[v]) best[v] = u;
            }
        }
        frontier.clear();
        for (NodeId v : touched) {
            res.accepted_step[v] = static_cast<std::int64_t>(t0) + depth + 1;
            res.last_reach_step = std::max<TimeStep>(res.last_reach_step, t0 + depth + 1);
            first_sender[v] = best[v];
            best[v] = kInvalidNode;
            ++res.reached;
            frontier.push_back(v);
        }
    }
    return res;
}

} // namespace chainsim::testing
