#pragma once

#include <cstdint>
#include <vector>

#include "chainsim/gossip.hpp"
#include "chainsim/overlay.hpp"
#include "chainsim/rng.hpp"
#include "chainsim/types.hpp"

namespace chainsim {

// Filtering-DoS attacker set: the listed nodes silently drop every message
// that originated at `target` and otherwise behave honestly (they relay other
// traffic and mine normally). Immutable during a run.
struct AttackSpec {
    bool enabled = false;
    NodeId target = 0;
    std::vector<NodeId> attackers;     // sorted, never contains target
    std::vector<std::uint8_t> mask;    // per-node attacker flag, sized lazily

    bool is_attacker(NodeId node) const { return node < mask.size() && mask[node]; }
    std::size_t count() const { return attackers.size(); }
};

// Draws `count` distinct attacker ids uniformly from all nodes except target.
// Sampling is a partial Fisher-Yates pass, so for a fixed stream the set for
// count k is a subset of the set for count k+1 (useful for coupled sweeps).
AttackSpec select_attackers(NodeId n, std::uint32_t count, NodeId target, RngStream& rng);

// Builds the spec from an explicit attacker list (deduplicated; target excluded).
AttackSpec make_attack(NodeId n, NodeId target, std::vector<NodeId> attackers, bool enabled = true);

enum class FilterDecision : std::uint8_t { Deliver, Drop };

// Drop iff the attack is active, the receiver is an attacker, and the message
// originated at the target. Dropped messages are not cached, stored, relayed,
// or counted as reaching the receiver.
inline FilterDecision filter_decision(const AttackSpec& attack, NodeId receiver,
                                      const GossipMessage& msg) {
    const bool drop = attack.enabled && msg.origin == attack.target && attack.is_attacker(receiver);
    return drop ? FilterDecision::Drop : FilterDecision::Deliver;
}

// True iff every overlay neighbor of the target is an attacker; the target is
// then informationally disconnected and its messages reach nobody.
bool is_sybil_complete(const Overlay& overlay, const AttackSpec& attack);

} // namespace chainsim
