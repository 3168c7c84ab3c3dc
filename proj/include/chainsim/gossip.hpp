#pragma once

#include <cstdint>
#include <vector>

#include "chainsim/bits.hpp"
#include "chainsim/overlay.hpp"
#include "chainsim/rng.hpp"
#include "chainsim/types.hpp"

namespace chainsim {

// TTL-bounded gossip envelope. ttl + hop stays equal to the initial TTL.
struct GossipMessage {
    MsgId id = 0;
    PayloadId payload = 0; // id of the carried transaction or block
    NodeId origin = 0;
    MsgKind kind = MsgKind::Transaction;
    std::uint8_t ttl = 0;  // remaining hops
    std::uint8_t hop = 0;  // hops traversed
};

struct DisseminationProtocol {
    enum class Kind : std::uint8_t { Broadcast, FixedProbability, DegreeDependent };

    Kind kind = Kind::Broadcast;
    double p = 1.0;               // FixedProbability only
    std::uint32_t func_id = 2;    // DegreeDependent only
    double coeff_higher = 4.0;
    double coeff_lower = 74.0;    // percent scale

    static DisseminationProtocol broadcast() { return {}; }
    static DisseminationProtocol fixed(double p) {
        return {Kind::FixedProbability, p, 2, 0.0, 0.0};
    }
    static DisseminationProtocol degree_dependent(std::uint32_t func_id, double higher, double lower) {
        return {Kind::DegreeDependent, 1.0, func_id, higher, lower};
    }
};

// Probability that a node of the given degree relays a received message over
// one of its edges. Function 2 of the degree-dependent family is
// min(1, coeff_higher/degree + coeff_lower/100); unknown ids throw.
double forward_probability(const DisseminationProtocol& protocol, std::uint32_t sender_degree);

// Per-node record of message ids already processed; ids enter on first
// reception and are never removed during a run.
class RelayCache {
public:
    bool contains(MsgId id) const { return seen_.test(id); }
    // True when the id was not cached yet.
    bool insert(MsgId id) { return seen_.set(id); }
    std::uint64_t size() const { return seen_.count(); }

private:
    DynamicBitset seen_;
};

// Issues fresh message ids as a dense sequence in injection order.
class MessageIdSource {
public:
    MsgId next() { return next_++; }
    MsgId issued() const { return next_; }

private:
    MsgId next_ = 0;
};

struct RelayDecision {
    NodeId dest;
    GossipMessage msg;
};

// Relay fan-out for a message the node just accepted: every neighbor except
// `exclude` is selected independently with forward_probability; each copy has
// ttl-1, hop+1. The coin for (message, neighbor) is a keyed draw on the node's
// gossip stream, so it does not depend on what else the node relayed.
void fan_out(const GossipMessage& msg, NodeId node, NodeId exclude, const Overlay& overlay,
             const DisseminationProtocol& protocol, const RngStream& gossip_rng,
             std::vector<RelayDecision>& out);

// Reception handler. Returns true on first reception (message accepted and
// cached; relays appended to `out` when ttl allows). Duplicates return false
// and append nothing.
bool on_receive(RelayCache& cache, const GossipMessage& msg, NodeId node, NodeId sender,
                const Overlay& overlay, const DisseminationProtocol& protocol,
                const RngStream& gossip_rng, std::vector<RelayDecision>& out);

// Creates a fresh message at its origin; the origin records it in its own
// cache. hop starts at 0. ttl must be >= 1.
GossipMessage inject(MessageIdSource& ids, RelayCache& origin_cache, NodeId origin, MsgKind kind,
                     PayloadId payload, std::uint32_t ttl);

} // namespace chainsim
