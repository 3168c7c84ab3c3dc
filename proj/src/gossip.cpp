#include "chainsim/gossip.hpp"

#include <algorithm>
#include <stdexcept>

namespace chainsim {

double forward_probability(const DisseminationProtocol& protocol, std::uint32_t sender_degree) {
    switch (protocol.kind) {
    case DisseminationProtocol::Kind::Broadcast:
        return 1.0;
    case DisseminationProtocol::Kind::FixedProbability:
        return protocol.p;
    case DisseminationProtocol::Kind::DegreeDependent:
        if (protocol.func_id != 2)
            throw std::invalid_argument("forward_probability: unknown probability function id " +
                                        std::to_string(protocol.func_id));
        return std::min(1.0, protocol.coeff_higher / static_cast<double>(sender_degree) +
                                 protocol.coeff_lower / 100.0);
    }
    throw std::invalid_argument("forward_probability: unknown protocol kind");
}

void fan_out(const GossipMessage& msg, NodeId node, NodeId exclude, const Overlay& overlay,
             const DisseminationProtocol& protocol, const RngStream& gossip_rng,
             std::vector<RelayDecision>& out) {
    if (msg.ttl == 0) return;
    const double p = forward_probability(protocol, overlay.degree(node));
    if (p <= 0.0) return;
    GossipMessage copy = msg;
    copy.ttl = static_cast<std::uint8_t>(msg.ttl - 1);
    copy.hop = static_cast<std::uint8_t>(msg.hop + 1);
    for (NodeId nb : overlay.neighbors(node)) {
        if (nb == exclude) continue;
        if (p < 1.0 && gossip_rng.unit_at(msg.id, nb) >= p) continue;
        out.push_back({nb, copy});
    }
}

bool on_receive(RelayCache& cache, const GossipMessage& msg, NodeId node, NodeId sender,
                const Overlay& overlay, const DisseminationProtocol& protocol,
                const RngStream& gossip_rng, std::vector<RelayDecision>& out) {
    if (!cache.insert(msg.id)) return false;
    fan_out(msg, node, sender, overlay, protocol, gossip_rng, out);
    return true;
}

GossipMessage inject(MessageIdSource& ids, RelayCache& origin_cache, NodeId origin, MsgKind kind,
                     PayloadId payload, std::uint32_t ttl) {
    if (ttl < 1) throw std::invalid_argument("inject: ttl must be >= 1");
    if (ttl > 255) throw std::invalid_argument("inject: ttl must be <= 255");
    GossipMessage msg;
    msg.id = ids.next();
    msg.payload = payload;
    msg.origin = origin;
    msg.kind = kind;
    msg.ttl = static_cast<std::uint8_t>(ttl);
    msg.hop = 0;
    origin_cache.insert(msg.id);
    return msg;
}

} // namespace chainsim
