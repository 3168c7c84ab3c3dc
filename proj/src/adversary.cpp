#include "chainsim/adversary.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace chainsim {

AttackSpec select_attackers(NodeId n, std::uint32_t count, NodeId target, RngStream& rng) {
    if (target >= n) throw std::invalid_argument("select_attackers: target out of range");
    if (count > n - 1)
        throw std::invalid_argument("select_attackers: count " + std::to_string(count) +
                                    " exceeds n - 1 = " + std::to_string(n - 1));

    std::vector<NodeId> pool;
    pool.reserve(n - 1);
    for (NodeId i = 0; i < n; ++i)
        if (i != target) pool.push_back(i);

    for (std::uint32_t i = 0; i < count; ++i) {
        const auto j = i + static_cast<std::uint32_t>(rng.index_below(pool.size() - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(count);
    return make_attack(n, target, std::move(pool));
}

AttackSpec make_attack(NodeId n, NodeId target, std::vector<NodeId> attackers, bool enabled) {
    AttackSpec spec;
    spec.enabled = enabled;
    spec.target = target;
    std::sort(attackers.begin(), attackers.end());
    attackers.erase(std::unique(attackers.begin(), attackers.end()), attackers.end());
    spec.mask.assign(n, 0);
    for (NodeId a : attackers) {
        if (a >= n) throw std::invalid_argument("make_attack: attacker id out of range");
        if (a == target) throw std::invalid_argument("make_attack: target cannot be an attacker");
        spec.mask[a] = 1;
    }
    spec.attackers = std::move(attackers);
    return spec;
}

bool is_sybil_complete(const Overlay& overlay, const AttackSpec& attack) {
    const auto nbs = overlay.neighbors(attack.target);
    if (nbs.empty()) return false;
    for (NodeId nb : nbs)
        if (!attack.is_attacker(nb)) return false;
    return true;
}

} // namespace chainsim
