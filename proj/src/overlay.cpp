#include "chainsim/overlay.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace chainsim {

Overlay::Overlay(NodeId n, const std::vector<std::pair<NodeId, NodeId>>& edges) : n_(n) {
    std::vector<std::pair<NodeId, NodeId>> canon;
    canon.reserve(edges.size());
    for (auto [u, v] : edges) {
        if (u >= n || v >= n) throw std::out_of_range("overlay: edge endpoint out of range");
        if (u == v) continue;
        canon.emplace_back(std::min(u, v), std::max(u, v));
    }
    std::sort(canon.begin(), canon.end());
    canon.erase(std::unique(canon.begin(), canon.end()), canon.end());

    std::vector<std::uint32_t> deg(n, 0);
    for (auto [u, v] : canon) {
        ++deg[u];
        ++deg[v];
    }
    offsets_.assign(n + 1, 0);
    for (NodeId i = 0; i < n; ++i) offsets_[i + 1] = offsets_[i] + deg[i];
    neighbors_.resize(offsets_[n]);
    std::vector<std::uint64_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (auto [u, v] : canon) {
        neighbors_[cursor[u]++] = v;
        neighbors_[cursor[v]++] = u;
    }
    for (NodeId i = 0; i < n; ++i)
        std::sort(neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]),
                  neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]));
}

void Overlay::check_node(NodeId node) const {
    if (node >= n_) throw std::out_of_range("overlay: node " + std::to_string(node) + " out of range");
}

std::uint32_t Overlay::degree(NodeId node) const {
    check_node(node);
    return static_cast<std::uint32_t>(offsets_[node + 1] - offsets_[node]);
}

std::span<const NodeId> Overlay::neighbors(NodeId node) const {
    check_node(node);
    return {neighbors_.data() + offsets_[node], neighbors_.data() + offsets_[node + 1]};
}

Overlay generate_overlay(NodeId n, std::uint32_t edges_per_node, RngStream& rng, int max_attempts) {
    if (n < 2) throw std::invalid_argument("generate_overlay: need at least 2 nodes");
    if (edges_per_node < 1 || edges_per_node >= n)
        throw std::invalid_argument("generate_overlay: edges_per_node must be in [1, n)");

    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        std::vector<std::pair<NodeId, NodeId>> edges;
        edges.reserve(static_cast<std::size_t>(n) * edges_per_node);
        std::vector<NodeId> picked;
        for (NodeId u = 0; u < n; ++u) {
            picked.clear();
            while (picked.size() < edges_per_node) {
                const auto v = static_cast<NodeId>(rng.index_below(n));
                if (v == u) continue;
                if (std::find(picked.begin(), picked.end(), v) != picked.end()) continue;
                picked.push_back(v);
                edges.emplace_back(u, v);
            }
        }
        Overlay overlay(n, edges);
        if (is_connected(overlay)) return overlay;
    }
    throw std::runtime_error("generate_overlay: no connected graph within " +
                             std::to_string(max_attempts) + " attempts");
}

bool is_connected(const Overlay& overlay) {
    const NodeId n = overlay.size();
    if (n == 0) return true;
    std::vector<std::uint8_t> seen(n, 0);
    std::vector<NodeId> stack{0};
    seen[0] = 1;
    NodeId visited = 1;
    while (!stack.empty()) {
        const NodeId u = stack.back();
        stack.pop_back();
        for (NodeId v : overlay.neighbors(u)) {
            if (!seen[v]) {
                seen[v] = 1;
                ++visited;
                stack.push_back(v);
            }
        }
    }
    return visited == n;
}

void write_edge_list(const Overlay& overlay, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    for (NodeId u = 0; u < overlay.size(); ++u)
        for (NodeId v : overlay.neighbors(u))
            if (u < v) out << u << ' ' << v << '\n';
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

} // namespace chainsim
