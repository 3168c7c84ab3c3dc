#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "chainsim/rng.hpp"
#include "chainsim/types.hpp"

namespace chainsim {

// Static undirected peer graph in CSR form. Adjacency lists are sorted so
// neighbor iteration order is deterministic.
class Overlay {
public:
    Overlay() = default;
    // Builds from an undirected edge list; symmetrizes, drops self-loops and
    // duplicates.
    Overlay(NodeId n, const std::vector<std::pair<NodeId, NodeId>>& edges);

    NodeId size() const { return n_; }
    std::uint64_t edge_count() const { return neighbors_.size() / 2; }

    std::uint32_t degree(NodeId node) const;
    std::span<const NodeId> neighbors(NodeId node) const;

    double mean_degree() const {
        return n_ == 0 ? 0.0 : static_cast<double>(neighbors_.size()) / static_cast<double>(n_);
    }

private:
    void check_node(NodeId node) const;

    NodeId n_ = 0;
    std::vector<std::uint64_t> offsets_;
    std::vector<NodeId> neighbors_;
};

// Each node opens `edges_per_node` outbound links to uniformly random distinct
// peers; the union is symmetrized. Regenerates from fresh draws of the same
// stream until connected, up to a bounded retry count.
Overlay generate_overlay(NodeId n, std::uint32_t edges_per_node, RngStream& rng,
                         int max_attempts = 16);

// True iff a single traversal from node 0 visits all nodes.
bool is_connected(const Overlay& overlay);

// One "u v" pair per line, each undirected edge once with u < v.
void write_edge_list(const Overlay& overlay, const std::string& path);

} // namespace chainsim
