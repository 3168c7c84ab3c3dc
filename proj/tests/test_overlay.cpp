#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <set>

#include "chainsim/overlay.hpp"

using namespace chainsim;

namespace {

Overlay gen(NodeId n, std::uint32_t k, std::uint64_t seed, int attempts = 16) {
    auto rng = rng_for(seed, 0, StreamPurpose::Topology);
    return generate_overlay(n, k, rng, attempts);
}

void check_invariants(const Overlay& o) {
    std::uint64_t degree_sum = 0;
    for (NodeId u = 0; u < o.size(); ++u) {
        NodeId prev = kInvalidNode;
        for (NodeId v : o.neighbors(u)) {
            CHECK(v != u);                    // no self loops
            if (prev != kInvalidNode) CHECK(v > prev); // sorted, no duplicates
            prev = v;
            const auto nbs = o.neighbors(v); // symmetry
            CHECK(std::binary_search(nbs.begin(), nbs.end(), u));
        }
        degree_sum += o.degree(u);
    }
    CHECK(degree_sum == 2 * o.edge_count()); // handshake identity
}

} // namespace

TEST_CASE("two nodes with one outbound edge form the single possible edge") {
    const Overlay o = gen(2, 1, 5);
    CHECK(o.edge_count() == 1);
    CHECK(o.degree(0) == 1);
    CHECK(o.degree(1) == 1);
    CHECK(o.neighbors(0)[0] == 1);
    CHECK(is_connected(o));
}

TEST_CASE("preconditions are enforced") {
    auto rng = rng_for(1, 0, StreamPurpose::Topology);
    CHECK_THROWS_AS(generate_overlay(5, 5, rng), std::invalid_argument);
    CHECK_THROWS_AS(generate_overlay(5, 0, rng), std::invalid_argument);
    CHECK_THROWS_AS(generate_overlay(1, 1, rng), std::invalid_argument);
}

TEST_CASE("degree queries reject out-of-range nodes") {
    const Overlay o = gen(10, 2, 3);
    CHECK_THROWS_AS(o.degree(10), std::out_of_range);
    CHECK_THROWS_AS(o.neighbors(11), std::out_of_range);
}

TEST_CASE("full-scale generation: connected, mean degree within symmetrization bounds") {
    const Overlay o = gen(10000, 8, 42);
    CHECK(o.size() == 10000);
    CHECK(is_connected(o));
    CHECK(o.mean_degree() >= 8.0);
    CHECK(o.mean_degree() <= 16.0);
    check_invariants(o);
}

TEST_CASE("hand-built complete graph on 4 nodes") {
    const Overlay o(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
    for (NodeId u = 0; u < 4; ++u) CHECK(o.degree(u) == 3);
    CHECK(is_connected(o));
}

TEST_CASE("generation is deterministic in the seed") {
    const Overlay a = gen(500, 4, 11);
    const Overlay b = gen(500, 4, 11);
    const Overlay c = gen(500, 4, 12);
    REQUIRE(a.size() == b.size());
    bool all_equal = true;
    bool any_diff_c = false;
    for (NodeId u = 0; u < a.size(); ++u) {
        const auto na = a.neighbors(u);
        const auto nb = b.neighbors(u);
        all_equal = all_equal && std::equal(na.begin(), na.end(), nb.begin(), nb.end());
        const auto nc = c.neighbors(u);
        any_diff_c = any_diff_c || !std::equal(na.begin(), na.end(), nc.begin(), nc.end());
    }
    CHECK(all_equal);
    CHECK(any_diff_c);
}

TEST_CASE("disconnected graphs are detected") {
    const Overlay two_pairs(4, {{0, 1}, {2, 3}});
    CHECK_FALSE(is_connected(two_pairs));
    const Overlay edge(2, {{0, 1}});
    CHECK(is_connected(edge));
}

TEST_CASE("connectivity retry budget exhausts on hopeless parameters") {
    // k=1 on 400 nodes symmetrizes into a sparse forest-with-cycles that is
    // essentially never connected; with one attempt this must fail for the
    // frozen seed (verified disconnected), and deterministically so.
    auto rng = rng_for(1234, 0, StreamPurpose::Topology);
    CHECK_THROWS_AS(generate_overlay(400, 1, rng, 1), std::runtime_error);
}

TEST_CASE("edge list export round-trips") {
    const Overlay o = gen(50, 3, 9);
    const std::string path = "overlay_edges_test.txt";
    write_edge_list(o, path);

    std::ifstream in(path);
    REQUIRE(in.good());
    std::vector<std::pair<NodeId, NodeId>> edges;
    NodeId u, v;
    while (in >> u >> v) {
        CHECK(u < v);
        edges.emplace_back(u, v);
    }
    CHECK(edges.size() == o.edge_count());
    const Overlay rebuilt(50, edges);
    for (NodeId i = 0; i < 50; ++i) {
        const auto na = o.neighbors(i);
        const auto nb = rebuilt.neighbors(i);
        CHECK(std::equal(na.begin(), na.end(), nb.begin(), nb.end()));
    }
    std::remove(path.c_str());
}
