#include <doctest.h>

#include <random>
#include <sstream>

#include "satnc/error.hpp"
#include "satnc/paths.hpp"
#include "satnc/plg.hpp"
#include "support.hpp"

using namespace satnc;
using satnc::test::graph_from;

namespace {

struct Built {
    MultiGraph pruned;
    PathSet paths;
    Plg plg;
};

Built build(const MultiGraph& g, int s, const std::vector<int>& sinks) {
    Built b;
    b.paths = find_paths(g, s, sinks);
    b.pruned = prune(g, b.paths);
    b.plg = build_plg(b.pruned, s, sinks, b.paths);
    return b;
}

/// Independent cycle check: repeatedly strip nodes without predecessors.
bool has_cycle_by_peeling(const Digraph& g) {
    std::vector<int> indeg(static_cast<std::size_t>(g.size()), 0);
    for (const auto& out : g.out)
        for (int v : out) ++indeg[static_cast<std::size_t>(v)];
    std::vector<bool> gone(indeg.size(), false);
    bool progress = true;
    std::size_t removed = 0;
    while (progress) {
        progress = false;
        for (std::size_t u = 0; u < indeg.size(); ++u)
            if (!gone[u] && indeg[u] == 0) {
                gone[u] = true;
                ++removed;
                progress = true;
                for (int v : g.out[u]) --indeg[static_cast<std::size_t>(v)];
            }
    }
    return removed != indeg.size();
}

}  // namespace

TEST_CASE("butterfly PLG") {
    const auto g = read_graph_csv(test::fixture("butterfly.csv")).snapshots.at(0);
    const auto b = build(g, 0, {5, 6});
    CHECK(b.plg.size() == 12);
    CHECK(b.plg.nodes[0].label() == "src");
    CHECK(b.plg.nodes[1].label() == "sink(6)");
    CHECK(b.plg.nodes[3].label() == "edge(1,2,0)");
    CHECK(is_generalized_acyclic(b.plg));
    const auto order = topo_order(b.plg);
    CHECK(is_valid_order(b.plg.arcs, order.sequence));
    CHECK(order.sequence.front() == 0);

    // Every path is a walk src -> edges -> its sink marker.
    for (std::size_t k = 0; k < b.plg.sinks.size(); ++k)
        for (const auto& walk : b.plg.walks[k]) {
            const auto& out0 = b.plg.arcs.out[0];
            CHECK(std::find(out0.begin(), out0.end(), walk.front()) != out0.end());
            for (std::size_t i = 1; i < walk.size(); ++i) {
                const auto& o = b.plg.arcs.out[static_cast<std::size_t>(walk[i - 1])];
                CHECK(std::find(o.begin(), o.end(), walk[i]) != o.end());
            }
            const auto& last = b.plg.arcs.out[static_cast<std::size_t>(walk.back())];
            CHECK(std::find(last.begin(), last.end(), b.plg.sink_marker(k)) != last.end());
        }

    std::stringstream csv;
    write_plg_csv(b.plg, csv);
    CHECK(csv.str().rfind("from,to\n\"src\",\"edge(1,2,0)\"\n", 0) == 0);
}

TEST_CASE("cyclic pruned graph with an acyclic PLG") {
    const auto g = read_graph_csv(test::fixture("two_cycle.csv")).snapshots.at(0);
    CHECK(max_flow(g, 0, 5) == 2);
    CHECK(max_flow(g, 0, 6) == 2);
    const auto b = build(g, 0, {5, 6});
    CHECK(b.pruned.mult(3, 5) == 1);
    CHECK(b.pruned.mult(5, 3) == 1);
    CHECK(b.pruned.has_directed_cycle());
    CHECK(is_generalized_acyclic(b.plg));
    CHECK_FALSE(has_cycle_by_peeling(b.plg.arcs));
}

TEST_CASE("hand-picked paths can close a PLG cycle") {
    const auto g = read_graph_csv(test::fixture("plg_cycle.csv")).snapshots.at(0);
    const auto paths = read_paths_csv(test::fixture("plg_cycle_paths.csv"), g, 0);
    validate_paths(g, paths);
    const auto pruned = prune(g, paths);
    const auto plg = build_plg(pruned, 0, {5, 6, 7, 8}, paths);
    CHECK_FALSE(is_generalized_acyclic(plg));
    CHECK(has_cycle_by_peeling(plg.arcs));
    const auto cycle = find_cycle(plg.arcs);
    REQUIRE(cycle.has_value());
    for (std::size_t i = 0; i < cycle->size(); ++i) {
        const int u = (*cycle)[i], v = (*cycle)[(i + 1) % cycle->size()];
        const auto& o = plg.arcs.out[static_cast<std::size_t>(u)];
        CHECK(std::find(o.begin(), o.end(), v) != o.end());
    }
    try {
        topo_order(plg);
        FAIL("expected a cyclic PLG error");
    } catch (const CyclicPlgError& e) {
        CHECK(e.cycle().find("edge(2,3,0)") != std::string::npos);
    }
}

TEST_CASE("paths referencing missing copies are rejected") {
    const auto g = graph_from(3, {{1, 2, 1}, {2, 3, 1}});
    PathSet p;
    p.source = 0;
    p.sinks.push_back({2, 1, {Path{{{0, 1, 0}, {1, 2, 1}}}}, false});
    CHECK_THROWS_AS(build_plg(g, 0, {2}, p), ConsistencyError);
}

TEST_CASE("upstream-to-downstream order validation") {
    Digraph d;
    d.out.assign(7, {});
    for (auto [u, v] : std::vector<std::pair<int, int>>{{1, 2}, {1, 3}, {2, 4}, {4, 5}, {3, 6}, {5, 7}, {3, 7}, {5, 6}})
        d.add_arc(u - 1, v - 1);
    auto zero_based = [](std::vector<int> o) {
        for (auto& v : o) --v;
        return o;
    };
    CHECK(is_valid_order(d, zero_based({1, 2, 3, 4, 5, 6, 7})));
    CHECK(is_valid_order(d, zero_based({1, 2, 4, 5, 3, 6, 7})));
    CHECK(is_valid_order(d, zero_based({1, 2, 4, 3, 5, 6, 7})));
    CHECK_FALSE(is_valid_order(d, zero_based({1, 3, 6, 7, 2, 4, 5})));
    CHECK_FALSE(is_valid_order(d, zero_based({1, 2, 3})));
    const auto seq = topological_sequence(d);
    REQUIRE(seq.has_value());
    CHECK(is_valid_order(d, *seq));
    CHECK(*seq == zero_based({1, 2, 3, 4, 5, 6, 7}));
}

TEST_CASE("chain PLG has a unique order") {
    Digraph d;
    d.out.assign(4, {});
    d.add_arc(2, 0);
    d.add_arc(0, 3);
    d.add_arc(3, 1);
    CHECK(*topological_sequence(d) == std::vector<int>{2, 0, 3, 1});
}

TEST_CASE("acyclic graphs always give acyclic PLGs") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 80; ++trial) {
        // Forward edges only.
        MultiGraph g(9);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int i = 0; i < 9; ++i)
            for (int j = i + 1; j < 9; ++j)
                if (u(rng) < 0.4) g.set(i, j, 1 + static_cast<int>(rng() % 2));
        const auto b = build(g, 0, {6, 7, 8});
        CHECK(is_generalized_acyclic(b.plg));
        CHECK(b.plg.size() == 1 + 3 + b.pruned.copies());
        const auto order = topo_order(b.plg);
        CHECK(is_valid_order(b.plg.arcs, order.sequence));
        for (std::size_t v = 0; v < order.position.size(); ++v)
            CHECK(order.sequence[static_cast<std::size_t>(order.position[v] - 1)] == static_cast<int>(v));
    }
}
