#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "satnc/multigraph.hpp"
#include "satnc/paths.hpp"

namespace satnc {

/// Plain adjacency-list digraph on 0..n-1.
struct Digraph {
    std::vector<std::vector<int>> out;

    int size() const { return static_cast<int>(out.size()); }
    void add_arc(int u, int v);
    std::size_t arc_count() const;
};

/// Iterative DFS; returns the node sequence of one directed cycle (first node
/// not repeated) or nothing when the digraph is acyclic.
std::optional<std::vector<int>> find_cycle(const Digraph& g);

/// Kahn's algorithm with smallest-id tie-breaking. Empty when cyclic.
std::optional<std::vector<int>> topological_sequence(const Digraph& g);

/// True iff `sequence` is a permutation of the nodes and every arc goes from an
/// earlier to a later position.
bool is_valid_order(const Digraph& g, std::span<const int> sequence);

enum class PlgKind { Source, Sink, Edge };

struct PlgNode {
    PlgKind kind = PlgKind::Edge;
    /// Graph node of a source or sink marker.
    int node = -1;
    /// Graph edge copy of an Edge node.
    Hop edge{};

    /// `src`, `sink(t)` or `edge(i,j,copy)`, with 1-based graph node ids.
    std::string label() const;
};

/// Paths line-graph: one node per edge copy of the pruned graph plus the source
/// and sink markers; arcs follow only the transitions the chosen paths use.
struct Plg {
    int source = 0;
    std::vector<int> sinks;
    /// Index 0 is the source marker, 1..|sinks| the sink markers (same order
    /// as `sinks`), then the edge copies sorted by (from, to, copy).
    std::vector<PlgNode> nodes;
    Digraph arcs;
    std::map<Hop, int> edge_node;
    /// walks[k][p]: PLG edge nodes visited by path p of sinks[k].
    std::vector<std::vector<std::vector<int>>> walks;

    int size() const { return static_cast<int>(nodes.size()); }
    int sink_marker(std::size_t k) const { return 1 + static_cast<int>(k); }
    int first_edge_node() const { return 1 + static_cast<int>(sinks.size()); }
    std::vector<int> predecessors(int v) const;
};

/// Builds the PLG induced by `paths` on `pruned`. Throws ConsistencyError when
/// a path references an edge copy the pruned graph does not hold.
Plg build_plg(const MultiGraph& pruned, int source, const std::vector<int>& sinks, const PathSet& paths);

bool is_generalized_acyclic(const Plg& plg);

struct TopoOrder {
    /// PLG node ids from upstream to downstream.
    std::vector<int> sequence;
    /// position[v] in 1..|LV|.
    std::vector<int> position;
};

/// Deterministic upstream-to-downstream order of the PLG. Throws
/// CyclicPlgError (carrying the offending cycle) when none exists.
TopoOrder topo_order(const Plg& plg);

std::string describe_cycle(const Plg& plg, const std::vector<int>& cycle);

/// Arc list CSV `from,to` with quoted node labels.
void write_plg_csv(const Plg& plg, std::ostream& out);

}  // namespace satnc
