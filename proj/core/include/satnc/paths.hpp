#pragma once

#include <filesystem>
#include <iosfwd>
#include <random>
#include <vector>

#include "satnc/multigraph.hpp"

namespace satnc {

/// One traversal of edge copy `copy` of from->to.
struct Hop {
    int from = 0;
    int to = 0;
    int copy = 0;

    friend bool operator==(const Hop&, const Hop&) = default;
    friend auto operator<=>(const Hop&, const Hop&) = default;
};

struct Path {
    std::vector<Hop> hops;

    std::vector<int> nodes() const;
    int length() const { return static_cast<int>(hops.size()); }
    friend bool operator==(const Path&, const Path&) = default;
};

struct SinkPaths {
    int sink = 0;
    int max_flow = 0;
    std::vector<Path> paths;
    /// Greedy shortest-path search fell short and Ford-Fulkerson was used.
    bool used_fallback = false;

    bool unreachable() const { return max_flow == 0; }
};

struct PathSet {
    int source = 0;
    std::vector<SinkPaths> sinks;

    const SinkPaths* find(int sink) const;
    /// Smallest max-flow among reachable sinks, 0 if none are reachable.
    int min_reachable_flow() const;
};

struct FlowProblem {
    MultiGraph graph;
    int source = 0;
    std::vector<int> sinks;

    /// Throws ConsistencyError if the source is a sink, ids are out of range,
    /// or sinks repeat.
    void validate() const;
};

/// Tie-breaking control. Without an engine, ties resolve to the smallest node
/// id, which makes every search reproducible.
struct PathOptions {
    std::mt19937_64* rng = nullptr;
};

/// Maximum s->t flow where each edge copy carries one unit.
int max_flow(const MultiGraph& g, int s, int t);

/// Greedy edge-disjoint shortest paths (hop count): each found path consumes
/// one copy of every edge it uses. May return fewer than k paths even when the
/// max-flow allows k.
std::vector<Path> dijkstra_paths(const MultiGraph& g, int s, int t, int k, const PathOptions& opts = {});

/// Exactly max_flow(g,s,t) edge-disjoint simple paths from an integral max flow.
std::vector<Path> ford_fulkerson_paths(const MultiGraph& g, int s, int t, const PathOptions& opts = {});

/// Per sink: greedy search first, Ford-Fulkerson when it finds fewer than the
/// max-flow.
PathSet find_paths(const MultiGraph& g, int s, const std::vector<int>& sinks, const PathOptions& opts = {});
PathSet find_paths(const FlowProblem& problem, const PathOptions& opts = {});

/// Keeps only edge copies used by some path. Distinct paths of one sink use
/// distinct copies, different sinks may share a copy, so the multiplicity kept
/// is the largest per-sink usage count.
MultiGraph prune(const MultiGraph& g, const PathSet& paths);

/// Restricts the path set to sinks whose max-flow reaches `rate`, each with
/// its first `rate` paths.
PathSet trim_paths(const PathSet& paths, int rate);

/// Renumbers hop copy indices so each sink's paths use copies 0,1,... of every
/// edge in path order.
void assign_copies(std::vector<Path>& paths);

/// Throws ConsistencyError if a path does not run source->sink, repeats an
/// edge copy, or uses copies the graph does not have.
void validate_paths(const MultiGraph& g, const PathSet& paths);

/// Path plan CSV: `sink,path,nodes` with 1-based, space-separated node lists.
void write_paths_csv(const PathSet& paths, std::ostream& out);
/// Reads a path plan; max-flows are recomputed from `g`.
PathSet read_paths_csv(std::istream& in, const MultiGraph& g, int source);
PathSet read_paths_csv(const std::filesystem::path& file, const MultiGraph& g, int source);

}  // namespace satnc
