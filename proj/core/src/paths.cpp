#include "satnc/paths.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "satnc/error.hpp"
#include "text_util.hpp"

namespace satnc {

namespace {

using Matrix = std::vector<int>;

struct Residual {
    int n;
    Matrix cap;

    explicit Residual(const MultiGraph& g) : n(g.size()), cap(static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) at(i, j) = g.mult(i, j);
    }
    int& at(int i, int j) { return cap[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)]; }
    int at(int i, int j) const { return cap[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)]; }
};

/// BFS over positive residual capacity; returns parent array (-1 unreached).
std::vector<int> bfs_parents(const Residual& r, int s) {
    std::vector<int> parent(static_cast<std::size_t>(r.n), -1);
    parent[static_cast<std::size_t>(s)] = s;
    std::deque<int> queue{s};
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        for (int v = 0; v < r.n; ++v)
            if (parent[static_cast<std::size_t>(v)] < 0 && r.at(u, v) > 0) {
                parent[static_cast<std::size_t>(v)] = u;
                queue.push_back(v);
            }
    }
    return parent;
}

/// Runs Edmonds-Karp in place on `r`; returns the flow value.
int edmonds_karp(Residual& r, int s, int t) {
    int flow = 0;
    while (true) {
        const auto parent = bfs_parents(r, s);
        if (parent[static_cast<std::size_t>(t)] < 0) break;
        int bottleneck = std::numeric_limits<int>::max();
        for (int v = t; v != s; v = parent[static_cast<std::size_t>(v)])
            bottleneck = std::min(bottleneck, r.at(parent[static_cast<std::size_t>(v)], v));
        for (int v = t; v != s; v = parent[static_cast<std::size_t>(v)]) {
            const int u = parent[static_cast<std::size_t>(v)];
            r.at(u, v) -= bottleneck;
            r.at(v, u) += bottleneck;
        }
        flow += bottleneck;
    }
    return flow;
}

void check_nodes(const MultiGraph& g, int s, int t) {
    if (s < 0 || t < 0 || s >= g.size() || t >= g.size()) throw ConsistencyError("node id out of range");
    if (s == t) throw ConsistencyError("source and sink must differ");
}

int pick(std::vector<int>& candidates, const PathOptions& opts) {
    if (opts.rng == nullptr || candidates.size() == 1) return candidates.front();
    std::uniform_int_distribution<std::size_t> d(0, candidates.size() - 1);
    return candidates[d(*opts.rng)];
}

Path path_from_nodes(const std::vector<int>& nodes) {
    Path p;
    for (std::size_t k = 1; k < nodes.size(); ++k) p.hops.push_back({nodes[k - 1], nodes[k], 0});
    return p;
}

}  // namespace

std::vector<int> Path::nodes() const {
    std::vector<int> out;
    if (hops.empty()) return out;
    out.push_back(hops.front().from);
    for (const auto& h : hops) out.push_back(h.to);
    return out;
}

const SinkPaths* PathSet::find(int sink) const {
    for (const auto& sp : sinks)
        if (sp.sink == sink) return &sp;
    return nullptr;
}

int PathSet::min_reachable_flow() const {
    int best = 0;
    for (const auto& sp : sinks)
        if (sp.max_flow > 0) best = best == 0 ? sp.max_flow : std::min(best, sp.max_flow);
    return best;
}

void FlowProblem::validate() const {
    const int n = graph.size();
    if (source < 0 || source >= n) throw ConsistencyError("source id out of range");
    std::set<int> seen;
    for (int t : sinks) {
        if (t < 0 || t >= n) throw ConsistencyError("sink id out of range");
        if (t == source) throw ConsistencyError("source cannot also be a sink");
        if (!seen.insert(t).second) throw ConsistencyError("sink listed twice");
    }
}

int max_flow(const MultiGraph& g, int s, int t) {
    check_nodes(g, s, t);
    Residual r(g);
    return edmonds_karp(r, s, t);
}

void assign_copies(std::vector<Path>& paths) {
    std::map<std::pair<int, int>, int> used;
    for (auto& p : paths)
        for (auto& h : p.hops) h.copy = used[{h.from, h.to}]++;
}

std::vector<Path> dijkstra_paths(const MultiGraph& g, int s, int t, int k, const PathOptions& opts) {
    check_nodes(g, s, t);
    if (k < 1) throw DomainError("dijkstra_paths needs k >= 1");
    Residual r(g);
    const int n = g.size();
    std::vector<Path> out;
    for (int iter = 0; iter < k; ++iter) {
        // Unit weights: distances to t by reverse BFS, then walk forward taking
        // the smallest admissible successor. This yields the lexicographically
        // smallest shortest path.
        std::vector<int> dist(static_cast<std::size_t>(n), -1);
        dist[static_cast<std::size_t>(t)] = 0;
        std::deque<int> queue{t};
        while (!queue.empty()) {
            const int v = queue.front();
            queue.pop_front();
            for (int u = 0; u < n; ++u)
                if (dist[static_cast<std::size_t>(u)] < 0 && r.at(u, v) > 0) {
                    dist[static_cast<std::size_t>(u)] = dist[static_cast<std::size_t>(v)] + 1;
                    queue.push_back(u);
                }
        }
        if (dist[static_cast<std::size_t>(s)] < 0) break;
        std::vector<int> nodes{s};
        int u = s;
        while (u != t) {
            std::vector<int> next;
            for (int v = 0; v < n; ++v)
                if (r.at(u, v) > 0 && dist[static_cast<std::size_t>(v)] == dist[static_cast<std::size_t>(u)] - 1)
                    next.push_back(v);
            u = pick(next, opts);
            nodes.push_back(u);
        }
        for (std::size_t h = 1; h < nodes.size(); ++h) --r.at(nodes[h - 1], nodes[h]);
        out.push_back(path_from_nodes(nodes));
    }
    assign_copies(out);
    return out;
}

std::vector<Path> ford_fulkerson_paths(const MultiGraph& g, int s, int t, const PathOptions& opts) {
    check_nodes(g, s, t);
    Residual r(g);
    const int value = edmonds_karp(r, s, t);
    const int n = g.size();

    // Net flow on i->j is what the residual lost relative to the capacity,
    // after cancelling opposite flows.
    Residual flow(g);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) flow.at(i, j) = std::max(0, g.mult(i, j) - r.at(i, j));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const int c = std::min(flow.at(i, j), flow.at(j, i));
            flow.at(i, j) -= c;
            flow.at(j, i) -= c;
        }

    std::vector<Path> out;
    for (int p = 0; p < value; ++p) {
        std::vector<int> nodes{s};
        std::vector<int> position(static_cast<std::size_t>(n), -1);
        position[static_cast<std::size_t>(s)] = 0;
        int u = s;
        while (u != t) {
            std::vector<int> next;
            for (int v = 0; v < n; ++v)
                if (flow.at(u, v) > 0) next.push_back(v);
            if (next.empty()) throw ConsistencyError("flow decomposition lost conservation");
            const int v = pick(next, opts);
            const int seen_at = position[static_cast<std::size_t>(v)];
            if (seen_at >= 0) {
                // Circulation: cancel it and resume from v.
                for (std::size_t k = static_cast<std::size_t>(seen_at); k + 1 < nodes.size(); ++k)
                    --flow.at(nodes[k], nodes[k + 1]);
                --flow.at(u, v);
                for (std::size_t k = static_cast<std::size_t>(seen_at) + 1; k < nodes.size(); ++k)
                    position[static_cast<std::size_t>(nodes[k])] = -1;
                nodes.resize(static_cast<std::size_t>(seen_at) + 1);
                u = v;
                continue;
            }
            position[static_cast<std::size_t>(v)] = static_cast<int>(nodes.size());
            nodes.push_back(v);
            u = v;
        }
        for (std::size_t h = 1; h < nodes.size(); ++h) --flow.at(nodes[h - 1], nodes[h]);
        out.push_back(path_from_nodes(nodes));
    }
    assign_copies(out);
    return out;
}

PathSet find_paths(const MultiGraph& g, int s, const std::vector<int>& sinks, const PathOptions& opts) {
    PathSet set;
    set.source = s;
    for (int t : sinks) {
        SinkPaths sp;
        sp.sink = t;
        sp.max_flow = max_flow(g, s, t);
        if (sp.max_flow > 0) {
            sp.paths = dijkstra_paths(g, s, t, sp.max_flow, opts);
            if (static_cast<int>(sp.paths.size()) < sp.max_flow) {
                sp.paths = ford_fulkerson_paths(g, s, t, opts);
                sp.used_fallback = true;
            }
        }
        set.sinks.push_back(std::move(sp));
    }
    return set;
}

PathSet find_paths(const FlowProblem& problem, const PathOptions& opts) {
    problem.validate();
    return find_paths(problem.graph, problem.source, problem.sinks, opts);
}

MultiGraph prune(const MultiGraph& g, const PathSet& paths) {
    MultiGraph out(g.size());
    for (const auto& sp : paths.sinks) {
        std::map<std::pair<int, int>, int> usage;
        for (const auto& p : sp.paths)
            for (const auto& h : p.hops) ++usage[{h.from, h.to}];
        for (const auto& [edge, count] : usage) {
            if (count > g.mult(edge.first, edge.second))
                throw ConsistencyError("path set uses more copies than the graph provides");
            if (count > out.mult(edge.first, edge.second)) out.set(edge.first, edge.second, count);
        }
    }
    return out;
}

PathSet trim_paths(const PathSet& paths, int rate) {
    PathSet out;
    out.source = paths.source;
    for (const auto& sp : paths.sinks) {
        if (sp.max_flow < rate || static_cast<int>(sp.paths.size()) < rate) continue;
        SinkPaths t = sp;
        t.paths.resize(static_cast<std::size_t>(rate));
        assign_copies(t.paths);
        out.sinks.push_back(std::move(t));
    }
    return out;
}

void validate_paths(const MultiGraph& g, const PathSet& paths) {
    for (const auto& sp : paths.sinks) {
        std::set<Hop> used;
        for (const auto& p : sp.paths) {
            if (p.hops.empty()) throw ConsistencyError("empty path");
            if (p.hops.front().from != paths.source || p.hops.back().to != sp.sink)
                throw ConsistencyError("path does not run from source to its sink");
            for (std::size_t k = 0; k < p.hops.size(); ++k) {
                const auto& h = p.hops[k];
                if (k > 0 && p.hops[k - 1].to != h.from) throw ConsistencyError("path hops are not contiguous");
                if (h.from < 0 || h.to < 0 || h.from >= g.size() || h.to >= g.size())
                    throw ConsistencyError("path node out of range");
                if (h.copy < 0 || h.copy >= g.mult(h.from, h.to))
                    throw ConsistencyError("path references missing edge copy " + std::to_string(h.from + 1) + "->" +
                                           std::to_string(h.to + 1) + "#" + std::to_string(h.copy));
                if (!used.insert(h).second) throw ConsistencyError("edge copy reused by paths of one sink");
            }
        }
    }
}

void write_paths_csv(const PathSet& paths, std::ostream& out) {
    out << "sink,path,nodes\n";
    for (const auto& sp : paths.sinks)
        for (std::size_t k = 0; k < sp.paths.size(); ++k) {
            out << sp.sink + 1 << ',' << k + 1 << ',';
            const auto nodes = sp.paths[k].nodes();
            for (std::size_t i = 0; i < nodes.size(); ++i) out << (i ? " " : "") << nodes[i] + 1;
            out << '\n';
        }
}

PathSet read_paths_csv(std::istream& in, const MultiGraph& g, int source) {
    std::map<int, std::vector<std::pair<int, Path>>> by_sink;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        const auto t = detail::trim(line);
        if (t.empty() || t.front() == '#') continue;
        if (header) {
            header = false;
            if (t.rfind("sink", 0) == 0) continue;
        }
        const auto f = detail::split(t);
        if (f.size() != 3) throw ConsistencyError("path csv rows are sink,path,nodes");
        const int sink = static_cast<int>(detail::parse_int(f[0], "sink")) - 1;
        const int index = static_cast<int>(detail::parse_int(f[1], "path"));
        std::vector<int> nodes;
        for (auto tok : detail::split(f[2], ' '))
            if (!tok.empty()) nodes.push_back(static_cast<int>(detail::parse_int(tok, "node")) - 1);
        if (nodes.size() < 2) throw ConsistencyError("path needs at least one hop");
        by_sink[sink].emplace_back(index, path_from_nodes(nodes));
    }
    PathSet set;
    set.source = source;
    for (auto& [sink, indexed] : by_sink) {
        std::stable_sort(indexed.begin(), indexed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        SinkPaths sp;
        sp.sink = sink;
        sp.max_flow = max_flow(g, source, sink);
        for (auto& [idx, p] : indexed) sp.paths.push_back(std::move(p));
        assign_copies(sp.paths);
        set.sinks.push_back(std::move(sp));
    }
    validate_paths(g, set);
    return set;
}

PathSet read_paths_csv(const std::filesystem::path& file, const MultiGraph& g, int source) {
    std::ifstream in(file);
    if (!in) throw IoError("cannot open path file " + file.string());
    return read_paths_csv(in, g, source);
}

}  // namespace satnc
