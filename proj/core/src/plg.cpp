#include "satnc/plg.hpp"

#include <algorithm>
#include <functional>
#include <ostream>
#include <queue>
#include <set>

#include "satnc/error.hpp"

namespace satnc {

void Digraph::add_arc(int u, int v) {
    auto& adj = out[static_cast<std::size_t>(u)];
    const auto it = std::lower_bound(adj.begin(), adj.end(), v);
    if (it == adj.end() || *it != v) adj.insert(it, v);
}

std::size_t Digraph::arc_count() const {
    std::size_t total = 0;
    for (const auto& adj : out) total += adj.size();
    return total;
}

std::optional<std::vector<int>> find_cycle(const Digraph& g) {
    enum : char { White, Grey, Black };
    const auto n = static_cast<std::size_t>(g.size());
    std::vector<char> colour(n, White);
    std::vector<int> parent(n, -1);
    struct Frame {
        int node;
        std::size_t next;
    };
    for (int root = 0; root < g.size(); ++root) {
        if (colour[static_cast<std::size_t>(root)] != White) continue;
        std::vector<Frame> stack{{root, 0}};
        colour[static_cast<std::size_t>(root)] = Grey;
        while (!stack.empty()) {
            auto& f = stack.back();
            const auto& adj = g.out[static_cast<std::size_t>(f.node)];
            if (f.next == adj.size()) {
                colour[static_cast<std::size_t>(f.node)] = Black;
                stack.pop_back();
                continue;
            }
            const int v = adj[f.next++];
            if (colour[static_cast<std::size_t>(v)] == Grey) {
                std::vector<int> cycle;
                for (int u = f.node; u != v; u = parent[static_cast<std::size_t>(u)]) cycle.push_back(u);
                cycle.push_back(v);
                std::reverse(cycle.begin(), cycle.end());
                return cycle;
            }
            if (colour[static_cast<std::size_t>(v)] == White) {
                colour[static_cast<std::size_t>(v)] = Grey;
                parent[static_cast<std::size_t>(v)] = f.node;
                stack.push_back({v, 0});
            }
        }
    }
    return std::nullopt;
}

std::optional<std::vector<int>> topological_sequence(const Digraph& g) {
    const auto n = static_cast<std::size_t>(g.size());
    std::vector<int> indeg(n, 0);
    for (const auto& adj : g.out)
        for (int v : adj) ++indeg[static_cast<std::size_t>(v)];
    std::priority_queue<int, std::vector<int>, std::greater<>> ready;
    for (std::size_t v = 0; v < n; ++v)
        if (indeg[v] == 0) ready.push(static_cast<int>(v));
    std::vector<int> seq;
    seq.reserve(n);
    while (!ready.empty()) {
        const int u = ready.top();
        ready.pop();
        seq.push_back(u);
        for (int v : g.out[static_cast<std::size_t>(u)])
            if (--indeg[static_cast<std::size_t>(v)] == 0) ready.push(v);
    }
    if (seq.size() != n) return std::nullopt;
    return seq;
}

bool is_valid_order(const Digraph& g, std::span<const int> sequence) {
    const auto n = static_cast<std::size_t>(g.size());
    if (sequence.size() != n) return false;
    std::vector<int> pos(n, -1);
    for (std::size_t k = 0; k < n; ++k) {
        const int v = sequence[k];
        if (v < 0 || static_cast<std::size_t>(v) >= n || pos[static_cast<std::size_t>(v)] >= 0) return false;
        pos[static_cast<std::size_t>(v)] = static_cast<int>(k);
    }
    for (std::size_t u = 0; u < n; ++u)
        for (int v : g.out[u])
            if (pos[u] >= pos[static_cast<std::size_t>(v)]) return false;
    return true;
}

std::string PlgNode::label() const {
    switch (kind) {
        case PlgKind::Source: return "src";
        case PlgKind::Sink: return "sink(" + std::to_string(node + 1) + ")";
        case PlgKind::Edge:
            return "edge(" + std::to_string(edge.from + 1) + "," + std::to_string(edge.to + 1) + "," +
                   std::to_string(edge.copy) + ")";
    }
    return {};
}

std::vector<int> Plg::predecessors(int v) const {
    std::vector<int> preds;
    for (int u = 0; u < size(); ++u)
        if (std::binary_search(arcs.out[static_cast<std::size_t>(u)].begin(), arcs.out[static_cast<std::size_t>(u)].end(), v))
            preds.push_back(u);
    return preds;
}

Plg build_plg(const MultiGraph& pruned, int source, const std::vector<int>& sinks, const PathSet& paths) {
    Plg plg;
    plg.source = source;
    plg.sinks = sinks;
    plg.nodes.push_back({PlgKind::Source, source, {}});
    for (int t : sinks) plg.nodes.push_back({PlgKind::Sink, t, {}});
    for (auto [i, j] : pruned.edges())
        for (int c = 0; c < pruned.mult(i, j); ++c) {
            const Hop h{i, j, c};
            plg.edge_node.emplace(h, static_cast<int>(plg.nodes.size()));
            plg.nodes.push_back({PlgKind::Edge, -1, h});
        }
    plg.arcs.out.assign(plg.nodes.size(), {});

    for (const auto& [h, v] : plg.edge_node) {
        if (h.from == source) plg.arcs.add_arc(0, v);
        for (std::size_t k = 0; k < sinks.size(); ++k)
            if (h.to == sinks[k]) plg.arcs.add_arc(v, plg.sink_marker(k));
    }

    plg.walks.assign(sinks.size(), {});
    for (std::size_t k = 0; k < sinks.size(); ++k) {
        const SinkPaths* sp = paths.find(sinks[k]);
        if (sp == nullptr) continue;
        for (const auto& p : sp->paths) {
            std::vector<int> walk;
            for (const auto& h : p.hops) {
                const auto it = plg.edge_node.find(h);
                if (it == plg.edge_node.end())
                    throw ConsistencyError("path uses edge copy " + PlgNode{PlgKind::Edge, -1, h}.label() +
                                           " missing from the pruned graph");
                if (!walk.empty()) plg.arcs.add_arc(walk.back(), it->second);
                walk.push_back(it->second);
            }
            plg.walks[k].push_back(std::move(walk));
        }
    }
    return plg;
}

bool is_generalized_acyclic(const Plg& plg) { return !find_cycle(plg.arcs).has_value(); }

std::string describe_cycle(const Plg& plg, const std::vector<int>& cycle) {
    std::string out;
    for (int v : cycle) out += plg.nodes[static_cast<std::size_t>(v)].label() + " -> ";
    if (!cycle.empty()) out += plg.nodes[static_cast<std::size_t>(cycle.front())].label();
    return out;
}

TopoOrder topo_order(const Plg& plg) {
    if (auto cycle = find_cycle(plg.arcs))
        throw CyclicPlgError("paths line-graph is cyclic: a convolutional network code is required",
                             describe_cycle(plg, *cycle));
    auto seq = topological_sequence(plg.arcs);
    TopoOrder order;
    order.sequence = std::move(*seq);
    order.position.assign(order.sequence.size(), 0);
    for (std::size_t k = 0; k < order.sequence.size(); ++k)
        order.position[static_cast<std::size_t>(order.sequence[k])] = static_cast<int>(k) + 1;
    return order;
}

void write_plg_csv(const Plg& plg, std::ostream& out) {
    out << "from,to\n";
    for (int u = 0; u < plg.size(); ++u)
        for (int v : plg.arcs.out[static_cast<std::size_t>(u)])
            out << '"' << plg.nodes[static_cast<std::size_t>(u)].label() << "\",\""
                << plg.nodes[static_cast<std::size_t>(v)].label() << "\"\n";
}

}  // namespace satnc
