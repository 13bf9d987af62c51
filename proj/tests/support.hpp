#pragma once

#include <algorithm>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "satnc/field.hpp"
#include "satnc/multigraph.hpp"
#include "satnc/paths.hpp"

namespace satnc::test {

inline std::filesystem::path fixture(const std::string& name) {
    return std::filesystem::path(SATNC_FIXTURE_DIR) / name;
}

/// Builds a graph from 1-based (i, j, mult) triples.
inline MultiGraph graph_from(int n, std::initializer_list<std::array<int, 3>> edges) {
    MultiGraph g(n);
    for (const auto& e : edges) g.add(e[0] - 1, e[1] - 1, e[2]);
    return g;
}

inline MultiGraph random_graph(std::mt19937_64& rng, int n, double p, int max_mult) {
    MultiGraph g(n);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> m(1, max_mult);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && u(rng) < p) g.set(i, j, m(rng));
    return g;
}

/// All simple s-t node sequences.
inline std::vector<std::vector<int>> simple_paths(const MultiGraph& g, int s, int t) {
    std::vector<std::vector<int>> out;
    std::vector<int> stack{s};
    std::vector<bool> on(static_cast<std::size_t>(g.size()), false);
    on[static_cast<std::size_t>(s)] = true;
    std::function<void(int)> dfs = [&](int u) {
        if (u == t) {
            out.push_back(stack);
            return;
        }
        for (int v = 0; v < g.size(); ++v)
            if (g.mult(u, v) > 0 && !on[static_cast<std::size_t>(v)]) {
                on[static_cast<std::size_t>(v)] = true;
                stack.push_back(v);
                dfs(v);
                stack.pop_back();
                on[static_cast<std::size_t>(v)] = false;
            }
    };
    dfs(s);
    return out;
}

/// Largest number of simple s-t paths that fit in the edge multiplicities,
/// by exhaustive search over path multisets.
inline int brute_force_disjoint_paths(const MultiGraph& g, int s, int t) {
    const auto paths = simple_paths(g, s, t);
    int out_cap = 0, in_cap = 0;
    for (int v = 0; v < g.size(); ++v) {
        out_cap += g.mult(s, v);
        in_cap += g.mult(v, t);
    }
    const int bound = std::min(out_cap, in_cap);
    MultiGraph caps = g;
    int best = 0;
    std::function<void(std::size_t, int)> search = [&](std::size_t from, int count) {
        best = std::max(best, count);
        if (best >= bound) return;
        for (std::size_t i = from; i < paths.size(); ++i) {
            const auto& p = paths[i];
            bool fits = true;
            for (std::size_t k = 0; k + 1 < p.size() && fits; ++k) fits = caps.mult(p[k], p[k + 1]) > 0;
            if (!fits) continue;
            for (std::size_t k = 0; k + 1 < p.size(); ++k) caps.add(p[k], p[k + 1], -1);
            search(i, count + 1);
            for (std::size_t k = 0; k + 1 < p.size(); ++k) caps.add(p[k], p[k + 1], 1);
            if (best >= bound) return;
        }
    };
    search(0, 0);
    return best;
}

/// Minimum s-t cut capacity by enumerating every vertex bipartition.
inline int brute_force_min_cut(const MultiGraph& g, int s, int t) {
    const int n = g.size();
    int best = -1;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (!(mask >> s & 1u) || (mask >> t & 1u)) continue;
        int cut = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if ((mask >> i & 1u) && !(mask >> j & 1u)) cut += g.mult(i, j);
        if (best < 0 || cut < best) best = cut;
    }
    return best;
}

/// Carry-less product reduced by the field polynomial, bit by bit.
inline Element slow_mul(Element a, Element b, int m) {
    const std::uint32_t poly = reduction_polynomial(m);
    std::uint64_t acc = 0;
    for (int i = 0; i < m; ++i)
        if (b >> i & 1u) acc ^= static_cast<std::uint64_t>(a) << i;
    for (int bit = 2 * m - 2; bit >= m; --bit)
        if (acc >> bit & 1u) acc ^= static_cast<std::uint64_t>(poly) << (bit - m);
    return static_cast<Element>(acc);
}

/// Rank from the size of the span, built by closing the vector set under
/// scaled addition. Only usable for tiny fields and dimensions.
inline std::size_t span_rank(const Field& f, const std::vector<GfVector>& vectors, std::size_t dim) {
    std::set<GfVector> span{GfVector(dim, 0)};
    for (const auto& v : vectors) {
        std::set<GfVector> next = span;
        for (const auto& w : span)
            for (Element a = 1; a < f.order(); ++a) {
                GfVector x = w;
                for (std::size_t i = 0; i < dim; ++i) x[i] ^= f.mul(a, v[i]);
                next.insert(x);
            }
        span.swap(next);
    }
    std::size_t r = 0;
    for (std::size_t size = 1; size < span.size(); size *= f.order()) ++r;
    return r;
}

}  // namespace satnc::test

#include "satnc/code.hpp"
#include "satnc/plg.hpp"

namespace satnc::test {

struct MulticastInstance {
    MultiGraph graph;
    int source = 0;
    std::vector<int> sinks;
    int rate = 0;
    PathSet paths;
    MultiGraph pruned;
    Plg plg;
    TopoOrder order;
};

/// Random digraph with n <= 10, 1-3 sinks and a rate in 1..3 that every sink
/// reaches; redrawn until the PLG is acyclic.
inline MulticastInstance random_multicast_instance(std::mt19937_64& rng) {
    while (true) {
        MulticastInstance in;
        const int n = 4 + static_cast<int>(rng() % 7);
        in.graph = random_graph(rng, n, 0.45, 2);
        const int nsinks = 1 + static_cast<int>(rng() % 3);
        std::vector<int> nodes;
        for (int v = 1; v < n; ++v) nodes.push_back(v);
        std::shuffle(nodes.begin(), nodes.end(), rng);
        in.sinks.assign(nodes.begin(), nodes.begin() + std::min<int>(nsinks, n - 1));
        std::sort(in.sinks.begin(), in.sinks.end());
        const PathSet all = find_paths(in.graph, 0, in.sinks);
        int h = 3;
        for (const auto& sp : all.sinks) h = std::min(h, sp.max_flow);
        if (h < 1) continue;
        in.rate = 1 + static_cast<int>(rng() % static_cast<unsigned>(h));
        in.paths = trim_paths(all, in.rate);
        in.pruned = prune(in.graph, in.paths);
        in.plg = build_plg(in.pruned, 0, in.sinks, in.paths);
        if (!is_generalized_acyclic(in.plg)) continue;
        in.order = topo_order(in.plg);
        return in;
    }
}

/// Checks f_e = sum_d k(d,e) f_d for every edge copy; returns the number of violations.
inline int def1_violations(const NetworkCode& code) {
    const Field f(code.field);
    const auto r = static_cast<std::size_t>(code.rate);
    int bad = 0;
    for (const auto& [x, lk] : code.lek)
        for (std::size_t j = 0; j < lk.outputs.size(); ++j) {
            GfVector sum(r, 0);
            for (std::size_t i = 0; i < lk.inputs.size(); ++i) {
                const Hop& d = lk.inputs[i];
                GfVector fd(r, 0);
                if (is_imaginary(d))
                    fd[static_cast<std::size_t>(d.copy)] = 1;
                else
                    fd = code.gek.at(d);
                f.axpy(lk.coeff.at(i, j), fd, sum);
            }
            if (sum != code.gek.at(lk.outputs[j])) ++bad;
        }
    return bad;
}

}  // namespace satnc::test
