#include "satnc/multigraph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>

#include "satnc/error.hpp"
#include "text_util.hpp"

namespace satnc {

MultiGraph::MultiGraph(int n) : n_(n), mult_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0) {}

void MultiGraph::set(int i, int j, int m) {
    if (i < 0 || j < 0 || i >= n_ || j >= n_) throw ConsistencyError("edge endpoint out of range");
    if (i == j && m != 0) throw ConsistencyError("self loops are not allowed");
    if (m < 0) throw ConsistencyError("multiplicity must be non-negative");
    mult_[index(i, j)] = m;
}

long long MultiGraph::copies() const {
    long long total = 0;
    for (int m : mult_) total += m;
    return total;
}

std::vector<std::pair<int, int>> MultiGraph::edges() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            if (mult(i, j) > 0) out.emplace_back(i, j);
    return out;
}

bool MultiGraph::has_directed_cycle() const {
    // Kahn's algorithm: a cycle remains iff some node never reaches in-degree 0.
    std::vector<int> indeg(static_cast<std::size_t>(n_), 0);
    for (auto [i, j] : edges()) ++indeg[static_cast<std::size_t>(j)];
    std::vector<int> ready;
    for (int v = 0; v < n_; ++v)
        if (indeg[static_cast<std::size_t>(v)] == 0) ready.push_back(v);
    int seen = 0;
    while (!ready.empty()) {
        const int u = ready.back();
        ready.pop_back();
        ++seen;
        for (int v = 0; v < n_; ++v)
            if (mult(u, v) > 0 && --indeg[static_cast<std::size_t>(v)] == 0) ready.push_back(v);
    }
    return seen != n_;
}

MultiGraph intersect(const MultiGraph& a, const MultiGraph& b) {
    if (a.size() != b.size()) throw ConsistencyError("cannot intersect graphs of different size");
    MultiGraph out(a.size());
    for (int i = 0; i < a.size(); ++i)
        for (int j = 0; j < a.size(); ++j) {
            const int m = std::min(a.mult(i, j), b.mult(i, j));
            if (m > 0) out.set(i, j, m);
        }
    return out;
}

int GraphSeries::step_at(double t_s) const {
    for (std::size_t k = 0; k < times_s.size(); ++k)
        if (std::abs(times_s[k] - t_s) < 1e-6) return static_cast<int>(k);
    return -1;
}

void write_graph_csv(const MultiGraph& g, std::ostream& out) {
    out << "i,j,mult\n";
    for (auto [i, j] : g.edges()) out << i + 1 << ',' << j + 1 << ',' << g.mult(i, j) << '\n';
}

void write_graph_csv(const MultiGraph& g, const std::filesystem::path& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw IoError("cannot open " + file.string() + " for writing");
    write_graph_csv(g, out);
}

GraphSeries read_graph_csv(std::istream& in, int num_nodes) {
    struct Row {
        double t_min;
        int i, j, m;
    };
    std::vector<Row> rows;
    std::string line;
    bool header_seen = false;
    bool timed = false;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto t = detail::trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto f = detail::split(t);
        if (!header_seen) {
            header_seen = true;
            if (f.size() == 4 && f[0] == "t_min") { timed = true; continue; }
            if (f.size() == 3 && f[0] == "i") continue;
            timed = f.size() == 4;
        }
        const std::size_t expect = timed ? 4 : 3;
        if (f.size() != expect)
            throw ConsistencyError("graph csv line " + std::to_string(lineno) + ": expected " +
                                   (timed ? "t_min,i,j,mult" : "i,j,mult"));
        const std::size_t o = timed ? 1 : 0;
        rows.push_back({timed ? detail::parse_double(f[0], "t_min") : 0.0,
                        static_cast<int>(detail::parse_int(f[o], "i")),
                        static_cast<int>(detail::parse_int(f[o + 1], "j")),
                        static_cast<int>(detail::parse_int(f[o + 2], "mult"))});
    }
    int max_index = 0;
    std::map<double, std::vector<Row>> by_time;
    for (const auto& r : rows) {
        if (r.i < 1 || r.j < 1) throw ConsistencyError("graph node indices are 1-based");
        max_index = std::max({max_index, r.i, r.j});
        by_time[r.t_min].push_back(r);
    }
    const int n = num_nodes > 0 ? num_nodes : max_index;
    if (max_index > n) throw ConsistencyError("graph csv references node beyond configured node count");

    GraphSeries series;
    if (by_time.empty()) {
        series.times_s.push_back(0.0);
        series.snapshots.emplace_back(n);
        return series;
    }
    for (auto& [t_min, rs] : by_time) {
        MultiGraph g(n);
        for (const auto& r : rs) g.add(r.i - 1, r.j - 1, r.m);
        series.times_s.push_back(t_min * 60.0);
        series.snapshots.push_back(std::move(g));
    }
    if (series.times_s.size() > 1) series.dt_s = series.times_s[1] - series.times_s[0];
    return series;
}

GraphSeries read_graph_csv(const std::filesystem::path& file, int num_nodes) {
    std::ifstream in(file);
    if (!in) throw IoError("cannot open graph file " + file.string());
    return read_graph_csv(in, num_nodes);
}

}  // namespace satnc
