#pragma once

#include <filesystem>
#include <iosfwd>
#include <utility>
#include <vector>

namespace satnc {

/// Directed multigraph on nodes 0..n-1; mult(i,j) counts parallel unit-capacity
/// copies of the edge i->j. Full-duplex links are two independent bundles.
class MultiGraph {
public:
    MultiGraph() = default;
    explicit MultiGraph(int n);

    int size() const { return n_; }
    int mult(int i, int j) const { return mult_[index(i, j)]; }
    void set(int i, int j, int m);
    void add(int i, int j, int m = 1) { set(i, j, mult(i, j) + m); }

    /// Total number of edge copies.
    long long copies() const;
    /// Node pairs with non-zero multiplicity, row-major order.
    std::vector<std::pair<int, int>> edges() const;
    bool has_directed_cycle() const;

    friend bool operator==(const MultiGraph&, const MultiGraph&) = default;

private:
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j);
    }

    int n_ = 0;
    std::vector<int> mult_;
};

/// Edgewise minimum multiplicity.
MultiGraph intersect(const MultiGraph& a, const MultiGraph& b);

/// Time-indexed graphs, e.g. the quantized snapshots of a constellation run.
struct GraphSeries {
    double dt_s = 60.0;
    std::vector<double> times_s;
    std::vector<MultiGraph> snapshots;

    int num_steps() const { return static_cast<int>(snapshots.size()); }
    /// Index of the snapshot at `t_s`, or -1.
    int step_at(double t_s) const;
};

/// Edge-list CSV `i,j,mult`, 1-based node indices.
void write_graph_csv(const MultiGraph& g, std::ostream& out);
void write_graph_csv(const MultiGraph& g, const std::filesystem::path& file);

/// Reads `i,j,mult` (one snapshot at t=0) or `t_min,i,j,mult` (one snapshot
/// per distinct t). `num_nodes` of 0 infers n from the largest index.
GraphSeries read_graph_csv(std::istream& in, int num_nodes = 0);
GraphSeries read_graph_csv(const std::filesystem::path& file, int num_nodes = 0);

}  // namespace satnc
