#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "gembed/matrix.hpp"

namespace gembed {

struct Edge {
    int u, v;
    double w;
};

/// Immutable sparse weighted (di)graph over dense node ids [0, n).
///
/// Undirected graphs store both (u,v) and (v,u); edge_count() still counts
/// each unordered pair once. Neighbor lists are sorted by node id with no
/// duplicates, weights are nonnegative, and self-loops are rejected.
class Graph {
public:
    Graph() = default;

    int n() const { return n_; }
    bool directed() const { return directed_; }
    bool weighted() const { return weighted_; }
    std::size_t edge_count() const { return edge_count_; }

    int degree(int u) const { return static_cast<int>(offsets_[u + 1] - offsets_[u]); }
    double weighted_degree(int u) const { return strength_[u]; }

    std::span<const int> neighbors(int u) const {
        return {nbr_.data() + offsets_[u], offsets_[u + 1] - offsets_[u]};
    }
    std::span<const double> neighbor_weights(int u) const {
        return {wgt_.data() + offsets_[u], offsets_[u + 1] - offsets_[u]};
    }

    /// CSR slot of the first neighbor of u (adjacency-order edge indexing).
    std::size_t neighbor_offset(int u) const { return offsets_[u]; }

    bool has_edge(int u, int v) const;
    double edge_weight(int u, int v) const;

    /// Each undirected edge appears once with u < v; directed edges as stored.
    std::vector<Edge> edge_list() const;

    /// Adjacency as CSR (symmetric for undirected graphs).
    SparseMatrix adjacency() const;

    bool is_connected() const;
    int min_degree() const;

    friend class GraphBuilder;

private:
    int n_ = 0;
    bool directed_ = false;
    bool weighted_ = false;
    std::size_t edge_count_ = 0;
    std::vector<std::size_t> offsets_;
    std::vector<int> nbr_;
    std::vector<double> wgt_;
    std::vector<double> strength_;
};

/// Accumulates edges and produces a Graph. Duplicate (u,v) pairs collapse by
/// summing weights; negative weights and self-loops throw.
class GraphBuilder {
public:
    GraphBuilder(int n, bool directed, bool weighted);

    void add_edge(int u, int v, double w = 1.0);
    Graph build();

private:
    int n_;
    bool directed_, weighted_;
    std::vector<Edge> edges_;
};

struct NodeLabels {
    std::vector<std::vector<int>> labels;  // per-node sorted label ids
    int label_count = 0;

    bool empty() const;
    std::vector<int> histogram() const;
};

struct EdgeSplit {
    Graph train_graph;
    std::vector<std::pair<int, int>> heldout_edges;
    double fraction = 0.0;
    std::uint64_t seed = 0;
};

struct TransitionMatrix {
    SparseMatrix T;
    std::vector<int> zero_degree_nodes;
};

// --- ingestion / serialization -------------------------------------------

/// Edge-list format: one edge per line, "src dst [weight]", '#' comments.
Graph load_edge_list(std::istream& in, bool directed, bool weighted);
Graph load_edge_list_file(const std::string& path, bool directed, bool weighted);
void save_edge_list(const Graph& g, std::ostream& out);

/// Label format: "node_id<TAB>label[,label...]" per line.
NodeLabels load_labels(std::istream& in, int n);
NodeLabels load_labels_file(const std::string& path, int n);
void save_labels(const NodeLabels& labels, std::ostream& out);

// --- generation / derived matrices / protocols ---------------------------

/// Stochastic block model: node v in block v % blocks, within-block pairs
/// edged with p_in, cross-block with p_out. Labels are block ids.
std::pair<Graph, NodeLabels> generate_sbm(int n, int blocks, double p_in, double p_out,
                                          std::uint64_t seed);

/// L = D - W; normalized variant D^{-1/2} L D^{-1/2} with zero rows kept zero.
SparseMatrix laplacian(const Graph& g, bool normalized);

/// T = D^{-1} W, row-stochastic; zero-degree rows stay zero and are reported.
TransitionMatrix transition_matrix(const Graph& g);

/// Hold out round(fraction * |E|) edges sampled uniformly without replacement.
EdgeSplit split_edges(const Graph& g, double fraction, std::uint64_t seed);

/// Induced subgraph on k uniformly sampled distinct nodes. Returns the graph
/// and old-id-of-new-id mapping (sorted ascending).
std::pair<Graph, std::vector<int>> sample_node_subgraph(const Graph& g, int k,
                                                        std::uint64_t seed);

}  // namespace gembed
