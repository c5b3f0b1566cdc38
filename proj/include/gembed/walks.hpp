#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "gembed/graph.hpp"
#include "gembed/rng.hpp"

namespace gembed {

struct WalkConfig {
    int num_walks = 10;   // walks started per node
    int walk_length = 80;
    int window = 10;      // context size, consumed by skip-gram training
    double p = 1.0;       // return parameter
    double q = 1.0;       // in-out parameter
    std::uint64_t seed = 12345;
};

struct WalkCorpus {
    std::vector<std::vector<int>> walks;
    int n = 0;  // node count of the source graph
};

/// Vose alias sampler over a fixed discrete distribution.
class AliasTable {
public:
    AliasTable() = default;
    explicit AliasTable(const std::vector<double>& weights);
    int sample(Rng& rng) const;
    bool empty() const { return prob_.empty(); }

private:
    std::vector<double> prob_;
    std::vector<int> alias_;
};

/// Second-order biased transitions: from state (prev, cur) step to neighbor
/// x of cur with probability proportional to w(cur,x) * alpha(prev, x),
/// alpha = 1/p if x == prev, 1 if x adjacent to prev, 1/q otherwise.
/// Per-edge alias tables are precomputed when their total size fits the
/// memory cap; otherwise steps fall back to a linear scan.
class Node2VecSampler {
public:
    Node2VecSampler(const Graph& g, double p, double q,
                    std::size_t alias_entry_cap = 8u << 20);

    /// First step of a walk (no previous node): weighted neighbor choice.
    int first_step(int cur, Rng& rng) const;

    /// Biased step; prev must be a neighbor of cur (the walk invariant).
    /// Returns -1 when cur has no out-neighbors.
    int step(int prev, int cur, Rng& rng) const;

    bool uses_alias_tables() const { return !edge_tables_.empty() || second_order_trivial_; }

private:
    const Graph& g_;
    double p_, q_;
    bool second_order_trivial_;  // p == q == 1 reduces to first-order steps
    std::vector<AliasTable> node_tables_;
    std::vector<AliasTable> edge_tables_;  // indexed by CSR slot of (prev -> cur)

    double alpha(int prev, int x) const;
};

/// num_walks walks from every node, each up to walk_length; zero-degree
/// starts yield single-node walks. Start order is reshuffled every pass and
/// each walk draws from an independent stream hash(seed, pass, node), so the
/// corpus does not depend on thread count.
WalkCorpus generate_walks(const Graph& g, const WalkConfig& cfg, int threads = 1);

/// One walk per line, space-separated node ids.
void save_walks(const WalkCorpus& corpus, std::ostream& out);
WalkCorpus load_walks(std::istream& in, int n);

}  // namespace gembed
