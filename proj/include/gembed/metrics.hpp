#pragma once

#include <cstdint>
#include <span>
#include <unordered_set>
#include <utility>
#include <vector>

namespace gembed {

/// Hashed set of node pairs; undirected sets canonicalize (i,j) ordering.
class PairSet {
public:
    PairSet(bool directed = false) : directed_(directed) {}

    void insert(int i, int j) { set_.insert(key(i, j)); }
    bool contains(int i, int j) const { return set_.count(key(i, j)) > 0; }
    std::size_t size() const { return set_.size(); }

private:
    std::uint64_t key(int i, int j) const {
        if (!directed_ && i > j) std::swap(i, j);
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 32) |
               static_cast<std::uint32_t>(j);
    }
    bool directed_;
    std::unordered_set<std::uint64_t> set_;
};

/// Fraction of observed pairs among the top k of a ranked pair list.
double precision_at_k(std::span<const std::pair<int, int>> ranked, const PairSet& observed,
                      std::size_t k);

/// Average precision of one ranked candidate list against an observed set:
/// sum over hit positions of Pr@k, divided by the number of hits.
/// Returns -1 when the ranking contains no observed entry.
double average_precision(std::span<const int> ranking, const std::unordered_set<int>& observed);

/// Mean AP over nodes; nodes whose ranking holds no observed edge are
/// excluded from the mean. Throws if every node is excluded.
double map_score(const std::vector<std::vector<int>>& per_node_rankings,
                 const std::vector<std::unordered_set<int>>& per_node_observed);

/// 2 TP / (2 TP + FP + FN); 0 when the denominator vanishes.
double f1_from_counts(long long tp, long long fp, long long fn);

/// F1 of globally pooled confusion counts.
double micro_f1(std::span<const long long> tp, std::span<const long long> fp,
                std::span<const long long> fn);

/// Unweighted mean of per-label F1 over all labels.
double macro_f1(std::span<const long long> tp, std::span<const long long> fp,
                std::span<const long long> fn);

}  // namespace gembed
