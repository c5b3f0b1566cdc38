#include "gembed/metrics.hpp"

#include "gembed/errors.hpp"

namespace gembed {

double precision_at_k(std::span<const std::pair<int, int>> ranked, const PairSet& observed,
                      std::size_t k) {
    if (k == 0) throw config_error("precision_at_k: k must be positive");
    if (k > ranked.size()) throw config_error("precision_at_k: k exceeds ranking length");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < k; ++i)
        if (observed.contains(ranked[i].first, ranked[i].second)) ++hits;
    return static_cast<double>(hits) / static_cast<double>(k);
}

double average_precision(std::span<const int> ranking, const std::unordered_set<int>& observed) {
    std::size_t hits = 0;
    double acc = 0.0;
    for (std::size_t k = 0; k < ranking.size(); ++k) {
        if (observed.count(ranking[k])) {
            ++hits;
            acc += static_cast<double>(hits) / static_cast<double>(k + 1);
        }
    }
    if (hits == 0) return -1.0;
    return acc / static_cast<double>(hits);
}

double map_score(const std::vector<std::vector<int>>& per_node_rankings,
                 const std::vector<std::unordered_set<int>>& per_node_observed) {
    if (per_node_rankings.size() != per_node_observed.size())
        throw config_error("map_score: rankings/observed size mismatch");
    double total = 0.0;
    std::size_t counted = 0;
    for (std::size_t i = 0; i < per_node_rankings.size(); ++i) {
        double ap = average_precision(per_node_rankings[i], per_node_observed[i]);
        if (ap < 0.0) continue;
        total += ap;
        ++counted;
    }
    if (counted == 0) throw config_error("map_score: no node has observed edges");
    return total / static_cast<double>(counted);
}

double f1_from_counts(long long tp, long long fp, long long fn) {
    long long denom = 2 * tp + fp + fn;
    if (denom == 0) return 0.0;
    return 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
}

double micro_f1(std::span<const long long> tp, std::span<const long long> fp,
                std::span<const long long> fn) {
    long long stp = 0, sfp = 0, sfn = 0;
    for (std::size_t l = 0; l < tp.size(); ++l) {
        stp += tp[l];
        sfp += fp[l];
        sfn += fn[l];
    }
    return f1_from_counts(stp, sfp, sfn);
}

double macro_f1(std::span<const long long> tp, std::span<const long long> fp,
                std::span<const long long> fn) {
    if (tp.empty()) return 0.0;
    double acc = 0.0;
    for (std::size_t l = 0; l < tp.size(); ++l) acc += f1_from_counts(tp[l], fp[l], fn[l]);
    return acc / static_cast<double>(tp.size());
}

}  // namespace gembed
