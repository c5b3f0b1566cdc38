#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gembed/embedding.hpp"
#include "gembed/graph.hpp"

namespace gembed {

struct SgdConfig {
    double learning_rate = 0.025;
    int epochs = 200;
    std::uint64_t seed = 12345;
    double init_scale = 0.0;  // 0 -> 0.1/sqrt(d)
    double lambda = 0.0;      // GF regularization
    int neg_samples = 5;      // LINE only
    bool decay = false;       // linear decay to learning_rate/10
};

/// Graph factorization: per-edge SGD on
/// 0.5 sum_E (W_ij - <Y_i,Y_j>)^2 + lambda/2 sum_i ||Y_i||^2.
Embedding gf_embed(const Graph& g, int d, const SgdConfig& cfg);

/// Full-batch objective and analytic gradient (Y flattened row-major), used
/// by the finite-difference gate and the loss trace.
double gf_loss(const Graph& g, std::span<const double> Y, int d, double lambda);
std::vector<double> gf_grad(const Graph& g, std::span<const double> Y, int d, double lambda);

/// First-order LINE: per-edge SGD on -sum_E W_ij log sigmoid(<Y_i,Y_j>),
/// each edge augmented with neg_samples uniform non-neighbor pairs scored
/// with log sigmoid(-<.,.>).
Embedding line1_embed(const Graph& g, int d, const SgdConfig& cfg);

struct ScoredPair {
    int i, j;
    double weight;
    bool positive;
};

double line1_loss(std::span<const ScoredPair> pairs, std::span<const double> Y, int d);
std::vector<double> line1_grad(std::span<const ScoredPair> pairs, std::span<const double> Y, int d);

/// Positive pairs of a graph's edge list (for loss traces and gradient checks).
std::vector<ScoredPair> positive_pairs(const Graph& g);

}  // namespace gembed
