#pragma once

#include <cstdint>

#include "gembed/embedding.hpp"
#include "gembed/walks.hpp"

namespace gembed {

/// Skip-gram with negative sampling over a walk corpus. Separate center and
/// context tables; negatives drawn from corpus unigram counts raised to 3/4;
/// learning rate decays linearly to lr/100 over all pair updates. The center
/// table is returned as Y; the context table is discarded unless a debug
/// sink is supplied.
Embedding sgns_train(const WalkCorpus& corpus, int d, int window, int neg,
                     double lr, int epochs, std::uint64_t seed,
                     DenseMatrix* context_out = nullptr);

/// generate_walks + sgns_train. p = q = 1 is DeepWalk.
Embedding node2vec_embed(const Graph& g, int d, const WalkConfig& cfg, int neg,
                         double lr, int epochs, int threads = 1);

}  // namespace gembed
