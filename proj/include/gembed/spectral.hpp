#pragma once

#include "gembed/embedding.hpp"
#include "gembed/graph.hpp"
#include "gembed/proximity.hpp"

namespace gembed {

/// Locally linear embedding: rows reconstructed from row-normalized neighbor
/// weights. Returns eigenvectors 2..d+1 of (I-What)^T (I-What), scaled so
/// (1/N) Y^T Y = I with sum_i Y_i = 0.
Embedding lle_embed(const Graph& g, int d, double tol = 1e-8, int max_iter = 2000,
                    std::uint64_t seed = 12345);

/// Laplacian eigenmaps: smallest nontrivial eigenvectors of the normalized
/// Laplacian, mapped back through D^{-1/2} so that Y^T D Y = I.
Embedding le_embed(const Graph& g, int d, double tol = 1e-8, int max_iter = 2000,
                   std::uint64_t seed = 12345);

/// HOPE: truncated SVD of a proximity matrix, Y_s = U sqrt(Sigma),
/// Y_t = V sqrt(Sigma).
Embedding hope_embed(const Graph& g, int d, const ProximityMatrix& prox,
                     double tol = 1e-8, int max_iter = 2000,
                     std::uint64_t seed = 12345);

}  // namespace gembed
