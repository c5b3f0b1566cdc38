#include "gembed/proximity.hpp"

#include <cmath>

#include "gembed/errors.hpp"

namespace gembed {

std::string to_string(ProximityKind kind) {
    switch (kind) {
        case ProximityKind::katz: return "katz";
        case ProximityKind::common_neighbors: return "common_neighbors";
        case ProximityKind::adamic_adar: return "adamic_adar";
    }
    return "?";
}

LinearOperator ProximityMatrix::to_operator() const {
    if (dense) return make_operator(S_dense);
    return make_operator(S_sparse);
}

double katz_default_beta(const Graph& g) {
    double rho = spectral_radius(g.adjacency());
    if (rho <= 0.0) throw config_error("katz: graph has no edges");
    return 0.5 / rho;
}

ProximityMatrix katz_matrix(const Graph& g, double beta, double tol, int node_cap) {
    int n = g.n();
    if (n > node_cap)
        throw config_error("katz: node count " + std::to_string(n) + " exceeds dense cap " + std::to_string(node_cap));
    if (beta < 0.0) throw config_error("katz: beta must be nonnegative");
    SparseMatrix W = g.adjacency();
    double rho = spectral_radius(W);
    // The margin absorbs the power-iteration estimate's error at the
    // boundary beta == 1/rho, where the series diverges.
    if (beta > 0.0 && beta * rho >= 1.0 - 1e-9)
        throw config_error("katz: beta " + std::to_string(beta) + " is at or above 1/rho(W)");

    ProximityMatrix out;
    out.kind = ProximityKind::katz;
    out.params["beta"] = beta;
    out.dense = true;
    out.S_dense = DenseMatrix(n, n);
    if (beta == 0.0 || W.nnz() == 0) return out;

    // term_k = (beta W)^k, accumulated into S. The series is entrywise
    // nondecreasing, so a stalled or growing tail signals divergence.
    DenseMatrix term(n, n);
    for (int i = 0; i < n; ++i) {
        auto nb = g.neighbors(i);
        auto w = g.neighbor_weights(i);
        for (std::size_t k = 0; k < nb.size(); ++k) term.at(i, nb[k]) = beta * w[k];
    }
    double prev_max = 0.0;
    int grew = 0;
    for (int k = 1; k <= 10000; ++k) {
        for (std::size_t i = 0; i < out.S_dense.data().size(); ++i)
            out.S_dense.data()[i] += term.data()[i];
        double tail = term.max_abs();
        if (tail <= tol) return out;
        if (k > 8 && tail >= prev_max) {
            if (++grew > 16) throw numerical_error("katz: series is not contracting (beta too large)");
        } else {
            grew = 0;
        }
        prev_max = tail;
        DenseMatrix next = W.multiply_dense(term);
        for (double& v : next.data()) v *= beta;
        term = std::move(next);
    }
    throw numerical_error("katz: series did not reach tolerance");
}

ProximityMatrix common_neighbors_matrix(const Graph& g) {
    if (g.directed()) throw config_error("common_neighbors: graph must be undirected");
    SparseMatrix W = g.adjacency();
    SparseMatrix S = W.multiply(W);
    // Zero the diagonal (self-similarity excluded).
    std::vector<SparseMatrix::Triplet> t;
    t.reserve(S.nnz());
    for (int i = 0; i < S.rows(); ++i) {
        auto cols = S.row_cols(i);
        auto vals = S.row_values(i);
        for (std::size_t k = 0; k < cols.size(); ++k)
            if (cols[k] != i) t.push_back({i, cols[k], vals[k]});
    }
    ProximityMatrix out;
    out.kind = ProximityKind::common_neighbors;
    out.dense = false;
    out.S_sparse = SparseMatrix::from_triplets(g.n(), g.n(), std::move(t));
    return out;
}

ProximityMatrix adamic_adar_matrix(const Graph& g) {
    if (g.directed()) throw config_error("adamic_adar: graph must be undirected");
    std::vector<SparseMatrix::Triplet> t;
    for (int z = 0; z < g.n(); ++z) {
        auto nb = g.neighbors(z);
        if (nb.empty()) continue;
        // 1/log is singular at degree 1; that case pins a large constant
        // (it cannot reach an off-diagonal entry in a simple graph).
        double c = nb.size() == 1 ? 10.0 : 1.0 / std::log(static_cast<double>(nb.size()));
        for (std::size_t a = 0; a < nb.size(); ++a)
            for (std::size_t b = 0; b < nb.size(); ++b)
                if (a != b) t.push_back({nb[a], nb[b], c});
    }
    ProximityMatrix out;
    out.kind = ProximityKind::adamic_adar;
    out.dense = false;
    out.S_sparse = SparseMatrix::from_triplets(g.n(), g.n(), std::move(t));
    return out;
}

}  // namespace gembed
