#include "gembed/spectral.hpp"

#include <cmath>

#include "gembed/eigs.hpp"
#include "gembed/errors.hpp"

namespace gembed {

namespace {

// Smallest-k eigenpairs with a dense fallback when the Krylov solver cannot
// be used (k == n, tiny matrices).
EigResult smallest_eigs(const SparseMatrix& A, int k, double tol, int max_iter,
                        std::uint64_t seed) {
    int n = A.rows();
    if (k < n && n > 8) return symmetric_eigs(A, k, EigWhich::smallest, tol, max_iter, seed);

    std::vector<double> vals;
    DenseMatrix vecs;
    jacobi_eigh(A.to_dense(), vals, vecs);
    EigResult out;
    out.converged = true;
    out.eigenvalues.assign(vals.begin(), vals.begin() + k);
    out.eigenvectors = DenseMatrix(n, k);
    out.residuals.assign(k, 0.0);
    for (int c = 0; c < k; ++c) {
        int arg = 0;
        double best = 0.0;
        for (int i = 0; i < n; ++i) {
            double a = std::fabs(vecs.at(i, c));
            if (a > best) {
                best = a;
                arg = i;
            }
        }
        double flip = vecs.at(arg, c) < 0.0 ? -1.0 : 1.0;
        for (int i = 0; i < n; ++i) out.eigenvectors.at(i, c) = flip * vecs.at(i, c);
    }
    return out;
}

}  // namespace

Embedding lle_embed(const Graph& g, int d, double tol, int max_iter, std::uint64_t seed) {
    if (g.directed()) throw config_error("lle: graph must be undirected");
    int n = g.n();
    if (!(d >= 1 && d < n - 1)) throw config_error("lle: need 1 <= d < n-1");
    if (g.min_degree() == 0) throw config_error("lle: zero-degree node");
    if (!g.is_connected()) throw config_error("lle: graph must be connected");

    // What = D^{-1} W, M = (I - What)^T (I - What).
    SparseMatrix What = transition_matrix(g).T;
    std::vector<SparseMatrix::Triplet> t;
    t.reserve(n + What.nnz());
    for (int i = 0; i < n; ++i) t.push_back({i, i, 1.0});
    for (int i = 0; i < n; ++i) {
        auto cols = What.row_cols(i);
        auto vals = What.row_values(i);
        for (std::size_t k = 0; k < cols.size(); ++k) t.push_back({i, cols[k], -vals[k]});
    }
    SparseMatrix A = SparseMatrix::from_triplets(n, n, std::move(t));
    SparseMatrix M = A.transposed().multiply(A);

    EigResult eig = smallest_eigs(M, d + 1, tol, max_iter, seed);
    if (!eig.converged) throw numerical_error("lle: eigensolver did not converge");

    Embedding emb;
    emb.d = d;
    emb.method = "lle";
    emb.Y = DenseMatrix(n, d);
    double scale = std::sqrt(static_cast<double>(n));
    for (int c = 0; c < d; ++c)
        for (int i = 0; i < n; ++i) emb.Y.at(i, c) = scale * eig.eigenvectors.at(i, c + 1);
    emb.validate();
    return emb;
}

Embedding le_embed(const Graph& g, int d, double tol, int max_iter, std::uint64_t seed) {
    if (g.directed()) throw config_error("le: graph must be undirected");
    int n = g.n();
    if (!(d >= 1 && d <= n - 1)) throw config_error("le: need 1 <= d <= n-1");
    if (g.min_degree() == 0) throw config_error("le: zero-degree node");

    Embedding emb;
    emb.d = d;
    emb.method = "le";
    if (!g.is_connected())
        emb.warnings.push_back("graph is disconnected: extra near-zero eigenvectors retained");

    SparseMatrix Lnorm = laplacian(g, /*normalized=*/true);
    EigResult eig = smallest_eigs(Lnorm, d + 1, tol, max_iter, seed);
    if (!eig.converged) throw numerical_error("le: eigensolver did not converge");

    emb.Y = DenseMatrix(n, d);
    for (int c = 0; c < d; ++c)
        for (int i = 0; i < n; ++i)
            emb.Y.at(i, c) = eig.eigenvectors.at(i, c + 1) / std::sqrt(g.weighted_degree(i));
    emb.params["objective"] = 0.0;
    for (int c = 1; c <= d; ++c) emb.params["objective"] += eig.eigenvalues[c];
    emb.validate();
    return emb;
}

Embedding hope_embed(const Graph& g, int d, const ProximityMatrix& prox, double tol,
                     int max_iter, std::uint64_t seed) {
    int n = g.n();
    if (prox.n() != n) throw config_error("hope: proximity matrix size mismatch");
    if (d < 1) throw config_error("hope: need d >= 1");

    // An n x n similarity has at most n singular triplets; requesting more
    // dimensions yields zero columns (sigma = 0 past the rank).
    int d_eff = std::min(d, n);
    LinearOperator op = prox.to_operator();
    SvdResult svd = truncated_svd(op, d_eff, tol, max_iter, seed);
    if (!svd.converged) throw numerical_error("hope: truncated SVD did not converge");

    Embedding emb;
    emb.d = d;
    emb.method = "hope";
    emb.params = prox.params;
    emb.Y = DenseMatrix(n, d);
    emb.Yt = DenseMatrix(n, d);
    for (int c = 0; c < d_eff; ++c) {
        double s = std::sqrt(svd.singular_values[c]);
        for (int i = 0; i < n; ++i) {
            emb.Y.at(i, c) = svd.U.at(i, c) * s;
            emb.Yt->at(i, c) = svd.V.at(i, c) * s;
        }
    }
    if (d < n) {
        emb.validate();
    } else if (!emb.Y.all_finite() || !emb.Yt->all_finite()) {
        throw numerical_error("hope: non-finite embedding");
    }
    return emb;
}

}  // namespace gembed
