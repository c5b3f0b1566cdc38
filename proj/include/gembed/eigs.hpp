#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "gembed/matrix.hpp"

namespace gembed {

/// Matrix-free operator: y = A x and y = A^T x.
struct LinearOperator {
    int rows = 0;
    int cols = 0;
    std::function<void(std::span<const double>, std::span<double>)> apply;
    std::function<void(std::span<const double>, std::span<double>)> apply_t;
};

LinearOperator make_operator(const SparseMatrix& A);
LinearOperator make_operator(const DenseMatrix& A);

enum class EigWhich { smallest, largest };

struct EigResult {
    std::vector<double> eigenvalues;  // ascending, length k
    DenseMatrix eigenvectors;         // n x k, columns match eigenvalues
    std::vector<double> residuals;    // ||A v - lambda v|| per pair
    bool converged = false;
    int matvecs = 0;
};

struct SvdResult {
    DenseMatrix U;                        // rows x d
    std::vector<double> singular_values;  // descending, nonnegative
    DenseMatrix V;                        // cols x d
    std::vector<double> residuals;        // ||A v_i - sigma_i u_i||
    bool converged = false;
};

/// k extreme eigenpairs of a symmetric sparse matrix via restarted Lanczos
/// with full reorthogonalization. "smallest" is obtained by running on
/// sigma*I - A with sigma a power-iteration bound on the top eigenvalue.
/// Non-symmetric input (spot-checked) throws; non-convergence is reported
/// through `converged` and the achieved residuals.
EigResult symmetric_eigs(const SparseMatrix& A, int k, EigWhich which,
                         double tol = 1e-8, int max_iter = 1000,
                         std::uint64_t seed = 12345);

/// Same solver on a matrix-free symmetric operator (no symmetry check);
/// `scale` calibrates the residual stopping rule (residual <= tol*scale).
EigResult symmetric_eigs_op(const LinearOperator& A, int k, EigWhich which,
                            double tol, int max_iter, std::uint64_t seed,
                            double scale);

/// Top-d singular triplets via a symmetric eigensolve of the Gram operator
/// with d+2 oversampling (dense fallback when the small side is tiny).
SvdResult truncated_svd(const LinearOperator& A, int d, double tol = 1e-8,
                        int max_iter = 1000, std::uint64_t seed = 12345);

/// Dense symmetric eigendecomposition (cyclic Jacobi), ascending eigenvalues.
/// Used for the small projected problems and for PCA; desk-scale sizes only.
void jacobi_eigh(const DenseMatrix& A, std::vector<double>& eigenvalues,
                 DenseMatrix& eigenvectors);

/// Spectral radius of a nonnegative matrix by power iteration on A + eps*I
/// (the shift breaks the periodicity of bipartite-like structures).
double spectral_radius(const SparseMatrix& A, std::uint64_t seed = 12345,
                       int iters = 500);

}  // namespace gembed
