#pragma once

#include <map>
#include <string>

#include "gembed/eigs.hpp"
#include "gembed/graph.hpp"
#include "gembed/matrix.hpp"

namespace gembed {

enum class ProximityKind { katz, common_neighbors, adamic_adar };

std::string to_string(ProximityKind kind);

/// Node-pair similarity matrix. Katz is accumulated densely (desk scale);
/// the neighborhood-overlap kinds stay sparse.
struct ProximityMatrix {
    ProximityKind kind;
    std::map<std::string, double> params;
    bool dense = false;
    DenseMatrix S_dense;
    SparseMatrix S_sparse;

    int n() const { return dense ? S_dense.rows() : S_sparse.rows(); }
    double coeff(int i, int j) const { return dense ? S_dense.at(i, j) : S_sparse.coeff(i, j); }
    DenseMatrix to_dense() const { return dense ? S_dense : S_sparse.to_dense(); }
    LinearOperator to_operator() const;
};

/// Katz index S = sum_{k>=1} beta^k W^k, accumulated until the added term's
/// max-abs entry is <= tol. Requires beta * rho(W) < 1 and n <= node_cap.
ProximityMatrix katz_matrix(const Graph& g, double beta, double tol = 1e-9,
                            int node_cap = 20000);

/// Default attenuation: beta = 0.5 / rho(W).
double katz_default_beta(const Graph& g);

/// S = W*W with a zeroed diagonal.
ProximityMatrix common_neighbors_matrix(const Graph& g);

/// S_ij = sum over shared neighbors z of 1/log(deg(z)), diagonal zeroed.
/// Degrees are neighbor counts; a degree-1 shared neighbor (unreachable for
/// i != j in a simple graph) would contribute the constant 10.
ProximityMatrix adamic_adar_matrix(const Graph& g);

}  // namespace gembed
