#include "gembed/viz.hpp"

#include <cmath>

#include "gembed/eigs.hpp"
#include "gembed/errors.hpp"

namespace gembed {

DenseMatrix pca_project_2d(const DenseMatrix& Y) {
    int n = Y.rows(), d = Y.cols();
    if (d < 2) throw config_error("pca: embedding dimension must be >= 2");

    DenseMatrix centered = Y;
    for (int c = 0; c < d; ++c) {
        double mean = 0.0;
        for (int i = 0; i < n; ++i) mean += centered.at(i, c);
        mean /= static_cast<double>(n);
        for (int i = 0; i < n; ++i) centered.at(i, c) -= mean;
    }

    DenseMatrix cov = centered.transpose_multiply(centered);  // d x d
    std::vector<double> vals;
    DenseMatrix vecs;
    jacobi_eigh(cov, vals, vecs);  // ascending

    DenseMatrix proj(n, 2);
    for (int axis = 0; axis < 2; ++axis) {
        int col = d - 1 - axis;  // top components
        // Sign convention keeps the output reproducible.
        int arg = 0;
        double best = 0.0;
        for (int i = 0; i < d; ++i) {
            double a = std::fabs(vecs.at(i, col));
            if (a > best) {
                best = a;
                arg = i;
            }
        }
        double flip = vecs.at(arg, col) < 0.0 ? -1.0 : 1.0;
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int c = 0; c < d; ++c) s += centered.at(i, c) * vecs.at(c, col);
            proj.at(i, axis) = flip * s;
        }
    }
    return proj;
}

}  // namespace gembed
