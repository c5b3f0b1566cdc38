#include "gembed/eigs.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <stdexcept>

#include "gembed/errors.hpp"
#include "gembed/rng.hpp"

namespace gembed {

LinearOperator make_operator(const SparseMatrix& A) {
    LinearOperator op;
    op.rows = A.rows();
    op.cols = A.cols();
    op.apply = [&A](std::span<const double> x, std::span<double> y) { spmv(A, x, y); };
    auto At = std::make_shared<SparseMatrix>(A.transposed());
    op.apply_t = [At](std::span<const double> x, std::span<double> y) { spmv(*At, x, y); };
    return op;
}

LinearOperator make_operator(const DenseMatrix& A) {
    LinearOperator op;
    op.rows = A.rows();
    op.cols = A.cols();
    op.apply = [&A](std::span<const double> x, std::span<double> y) { A.matvec(x, y); };
    op.apply_t = [&A](std::span<const double> x, std::span<double> y) { A.matvec_transpose(x, y); };
    return op;
}

void jacobi_eigh(const DenseMatrix& A, std::vector<double>& eigenvalues,
                 DenseMatrix& eigenvectors) {
    int n = A.rows();
    if (n != A.cols()) throw std::invalid_argument("jacobi_eigh: matrix must be square");
    DenseMatrix M = A;
    DenseMatrix V(n, n);
    for (int i = 0; i < n; ++i) V.at(i, i) = 1.0;

    auto off_diag_sq = [&]() {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) s += M.at(i, j) * M.at(i, j);
        return s;
    };

    double norm = std::sqrt(M.frobenius_sq());
    double thresh = norm > 0.0 ? 1e-30 * norm * norm : 0.0;
    for (int sweep = 0; sweep < 100 && off_diag_sq() > thresh; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double apq = M.at(p, q);
                if (std::fabs(apq) < 1e-300) continue;
                double app = M.at(p, p), aqq = M.at(q, q);
                double tau = (aqq - app) / (2.0 * apq);
                double t = (tau >= 0.0 ? 1.0 : -1.0) /
                           (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double s = t * c;
                for (int i = 0; i < n; ++i) {
                    double mip = M.at(i, p), miq = M.at(i, q);
                    M.at(i, p) = c * mip - s * miq;
                    M.at(i, q) = s * mip + c * miq;
                }
                for (int j = 0; j < n; ++j) {
                    double mpj = M.at(p, j), mqj = M.at(q, j);
                    M.at(p, j) = c * mpj - s * mqj;
                    M.at(q, j) = s * mpj + c * mqj;
                }
                for (int i = 0; i < n; ++i) {
                    double vip = V.at(i, p), viq = V.at(i, q);
                    V.at(i, p) = c * vip - s * viq;
                    V.at(i, q) = s * vip + c * viq;
                }
            }
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> diag(n);
    for (int i = 0; i < n; ++i) diag[i] = M.at(i, i);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return diag[a] < diag[b]; });

    eigenvalues.resize(n);
    eigenvectors = DenseMatrix(n, n);
    for (int j = 0; j < n; ++j) {
        eigenvalues[j] = diag[order[j]];
        for (int i = 0; i < n; ++i) eigenvectors.at(i, j) = V.at(i, order[j]);
    }
}

double spectral_radius(const SparseMatrix& A, std::uint64_t seed, int iters) {
    int n = A.rows();
    if (n == 0) return 0.0;
    if (A.nnz() == 0) return 0.0;
    double eps = 0.1 * A.norm_1();
    if (eps == 0.0) return 0.0;

    Rng rng(hash_mix(seed, 0x9d0eULL));
    std::vector<double> x(n), y(n);
    for (double& v : x) v = 0.5 + rng.uniform();  // strictly positive start
    double rho = 0.0;
    for (int it = 0; it < iters; ++it) {
        spmv(A, x, y);
        for (int i = 0; i < n; ++i) y[i] += eps * x[i];
        double norm = 0.0;
        for (double v : y) norm += v * v;
        norm = std::sqrt(norm);
        if (norm == 0.0) return 0.0;
        double prev = rho;
        rho = norm;  // ||x|| == 1, so growth factor approximates rho(A + eps I)
        for (int i = 0; i < n; ++i) x[i] = y[i] / norm;
        if (it > 10 && std::fabs(rho - prev) <= 1e-13 * rho) break;
    }
    return std::max(0.0, rho - eps);
}

namespace {

// Restarted Lanczos with full reorthogonalization. The projected matrix is
// assembled entrywise (V^T A V), which keeps Rayleigh-Ritz exact across
// restarts and random-direction injections after breakdown.
struct LanczosWorkspace {
    int n, m;
    std::vector<double> basis;  // m vectors of length n, contiguous
    DenseMatrix proj;           // m x m projected matrix
    int size = 0;               // current basis size

    LanczosWorkspace(int n_, int m_) : n(n_), m(m_), basis(static_cast<std::size_t>(n_) * m_), proj(m_, m_) {}

    double* vec(int j) { return basis.data() + static_cast<std::size_t>(j) * n; }
    const double* vec(int j) const { return basis.data() + static_cast<std::size_t>(j) * n; }
};

double dot(const double* a, const double* b, int n) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

double norm2(const double* a, int n) { return std::sqrt(dot(a, a, n)); }

// Subtract projections onto the current basis; returns the coefficients of
// the first pass (the projected-matrix column).
void orthogonalize(LanczosWorkspace& ws, std::vector<double>& w,
                   std::vector<double>* first_pass_coeffs) {
    for (int pass = 0; pass < 2; ++pass) {
        for (int i = 0; i < ws.size; ++i) {
            double h = dot(ws.vec(i), w.data(), ws.n);
            if (pass == 0 && first_pass_coeffs) (*first_pass_coeffs)[i] = h;
            const double* vi = ws.vec(i);
            for (int t = 0; t < ws.n; ++t) w[t] -= h * vi[t];
        }
        if (first_pass_coeffs) first_pass_coeffs = nullptr;
    }
}

}  // namespace

EigResult symmetric_eigs_op(const LinearOperator& A, int k, EigWhich which,
                            double tol, int max_iter, std::uint64_t seed,
                            double scale) {
    int n = A.rows;
    if (A.cols != n) throw std::invalid_argument("symmetric_eigs: operator must be square");
    if (k < 1 || k >= n) throw std::invalid_argument("symmetric_eigs: need 1 <= k < n");

    // Work on B = A (largest) or B = sigma I - A (smallest); either way we
    // chase the largest end of B and map back.
    double sigma = 0.0;
    int matvecs = 0;
    Rng rng(hash_mix(seed, 0x1a2cULL));
    std::vector<double> tmp(n), tmp2(n);
    if (which == EigWhich::smallest) {
        // Power-iteration bound on the top eigenvalue magnitude.
        for (double& v : tmp) v = rng.uniform() - 0.5;
        double est = 0.0;
        for (int it = 0; it < 64; ++it) {
            double nrm = norm2(tmp.data(), n);
            if (nrm == 0.0) break;
            for (double& v : tmp) v /= nrm;
            A.apply(tmp, tmp2);
            ++matvecs;
            est = std::max(est, std::fabs(dot(tmp.data(), tmp2.data(), n)));
            std::swap(tmp, tmp2);
        }
        sigma = 1.1 * est + 1.0;
    }
    auto apply_b = [&](std::span<const double> x, std::span<double> y) {
        A.apply(x, y);
        ++matvecs;
        if (which == EigWhich::smallest)
            for (int i = 0; i < n; ++i) y[i] = sigma * x[i] - y[i];
    };

    int m = std::min(n, std::max(2 * k + 10, 32));
    LanczosWorkspace ws(n, m);

    std::vector<double> w(n), cont;
    for (double& v : w) v = rng.uniform() - 0.5;
    double nrm = norm2(w.data(), n);
    for (int i = 0; i < n; ++i) ws.vec(0)[i] = w[i] / nrm;
    ws.size = 1;

    EigResult out;
    std::vector<double> ritz_vals;   // of B, descending at the wanted end
    DenseMatrix ritz_vecs;
    bool exhausted = false;

    while (true) {
        // Extend the basis to m vectors.
        std::vector<double> coeffs(m, 0.0);
        while (ws.size < m) {
            int j = ws.size - 1;
            std::vector<double> wj(n);
            apply_b(std::span<const double>(ws.vec(j), static_cast<std::size_t>(n)), wj);
            std::fill(coeffs.begin(), coeffs.end(), 0.0);
            orthogonalize(ws, wj, &coeffs);
            for (int i = 0; i < ws.size; ++i) {
                ws.proj.at(i, j) = coeffs[i];
                ws.proj.at(j, i) = coeffs[i];
            }
            double beta = norm2(wj.data(), n);
            if (beta < 1e-12 * std::max(scale, 1.0)) {
                // Invariant subspace found; inject a fresh random direction.
                for (double& v : wj) v = rng.uniform() - 0.5;
                orthogonalize(ws, wj, nullptr);
                beta = norm2(wj.data(), n);
                if (beta < 1e-12) break;  // basis spans the whole space
            }
            for (int i = 0; i < n; ++i) ws.vec(ws.size)[i] = wj[i] / beta;
            ++ws.size;
        }
        // Column for the final basis vector (fills the last diagonal block).
        {
            int j = ws.size - 1;
            std::vector<double> wj(n);
            apply_b(std::span<const double>(ws.vec(j), static_cast<std::size_t>(n)), wj);
            std::fill(coeffs.begin(), coeffs.end(), 0.0);
            orthogonalize(ws, wj, &coeffs);
            for (int i = 0; i < ws.size; ++i) {
                ws.proj.at(i, j) = coeffs[i];
                ws.proj.at(j, i) = coeffs[i];
            }
            double beta = norm2(wj.data(), n);
            cont.assign(n, 0.0);
            if (beta > 1e-14)
                for (int i = 0; i < n; ++i) cont[i] = wj[i] / beta;
        }

        // Rayleigh-Ritz on the projected matrix.
        int s = ws.size;
        DenseMatrix small(s, s);
        for (int i = 0; i < s; ++i)
            for (int j = 0; j < s; ++j) small.at(i, j) = ws.proj.at(i, j);
        std::vector<double> theta;
        DenseMatrix S;
        jacobi_eigh(small, theta, S);  // ascending

        int kk = std::min(k, s);
        ritz_vals.assign(kk, 0.0);
        ritz_vecs = DenseMatrix(n, kk);
        for (int c = 0; c < kk; ++c) {
            int src = s - 1 - c;  // largest end of B
            ritz_vals[c] = theta[src];
            for (int i = 0; i < s; ++i) {
                double sij = S.at(i, src);
                if (sij == 0.0) continue;
                const double* vi = ws.vec(i);
                for (int t = 0; t < n; ++t) ritz_vecs.at(t, c) += sij * vi[t];
            }
        }

        // Exact residuals for the wanted pairs.
        out.residuals.assign(kk, 0.0);
        bool all_ok = (kk == k);
        for (int c = 0; c < kk; ++c) {
            std::vector<double> y(n), Ay(n);
            for (int t = 0; t < n; ++t) y[t] = ritz_vecs.at(t, c);
            apply_b(y, Ay);
            double r = 0.0;
            for (int t = 0; t < n; ++t) {
                double e = Ay[t] - ritz_vals[c] * y[t];
                r += e * e;
            }
            out.residuals[c] = std::sqrt(r);
            if (out.residuals[c] > tol * std::max(scale, 1e-300)) all_ok = false;
        }
        if (all_ok || s >= n) {
            out.converged = all_ok || s >= n;
            break;
        }
        if (matvecs >= max_iter) {
            exhausted = true;
            break;
        }

        // Thick restart: keep the wanted Ritz vectors plus a buffer, then
        // continue the Krylov sequence from the residual direction.
        int l = std::min(s - 1, k + 8);
        l = std::min(l, kk + 8);
        DenseMatrix kept(n, l);
        std::vector<double> kept_vals(l);
        for (int c = 0; c < l; ++c) {
            int src = s - 1 - c;
            kept_vals[c] = theta[src];
            for (int i = 0; i < s; ++i) {
                double sij = S.at(i, src);
                if (sij == 0.0) continue;
                const double* vi = ws.vec(i);
                for (int t = 0; t < n; ++t) kept.at(t, c) += sij * vi[t];
            }
        }
        ws.proj = DenseMatrix(m, m);
        for (int c = 0; c < l; ++c) {
            for (int t = 0; t < n; ++t) ws.vec(c)[t] = kept.at(t, c);
            ws.proj.at(c, c) = kept_vals[c];
        }
        ws.size = l;
        // Continuation vector: residual direction of the last Lanczos step.
        std::vector<double> next = cont;
        double cn = norm2(next.data(), n);
        if (cn < 1e-14) {
            for (double& v : next) v = rng.uniform() - 0.5;
        }
        orthogonalize(ws, next, nullptr);
        cn = norm2(next.data(), n);
        if (cn < 1e-12) {
            for (double& v : next) v = rng.uniform() - 0.5;
            orthogonalize(ws, next, nullptr);
            cn = norm2(next.data(), n);
            if (cn < 1e-12) {
                out.converged = true;  // kept vectors span an invariant subspace
                break;
            }
        }
        for (int t = 0; t < n; ++t) ws.vec(l)[t] = next[t] / cn;
        ws.size = l + 1;
    }

    // Map eigenvalues of B back to A and order ascending.
    int kk = static_cast<int>(ritz_vals.size());
    std::vector<double> vals(kk);
    for (int c = 0; c < kk; ++c)
        vals[c] = which == EigWhich::smallest ? sigma - ritz_vals[c] : ritz_vals[c];
    std::vector<int> order(kk);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return vals[a] < vals[b]; });

    out.eigenvalues.resize(kk);
    out.eigenvectors = DenseMatrix(n, kk);
    std::vector<double> res_sorted(kk);
    for (int c = 0; c < kk; ++c) {
        out.eigenvalues[c] = vals[order[c]];
        res_sorted[c] = out.residuals[order[c]];
        // Sign convention: the entry of largest magnitude is positive.
        int arg = 0;
        double best = 0.0;
        for (int t = 0; t < n; ++t) {
            double a = std::fabs(ritz_vecs.at(t, order[c]));
            if (a > best) {
                best = a;
                arg = t;
            }
        }
        double flip = ritz_vecs.at(arg, order[c]) < 0.0 ? -1.0 : 1.0;
        for (int t = 0; t < n; ++t) out.eigenvectors.at(t, c) = flip * ritz_vecs.at(t, order[c]);
    }
    out.residuals = std::move(res_sorted);
    out.matvecs = matvecs;
    if (exhausted) out.converged = false;
    return out;
}

EigResult symmetric_eigs(const SparseMatrix& A, int k, EigWhich which, double tol,
                         int max_iter, std::uint64_t seed) {
    if (A.rows() != A.cols()) throw std::invalid_argument("symmetric_eigs: matrix must be square");
    if (!A.is_symmetric_sampled())
        throw std::invalid_argument("symmetric_eigs: matrix is not symmetric");
    double scale = A.norm_1();
    return symmetric_eigs_op(make_operator(A), k, which, tol, max_iter, seed, scale);
}

SvdResult truncated_svd(const LinearOperator& A, int d, double tol, int max_iter,
                        std::uint64_t seed) {
    int rows = A.rows, cols = A.cols;
    int q = std::min(rows, cols);
    if (d < 1 || d > q) throw std::invalid_argument("truncated_svd: need 1 <= d <= min(rows, cols)");

    bool gram_on_cols = cols <= rows;  // G = A^T A (cols x cols) or A A^T
    int gn = gram_on_cols ? cols : rows;
    LinearOperator G;
    G.rows = G.cols = gn;
    std::vector<double> mid(gram_on_cols ? rows : cols);
    G.apply = [&](std::span<const double> x, std::span<double> y) {
        if (gram_on_cols) {
            A.apply(x, mid);
            A.apply_t(mid, y);
        } else {
            A.apply_t(x, mid);
            A.apply(mid, y);
        }
    };
    G.apply_t = G.apply;

    int want = std::min(gn, d + 2);
    std::vector<double> lam;
    DenseMatrix vecs;
    bool converged = true;

    if (want >= gn || gn <= 12) {
        // Assemble the Gram matrix densely and solve exactly.
        DenseMatrix Gd(gn, gn);
        std::vector<double> e(gn, 0.0), col(gn);
        for (int j = 0; j < gn; ++j) {
            e[j] = 1.0;
            G.apply(e, col);
            e[j] = 0.0;
            for (int i = 0; i < gn; ++i) Gd.at(i, j) = col[i];
        }
        // Symmetrize tiny asymmetries from the two-step application.
        for (int i = 0; i < gn; ++i)
            for (int j = i + 1; j < gn; ++j) {
                double v = 0.5 * (Gd.at(i, j) + Gd.at(j, i));
                Gd.at(i, j) = v;
                Gd.at(j, i) = v;
            }
        jacobi_eigh(Gd, lam, vecs);  // ascending
        // Keep the top d.
        std::vector<double> lt(d);
        DenseMatrix vt(gn, d);
        for (int c = 0; c < d; ++c) {
            lt[c] = lam[gn - 1 - c];
            for (int i = 0; i < gn; ++i) vt.at(i, c) = vecs.at(i, gn - 1 - c);
        }
        lam = std::move(lt);
        vecs = std::move(vt);
    } else {
        // Scale estimate for the Gram operator via a few power steps.
        Rng rng(hash_mix(seed, 0xd15cULL));
        std::vector<double> x(gn), y(gn);
        for (double& v : x) v = rng.uniform() - 0.5;
        double scale = 1.0;
        for (int it = 0; it < 24; ++it) {
            double nrm = norm2(x.data(), gn);
            if (nrm == 0.0) break;
            for (double& v : x) v /= nrm;
            G.apply(x, y);
            scale = std::max(scale, std::fabs(dot(x.data(), y.data(), gn)));
            std::swap(x, y);
        }
        double gram_tol = std::max(tol * tol, 1e-13);
        EigResult eig = symmetric_eigs_op(G, want, EigWhich::largest, gram_tol,
                                          max_iter, seed, scale);
        converged = eig.converged;
        lam.assign(d, 0.0);
        vecs = DenseMatrix(gn, d);
        int got = static_cast<int>(eig.eigenvalues.size());
        for (int c = 0; c < d && c < got; ++c) {
            lam[c] = eig.eigenvalues[got - 1 - c];  // descending
            for (int i = 0; i < gn; ++i) vecs.at(i, c) = eig.eigenvectors.at(i, got - 1 - c);
        }
    }

    SvdResult out;
    out.converged = converged;
    out.singular_values.resize(d);
    for (int c = 0; c < d; ++c) out.singular_values[c] = std::sqrt(std::max(0.0, lam[c]));

    // vecs holds the Gram-side singular vectors; recover the other side via
    // one operator application per triplet, with Gram-Schmidt cleanup so the
    // columns stay orthonormal even for (near-)zero singular values.
    int on = gram_on_cols ? rows : cols;
    DenseMatrix other(on, d);
    Rng rng(hash_mix(seed, 0xfa11ULL));
    double sigma_max = d > 0 ? out.singular_values[0] : 0.0;
    std::vector<double> gx(gn), ox(on);
    for (int c = 0; c < d; ++c) {
        for (int i = 0; i < gn; ++i) gx[i] = vecs.at(i, c);
        if (gram_on_cols)
            A.apply(gx, ox);
        else
            A.apply_t(gx, ox);
        double s = out.singular_values[c];
        if (s > 1e-12 * std::max(sigma_max, 1.0)) {
            for (double& v : ox) v /= s;
        } else {
            for (double& v : ox) v = rng.uniform() - 0.5;
        }
        for (int pass = 0; pass < 2; ++pass) {
            for (int p = 0; p < c; ++p) {
                double h = 0.0;
                for (int i = 0; i < on; ++i) h += other.at(i, p) * ox[i];
                for (int i = 0; i < on; ++i) ox[i] -= h * other.at(i, p);
            }
        }
        double nrm = norm2(ox.data(), on);
        if (nrm > 0.0)
            for (double& v : ox) v /= nrm;
        for (int i = 0; i < on; ++i) other.at(i, c) = ox[i];
    }

    if (gram_on_cols) {
        out.V = std::move(vecs);
        out.U = std::move(other);
    } else {
        out.U = std::move(vecs);
        out.V = std::move(other);
    }

    // Sign convention on U, mirrored onto V.
    for (int c = 0; c < d; ++c) {
        int arg = 0;
        double best = 0.0;
        for (int i = 0; i < rows; ++i) {
            double a = std::fabs(out.U.at(i, c));
            if (a > best) {
                best = a;
                arg = i;
            }
        }
        if (out.U.at(arg, c) < 0.0) {
            for (int i = 0; i < rows; ++i) out.U.at(i, c) = -out.U.at(i, c);
            for (int i = 0; i < cols; ++i) out.V.at(i, c) = -out.V.at(i, c);
        }
    }

    // Residual contract: ||A v_i - sigma_i u_i|| <= tol * sigma_1.
    out.residuals.assign(d, 0.0);
    std::vector<double> vx(cols), ax(rows);
    for (int c = 0; c < d; ++c) {
        for (int i = 0; i < cols; ++i) vx[i] = out.V.at(i, c);
        A.apply(vx, ax);
        double r = 0.0;
        for (int i = 0; i < rows; ++i) {
            double e = ax[i] - out.singular_values[c] * out.U.at(i, c);
            r += e * e;
        }
        out.residuals[c] = std::sqrt(r);
        if (out.residuals[c] > tol * sigma_max + 1e-13 * (1.0 + sigma_max))
            out.converged = false;
    }
    return out;
}

}  // namespace gembed
