#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gembed/eigs.hpp"
#include "gembed/gradcheck.hpp"
#include "gembed/graph.hpp"
#include "gembed/matrix.hpp"
#include "gembed/rng.hpp"
#include "oracles.hpp"

using namespace gembed;

namespace {

SparseMatrix random_sparse(int rows, int cols, double density, std::uint64_t seed) {
    Rng rng(hash_mix(seed, 0xabcULL));
    std::vector<SparseMatrix::Triplet> t;
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            if (rng.uniform() < density) t.push_back({i, j, rng.uniform(-1.0, 1.0)});
    return SparseMatrix::from_triplets(rows, cols, std::move(t));
}

SparseMatrix random_symmetric(int n, double density, std::uint64_t seed) {
    Rng rng(hash_mix(seed, 0xdefULL));
    std::vector<SparseMatrix::Triplet> t;
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            if (rng.uniform() < density) {
                double v = rng.uniform(-1.0, 1.0);
                t.push_back({i, j, v});
                if (i != j) t.push_back({j, i, v});
            }
        }
    }
    return SparseMatrix::from_triplets(n, n, std::move(t));
}

}  // namespace

TEST_CASE("spmv basics") {
    SparseMatrix I = SparseMatrix::identity(5);
    std::vector<double> x = {1, 2, 3, 4, 5};
    CHECK(spmv(I, x) == x);

    SparseMatrix Z = SparseMatrix::from_triplets(4, 4, {});
    for (double v : spmv(Z, std::vector<double>{1, 1, 1, 1})) CHECK(v == 0.0);

    CHECK_THROWS_AS(spmv(I, std::vector<double>{1, 2}), std::invalid_argument);
}

TEST_CASE("spmv matches dense oracle on random 50x50") {
    SparseMatrix A = random_sparse(50, 50, 0.1, 42);
    Eigen::MatrixXd M = oracles::to_eigen(A);
    Rng rng(7);
    Eigen::VectorXd x(50);
    for (int i = 0; i < 50; ++i) x[i] = rng.uniform(-1, 1);
    std::vector<double> xs(x.data(), x.data() + 50);
    std::vector<double> y = spmv(A, xs);
    Eigen::VectorXd yo = M * x;
    for (int i = 0; i < 50; ++i) CHECK(std::fabs(y[i] - yo[i]) <= 1e-12);
}

TEST_CASE("sparse transpose and multiply match dense oracle") {
    SparseMatrix A = random_sparse(30, 40, 0.15, 1);
    SparseMatrix B = random_sparse(40, 20, 0.15, 2);
    Eigen::MatrixXd Ad = oracles::to_eigen(A), Bd = oracles::to_eigen(B);

    Eigen::MatrixXd At = oracles::to_eigen(A.transposed());
    CHECK((At - Ad.transpose()).cwiseAbs().maxCoeff() == 0.0);

    Eigen::MatrixXd AB = oracles::to_eigen(A.multiply(B));
    CHECK((AB - Ad * Bd).cwiseAbs().maxCoeff() <= 1e-12);

    DenseMatrix Bdense = B.to_dense();
    Eigen::MatrixXd ABd = oracles::to_eigen(A.multiply_dense(Bdense));
    CHECK((ABd - Ad * Bd).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("symmetric_eigs: identity smallest") {
    SparseMatrix I = SparseMatrix::identity(3);
    EigResult r = symmetric_eigs(I, 1, EigWhich::smallest);
    REQUIRE(r.converged);
    CHECK(r.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("symmetric_eigs: P4 path Laplacian smallest two") {
    GraphBuilder b(4, false, false);
    b.add_edge(0, 1);
    b.add_edge(1, 2);
    b.add_edge(2, 3);
    Graph g = b.build();
    SparseMatrix L = laplacian(g, false);
    EigResult r = symmetric_eigs(L, 2, EigWhich::smallest, 1e-10, 2000);
    REQUIRE(r.converged);
    CHECK(std::fabs(r.eigenvalues[0]) <= 1e-6);
    CHECK(r.eigenvalues[1] == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-6));
}

TEST_CASE("symmetric_eigs matches dense oracle both ends") {
    for (std::uint64_t seed : {11u, 12u, 13u}) {
        SparseMatrix A = random_symmetric(30, 0.3, seed);
        auto oracle = oracles::sym_eigenvalues(oracles::to_eigen(A));
        for (EigWhich which : {EigWhich::smallest, EigWhich::largest}) {
            EigResult r = symmetric_eigs(A, 5, which, 1e-10, 4000, seed);
            REQUIRE(r.converged);
            for (int i = 0; i < 5; ++i) {
                double expect = which == EigWhich::smallest ? oracle[i] : oracle[25 + i];
                CHECK(r.eigenvalues[i] == doctest::Approx(expect).epsilon(1e-6));
            }
            // Orthonormality within 1e-8.
            for (int a = 0; a < 5; ++a)
                for (int c = a; c < 5; ++c) {
                    double dot = 0.0;
                    for (int i = 0; i < 30; ++i)
                        dot += r.eigenvectors.at(i, a) * r.eigenvectors.at(i, c);
                    CHECK(std::fabs(dot - (a == c ? 1.0 : 0.0)) <= 1e-8);
                }
            // Residual contract.
            double scale = A.norm_1();
            for (int c = 0; c < 5; ++c) CHECK(r.residuals[c] <= 1e-10 * scale + 1e-12);
        }
    }
}

TEST_CASE("symmetric_eigs handles eigenvalue multiplicity") {
    // K4 row-normalized reconstruction matrix has a triple eigenvalue.
    GraphBuilder b(4, false, false);
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) b.add_edge(i, j);
    Graph g = b.build();
    SparseMatrix L = laplacian(g, false);  // eigenvalues {0, 4, 4, 4}
    EigResult r = symmetric_eigs(L, 3, EigWhich::largest, 1e-10, 2000);
    REQUIRE(r.converged);
    for (int i = 0; i < 3; ++i) CHECK(r.eigenvalues[i] == doctest::Approx(4.0).epsilon(1e-8));
}

TEST_CASE("symmetric_eigs rejects non-symmetric input") {
    SparseMatrix A = SparseMatrix::from_triplets(3, 3, {{0, 1, 1.0}, {1, 2, 2.0}, {2, 0, 3.0}});
    CHECK_THROWS_AS(symmetric_eigs(A, 1, EigWhich::largest), std::invalid_argument);
}

TEST_CASE("symmetric_eigs deterministic per seed") {
    SparseMatrix A = random_symmetric(40, 0.2, 99);
    EigResult a = symmetric_eigs(A, 4, EigWhich::smallest, 1e-9, 2000, 5);
    EigResult b = symmetric_eigs(A, 4, EigWhich::smallest, 1e-9, 2000, 5);
    CHECK(a.eigenvalues == b.eigenvalues);
    CHECK(a.eigenvectors.data() == b.eigenvectors.data());
}

TEST_CASE("truncated_svd: diagonal and rank-1") {
    DenseMatrix D(3, 3);
    D.at(0, 0) = 3;
    D.at(1, 1) = 2;
    D.at(2, 2) = 1;
    SvdResult r = truncated_svd(make_operator(D), 2);
    REQUIRE(r.converged);
    CHECK(r.singular_values[0] == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(r.singular_values[1] == doctest::Approx(2.0).epsilon(1e-10));

    // Rank-1 outer product u v^T.
    Rng rng(3);
    int n = 15, m = 12;
    std::vector<double> u(n), v(m);
    double nu = 0, nv = 0;
    for (double& x : u) {
        x = rng.uniform(-1, 1);
        nu += x * x;
    }
    for (double& x : v) {
        x = rng.uniform(-1, 1);
        nv += x * x;
    }
    DenseMatrix A(n, m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) A.at(i, j) = u[i] * v[j];
    SvdResult r1 = truncated_svd(make_operator(A), 2);
    CHECK(r1.singular_values[0] == doctest::Approx(std::sqrt(nu * nv)).epsilon(1e-8));
    CHECK(r1.singular_values[1] <= 1e-8 * r1.singular_values[0]);
    // Columns stay orthonormal even past the rank.
    for (int a = 0; a < 2; ++a)
        for (int c = a; c < 2; ++c) {
            double du = 0, dv = 0;
            for (int i = 0; i < n; ++i) du += r1.U.at(i, a) * r1.U.at(i, c);
            for (int i = 0; i < m; ++i) dv += r1.V.at(i, a) * r1.V.at(i, c);
            CHECK(std::fabs(du - (a == c ? 1 : 0)) <= 1e-8);
            CHECK(std::fabs(dv - (a == c ? 1 : 0)) <= 1e-8);
        }
}

TEST_CASE("truncated_svd matches dense oracle on random 20x20") {
    SparseMatrix A = random_sparse(20, 20, 0.4, 21);
    auto oracle = oracles::singular_values(oracles::to_eigen(A));
    SvdResult r = truncated_svd(make_operator(A), 5, 1e-10, 4000);
    REQUIRE(r.converged);
    for (int i = 0; i < 5; ++i)
        CHECK(r.singular_values[i] == doctest::Approx(oracle[i]).epsilon(1e-8));
    for (int i = 0; i < 5; ++i) CHECK(r.residuals[i] <= 1e-8 * r.singular_values[0] + 1e-12);
}

TEST_CASE("truncated_svd reconstruction identity for n <= 64") {
    for (int n : {16, 48, 64}) {
        SparseMatrix A = random_sparse(n, n, 0.3, 100 + n);
        Eigen::MatrixXd Ad = oracles::to_eigen(A);
        int d = 6;
        SvdResult r = truncated_svd(make_operator(A), d, 1e-10, 4000);
        REQUIRE(r.converged);
        Eigen::MatrixXd approx = Eigen::MatrixXd::Zero(n, n);
        for (int c = 0; c < d; ++c) {
            Eigen::VectorXd uc(n), vc(n);
            for (int i = 0; i < n; ++i) {
                uc[i] = r.U.at(i, c);
                vc[i] = r.V.at(i, c);
            }
            approx += r.singular_values[c] * uc * vc.transpose();
        }
        double resid = (Ad - approx).squaredNorm();
        double tail = Ad.squaredNorm();
        for (int c = 0; c < d; ++c) tail -= r.singular_values[c] * r.singular_values[c];
        CHECK(resid == doctest::Approx(tail).epsilon(1e-6));
    }
}

TEST_CASE("grad_check: exact quadratic and constructed failure") {
    ScalarFn f = [](std::span<const double> x) {
        double s = 0;
        for (double v : x) s += v * v;
        return s;
    };
    GradientFn g = [](std::span<const double> x) {
        std::vector<double> out(x.begin(), x.end());
        for (double& v : out) v *= 2.0;
        return out;
    };
    Rng rng(17);
    std::vector<double> x(8);
    for (double& v : x) v = rng.uniform(1.0, 2.0);
    CHECK(grad_check(f, g, x, 1e-6) <= 1e-8);

    GradientFn g_wrong = [&](std::span<const double> xs) {
        std::vector<double> out = g(xs);
        for (double& v : out) v *= 2.0;  // deliberately doubled
        return out;
    };
    double err = grad_check(f, g_wrong, x, 1e-6);
    CHECK(err == doctest::Approx(0.5).epsilon(1e-4));
}

TEST_CASE("spectral_radius matches dense oracle") {
    // K2 is bipartite (periodic), the usual power-iteration failure mode.
    SparseMatrix K2 = SparseMatrix::from_triplets(2, 2, {{0, 1, 1.0}, {1, 0, 1.0}});
    CHECK(spectral_radius(K2) == doctest::Approx(1.0).epsilon(1e-6));

    for (std::uint64_t seed : {31u, 32u}) {
        Graph g = oracles::random_connected_graph(25, 0.15, seed);
        SparseMatrix W = g.adjacency();
        double rho = spectral_radius(W);
        double oracle = oracles::spectral_radius_dense(oracles::to_eigen(W));
        CHECK(rho == doctest::Approx(oracle).epsilon(1e-6));
    }
}

TEST_CASE("jacobi_eigh matches dense oracle") {
    SparseMatrix A = random_symmetric(24, 0.4, 77);
    std::vector<double> vals;
    DenseMatrix vecs;
    jacobi_eigh(A.to_dense(), vals, vecs);
    auto oracle = oracles::sym_eigenvalues(oracles::to_eigen(A));
    for (int i = 0; i < 24; ++i) CHECK(vals[i] == doctest::Approx(oracle[i]).epsilon(1e-10));
}
