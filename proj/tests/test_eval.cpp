#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <unordered_set>

#include "gembed/errors.hpp"
#include "gembed/eval.hpp"
#include "gembed/gradcheck.hpp"
#include "gembed/proximity.hpp"
#include "gembed/spectral.hpp"
#include "oracles.hpp"

using namespace gembed;

namespace {

// Brute-force AP: recompute Pr@k by set intersection at every hit position.
double ap_bruteforce(const std::vector<int>& ranking, const std::unordered_set<int>& obs) {
    double acc = 0.0;
    int hits = 0;
    for (std::size_t k = 1; k <= ranking.size(); ++k) {
        if (!obs.count(ranking[k - 1])) continue;
        int inter = 0;
        for (std::size_t i = 0; i < k; ++i) inter += obs.count(ranking[i]) ? 1 : 0;
        acc += static_cast<double>(inter) / static_cast<double>(k);
        ++hits;
    }
    return hits ? acc / hits : -1.0;
}

Embedding noise_embedding(int n, int d, std::uint64_t seed) {
    Embedding emb;
    emb.d = d;
    emb.method = "noise";
    emb.Y = DenseMatrix(n, d);
    Rng rng(seed);
    for (double& v : emb.Y.data()) v = rng.uniform(-1, 1);
    return emb;
}

}  // namespace

TEST_CASE("precision_at_k: definition arithmetic") {
    PairSet obs(false);
    obs.insert(0, 1);
    std::vector<std::pair<int, int>> ranked = {{0, 1}, {2, 3}};
    CHECK(precision_at_k(ranked, obs, 2) == 0.5);
    obs.insert(2, 3);
    CHECK(precision_at_k(ranked, obs, 2) == 1.0);
    CHECK_THROWS_AS(precision_at_k(ranked, obs, 0), config_error);
    CHECK_THROWS_AS(precision_at_k(ranked, obs, 3), config_error);
}

TEST_CASE("precision_at_k: matches set-intersection oracle on random instances") {
    Rng rng(90);
    for (int trial = 0; trial < 20; ++trial) {
        PairSet obs(false);
        std::vector<std::pair<int, int>> ranked;
        for (int i = 0; i < 40; ++i) {
            int u = static_cast<int>(rng.bounded(30));
            int v = static_cast<int>(rng.bounded(30));
            if (u == v) continue;
            ranked.push_back({u, v});
            if (rng.uniform() < 0.3) obs.insert(u, v);
        }
        if (ranked.empty()) continue;
        std::size_t k = 1 + rng.bounded(ranked.size());
        int inter = 0;
        for (std::size_t i = 0; i < k; ++i)
            inter += obs.contains(ranked[i].first, ranked[i].second) ? 1 : 0;
        double expect = static_cast<double>(inter) / static_cast<double>(k);
        CHECK(precision_at_k(ranked, obs, k) == doctest::Approx(expect).epsilon(1e-15));
    }
}

TEST_CASE("average precision: hand case [hit, miss, hit]") {
    std::vector<int> ranking = {7, 8, 9};
    std::unordered_set<int> obs = {7, 9};
    CHECK(average_precision(ranking, obs) == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
}

TEST_CASE("map_score: perfect rankings give 1.0, oracle agreement at 1e-12") {
    std::vector<std::vector<int>> rankings = {{1, 2, 3}, {0, 3, 2}};
    std::vector<std::unordered_set<int>> obs = {{1, 2, 3}, {0}};
    CHECK(map_score(rankings, obs) == 1.0);

    Rng rng(91);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::vector<int>> rk(5);
        std::vector<std::unordered_set<int>> ob(5);
        for (int i = 0; i < 5; ++i) {
            for (int c = 0; c < 12; ++c) rk[i].push_back(c);
            rng.shuffle(rk[i]);
            for (int c = 0; c < 12; ++c)
                if (rng.uniform() < 0.4) ob[i].insert(c);
        }
        double expect = 0.0;
        int counted = 0;
        for (int i = 0; i < 5; ++i) {
            double ap = ap_bruteforce(rk[i], ob[i]);
            if (ap >= 0.0) {
                expect += ap;
                ++counted;
            }
        }
        if (counted == 0) continue;
        CHECK(std::fabs(map_score(rk, ob) - expect / counted) <= 1e-12);
    }
}

TEST_CASE("map invariants: prefix agreement and hit-count monotonicity") {
    std::vector<int> full = {3, 1, 4, 1, 5, 9, 2, 6};
    std::unordered_set<int> obs = {3, 4};
    // All hits sit in the first five entries; the prefix AP agrees.
    std::vector<int> prefix(full.begin(), full.begin() + 5);
    CHECK(average_precision(full, obs) == average_precision(prefix, obs));

    PairSet pobs(false);
    pobs.insert(0, 1);
    pobs.insert(1, 2);
    std::vector<std::pair<int, int>> ranked = {{0, 1}, {5, 6}, {1, 2}, {2, 3}};
    double prev_hits = 0.0;
    for (std::size_t k = 1; k <= ranked.size(); ++k) {
        double hits = precision_at_k(ranked, pobs, k) * k;
        CHECK(hits >= prev_hits - 1e-12);
        prev_hits = hits;
    }
}

TEST_CASE("micro/macro F1: hand values and equality property") {
    std::vector<long long> tp = {3}, fp = {1}, fn = {2};
    CHECK(micro_f1(tp, fp, fn) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

    // Per-label F1 {1.0, 0.5} averages to 0.75.
    std::vector<long long> tp2 = {4, 1}, fp2 = {0, 1}, fn2 = {0, 1};
    CHECK(f1_from_counts(4, 0, 0) == 1.0);
    CHECK(f1_from_counts(1, 1, 1) == 0.5);
    CHECK(macro_f1(tp2, fp2, fn2) == doctest::Approx(0.75).epsilon(1e-15));

    // Identical confusion counts per label make micro and macro agree.
    std::vector<long long> tp3 = {2, 2, 2}, fp3 = {1, 1, 1}, fn3 = {3, 3, 3};
    CHECK(micro_f1(tp3, fp3, fn3) == doctest::Approx(macro_f1(tp3, fp3, fn3)).epsilon(1e-15));
}

TEST_CASE("reconstruct_eval: exact factorization ranks all K4 pairs first") {
    GraphBuilder b(4, false, false);
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) b.add_edge(i, j);
    Graph k4 = b.build();
    ProximityMatrix S = katz_matrix(k4, katz_default_beta(k4));
    Embedding emb = hope_embed(k4, 4, S);
    RankedEvalConfig cfg;
    cfg.ks = {1, 3, 6};
    cfg.sample = 4;
    cfg.trials = 1;
    EvalReport r = reconstruct_eval(k4, emb, make_score(emb, ScoreKind::dot), cfg);
    for (const MeanStd& p : r.precision) CHECK(p.mean == 1.0);  // every pair is an edge
    CHECK(r.map.mean == 1.0);
}

TEST_CASE("reconstruct_eval: directed graphs rank both pair orientations") {
    GraphBuilder b(3, true, false);
    b.add_edge(0, 1);
    b.add_edge(1, 2);
    b.add_edge(2, 0);
    Graph ring = b.build();
    ProximityMatrix S = katz_matrix(ring, 0.3);
    Embedding emb = hope_embed(ring, 3, S);
    RankedEvalConfig cfg;
    cfg.ks = {3, 6};
    cfg.sample = 3;
    cfg.trials = 1;
    EvalReport r = reconstruct_eval(ring, emb, make_score(emb, ScoreKind::dot), cfg);
    // Exact factorization of the directed Katz matrix puts the three true
    // edges ahead of the three reversed pairs.
    CHECK(r.precision[0].mean == 1.0);
    CHECK(r.precision[1].mean == 0.5);
}

TEST_CASE("reconstruct_eval: noise embedding scores near the density baseline") {
    auto [g, labels] = generate_sbm(200, 3, 0.15, 0.02, 92);
    Embedding emb = noise_embedding(200, 8, 93);
    RankedEvalConfig cfg;
    cfg.ks = {100};
    cfg.sample = 200;
    cfg.trials = 1;
    EvalReport r = reconstruct_eval(g, emb, make_score(emb, ScoreKind::dot), cfg);
    double baseline = static_cast<double>(g.edge_count()) / (200.0 * 199.0 / 2.0);
    CHECK(r.map.mean > 0.5 * baseline);
    CHECK(r.map.mean < 2.5 * baseline);
}

TEST_CASE("reconstruct_eval: karate LE clears five times the density baseline") {
    Graph karate = load_edge_list_file("data/karate.edges", false, false);
    Embedding emb = le_embed(karate, 16);
    RankedEvalConfig cfg;
    cfg.ks = {10};
    cfg.sample = 34;
    cfg.trials = 1;
    EvalReport r = reconstruct_eval(karate, emb, make_score(emb, ScoreKind::dot), cfg);
    double baseline = 78.0 / (34.0 * 33.0 / 2.0);
    CHECK(r.map.mean >= 5.0 * baseline);
}

TEST_CASE("link_predict_eval: hits are counted exactly once at full depth") {
    auto [g, labels] = generate_sbm(120, 3, 0.25, 0.03, 94);
    RankedEvalConfig cfg;
    cfg.sample = 120;
    cfg.trials = 1;
    cfg.seed = 95;
    std::size_t total_pairs = 120 * 119 / 2;
    EdgeSplit split = split_edges(g, 0.2, hash_mix(cfg.seed, 0x51dULL));
    std::size_t candidates = total_pairs - split.train_graph.edge_count();
    cfg.ks = {static_cast<int>(candidates)};

    EmbedderFn embedder = [](const Graph& train) {
        ProximityMatrix S = katz_matrix(train, katz_default_beta(train));
        return hope_embed(train, 16, S);
    };
    EvalReport r = link_predict_eval(g, embedder, 0.2, cfg);
    double hits = r.precision[0].mean * static_cast<double>(candidates);
    CHECK(hits == doctest::Approx(split.heldout_edges.size()).epsilon(1e-9));
}

TEST_CASE("link_predict_eval: HOPE lifts karate MAP well above the heldout baseline") {
    Graph g = load_edge_list_file("data/karate.edges", false, false);
    RankedEvalConfig cfg;
    cfg.ks = {16};
    cfg.sample = 34;
    cfg.trials = 5;
    cfg.seed = 97;
    EmbedderFn embedder = [](const Graph& train) {
        ProximityMatrix S = katz_matrix(train, katz_default_beta(train));
        return hope_embed(train, 16, S);
    };
    EvalReport r = link_predict_eval(g, embedder, 0.2, cfg);
    double heldout = r.hyperparams.at("heldout_edges");
    double candidates = 34.0 * 33.0 / 2.0 - (78.0 - heldout);
    double baseline = heldout / candidates;
    CHECK(r.map.mean >= 5.0 * baseline);
}

TEST_CASE("logreg: separable toy reaches training accuracy 1.0") {
    DenseMatrix X(8, 2);
    std::vector<std::vector<int>> labels(8);
    for (int i = 0; i < 8; ++i) {
        bool pos = i < 4;
        X.at(i, 0) = (pos ? 1.0 : -1.0) + 0.1 * i;
        X.at(i, 1) = pos ? 0.5 : -0.5;
        labels[i] = {pos ? 1 : 0};
    }
    LogRegModel m = train_logreg_ovr(X, labels, 2, {});
    for (int i = 0; i < 8; ++i) {
        std::vector<double> s = m.scores(X.row(i));
        int pred = s[1] > s[0] ? 1 : 0;
        CHECK(pred == labels[i][0]);
    }
}

TEST_CASE("logreg: all-same-label data predicts that label constantly") {
    DenseMatrix X(6, 2);
    Rng rng(98);
    for (double& v : X.data()) v = rng.uniform(-1, 1);
    std::vector<std::vector<int>> labels(6, std::vector<int>{1});
    LogRegModel m = train_logreg_ovr(X, labels, 2, {});
    for (int i = 0; i < 6; ++i) {
        std::vector<double> s = m.scores(X.row(i));
        CHECK(s[1] > s[0]);
    }
}

TEST_CASE("logreg: gradient passes the finite-difference gate at 1e-6") {
    Rng rng(99);
    DenseMatrix X(10, 3);
    for (double& v : X.data()) v = rng.uniform(-1, 1);
    std::vector<int> y(10);
    for (int& v : y) v = rng.uniform() < 0.5 ? 0 : 1;
    std::vector<double> params(4);
    for (double& v : params) v = rng.uniform(-0.5, 0.5);
    double l2 = 0.01;
    ScalarFn f = [&](std::span<const double> w) { return logreg_loss(X, y, w, l2); };
    GradientFn grad = [&](std::span<const double> w) { return logreg_grad(X, y, w, l2); };
    CHECK(grad_check(f, grad, params, 1e-6) <= 1e-6);
}

TEST_CASE("node_classify_eval: perfect one-hot features score 1.0 everywhere") {
    int n = 300, L = 3;  // large enough that every class appears in a 10% split
    Embedding emb;
    emb.d = L;
    emb.method = "onehot";
    emb.Y = DenseMatrix(n, L);
    NodeLabels labels;
    labels.label_count = L;
    labels.labels.resize(n);
    for (int i = 0; i < n; ++i) {
        int l = i % L;
        emb.Y.at(i, l) = 1.0;
        labels.labels[i] = {l};
    }
    ClassifyEvalConfig cfg;
    cfg.ratios = {0.1, 0.5, 0.9};
    cfg.trials = 3;
    EvalReport r = node_classify_eval(emb, labels, cfg);
    for (const MeanStd& m : r.micro_f1) CHECK(m.mean == doctest::Approx(1.0));
    for (const MeanStd& m : r.macro_f1) CHECK(m.mean == doctest::Approx(1.0));
}

TEST_CASE("node_classify_eval: empty ratios and labels are rejected") {
    Embedding emb = noise_embedding(10, 2, 1);
    NodeLabels empty;
    empty.label_count = 0;
    empty.labels.resize(10);
    ClassifyEvalConfig cfg;
    CHECK_THROWS_AS(node_classify_eval(emb, empty, cfg), config_error);
}

TEST_CASE("ranked pairs: dot ranking invariant under joint orthogonal rotation") {
    int n = 20, d = 4;
    Rng rng(100);
    Embedding emb = noise_embedding(n, d, 101);
    emb.Yt = DenseMatrix(n, d);
    for (double& v : emb.Yt->data()) v = rng.uniform(-1, 1);

    // Random orthogonal Q by Gram-Schmidt on a random matrix.
    DenseMatrix Q(d, d);
    for (double& v : Q.data()) v = rng.uniform(-1, 1);
    for (int c = 0; c < d; ++c) {
        for (int p = 0; p < c; ++p) {
            double h = 0;
            for (int i = 0; i < d; ++i) h += Q.at(i, c) * Q.at(i, p);
            for (int i = 0; i < d; ++i) Q.at(i, c) -= h * Q.at(i, p);
        }
        double nrm = 0;
        for (int i = 0; i < d; ++i) nrm += Q.at(i, c) * Q.at(i, c);
        nrm = std::sqrt(nrm);
        for (int i = 0; i < d; ++i) Q.at(i, c) /= nrm;
    }
    Embedding rotated = emb;
    rotated.Y = emb.Y.multiply(Q);
    rotated.Yt = emb.Yt->multiply(Q);

    ScoreFn s0 = make_score(emb, ScoreKind::dot);
    ScoreFn s1 = make_score(rotated, ScoreKind::dot);
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pairs.push_back({i, j});
    auto order = [&](const ScoreFn& s) {
        std::vector<int> idx(pairs.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
        std::sort(idx.begin(), idx.end(), [&](int a, int b) {
            double sa = s(pairs[a].first, pairs[a].second);
            double sb = s(pairs[b].first, pairs[b].second);
            if (sa != sb) return sa > sb;
            return a < b;
        });
        return idx;
    };
    CHECK(order(s0) == order(s1));
}

TEST_CASE("sweep: grid driver contract and determinism") {
    auto [g, labels] = generate_sbm(80, 2, 0.3, 0.05, 102);
    ParamGrid grid;
    grid.axes.push_back({"beta", {0.00390625, 0.015625, 0.0625}});
    auto runner = [&](const std::map<std::string, double>& params) {
        ProximityMatrix S = katz_matrix(g, params.at("beta"));
        Embedding emb = hope_embed(g, 8, S);
        RankedEvalConfig cfg;
        cfg.ks = {20};
        cfg.sample = 80;
        cfg.trials = 2;
        return reconstruct_eval(g, emb, make_score(emb, ScoreKind::dot), cfg);
    };
    SweepResult a = run_sweep(grid, runner);
    CHECK(a.cells.size() == 3);
    int best_flags = 0;
    for (const SweepCell& c : a.cells) {
        CHECK(c.ok);
        CHECK(c.report.map.mean >= 0.0);
        CHECK(c.report.map.mean <= 1.0);
        best_flags += c.best ? 1 : 0;
    }
    CHECK(best_flags == 1);

    SweepResult b = run_sweep(grid, runner);
    CHECK(sweep_to_csv(a) == sweep_to_csv(b));

    // Cell failures are recorded without aborting the sweep.
    ParamGrid bad;
    bad.axes.push_back({"beta", {0.0625, 99.0}});
    SweepResult c = run_sweep(bad, runner);
    CHECK(c.cells.size() == 2);
    CHECK(c.cells[0].ok);
    CHECK_FALSE(c.cells[1].ok);
    CHECK(!c.cells[1].error.empty());
}

TEST_CASE("report serialization: stable bytes and runtime excluded") {
    EvalReport r;
    r.task = "reconstruct";
    r.ks = {10};
    r.precision = {{0.5, 0.1}};
    r.map = {0.25, 0.05};
    r.trials = 5;
    r.hyperparams["dim"] = 8;
    r.runtime_seconds = 123.456;
    std::string a = report_to_json(r);
    r.runtime_seconds = 999.0;
    std::string b = report_to_json(r);
    CHECK(a == b);
    CHECK(a.find("runtime") == std::string::npos);
}
