#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "gembed/sgns.hpp"
#include "gembed/walks.hpp"
#include "oracles.hpp"

using namespace gembed;

namespace {

Graph cycle(int n) {
    GraphBuilder b(n, false, false);
    for (int i = 0; i < n; ++i) b.add_edge(i, (i + 1) % n);
    return b.build();
}

Graph path3() {
    GraphBuilder b(3, false, false);
    b.add_edge(0, 1);
    b.add_edge(1, 2);
    return b.build();
}

// Empirical next-step distribution from state (prev, cur).
std::map<int, double> empirical_step(const Node2VecSampler& sampler, int prev, int cur,
                                     int draws, std::uint64_t seed) {
    Rng rng(hash_mix(seed, 0x77ULL));
    std::map<int, double> freq;
    for (int t = 0; t < draws; ++t) freq[sampler.step(prev, cur, rng)] += 1.0;
    for (auto& [k, v] : freq) v /= draws;
    return freq;
}

// Exact biased distribution: w(cur,x) * alpha(prev,x), normalized.
std::map<int, double> exact_step(const Graph& g, double p, double q, int prev, int cur) {
    std::map<int, double> w;
    auto nb = g.neighbors(cur);
    auto wv = g.neighbor_weights(cur);
    double total = 0.0;
    for (std::size_t k = 0; k < nb.size(); ++k) {
        int x = nb[k];
        double a = x == prev ? 1.0 / p : (g.has_edge(prev, x) ? 1.0 : 1.0 / q);
        w[x] = wv[k] * a;
        total += w[x];
    }
    for (auto& [k, v] : w) v /= total;
    return w;
}

void check_bias_law(const Graph& g, double p, double q, std::size_t alias_cap,
                    double tol = 0.01) {
    Node2VecSampler sampler(g, p, q, alias_cap);
    for (int t = 0; t < g.n(); ++t) {
        for (int v : g.neighbors(t)) {
            auto expect = exact_step(g, p, q, t, v);
            auto emp = empirical_step(sampler, t, v, 100000, 1000 + t * 97 + v);
            for (const auto& [x, pe] : expect)
                CHECK(std::fabs(emp[x] - pe) <= tol);
        }
    }
}

}  // namespace

TEST_CASE("walks: corpus structure and edge validity") {
    Graph g = oracles::random_connected_graph(30, 0.1, 50, false);
    WalkConfig cfg;
    cfg.num_walks = 4;
    cfg.walk_length = 20;
    cfg.seed = 51;
    WalkCorpus corpus = generate_walks(g, cfg);
    CHECK(corpus.walks.size() == 4u * 30u);

    std::vector<int> starts(30, 0);
    for (const auto& walk : corpus.walks) {
        REQUIRE(!walk.empty());
        CHECK(walk.size() <= 20);
        ++starts[walk.front()];
        for (std::size_t i = 1; i < walk.size(); ++i) CHECK(g.has_edge(walk[i - 1], walk[i]));
    }
    for (int s : starts) CHECK(s == 4);  // r walks per start node
}

TEST_CASE("walks: zero-degree start yields a single-node walk") {
    GraphBuilder b(3, false, false);
    b.add_edge(0, 1);
    WalkConfig cfg;
    cfg.num_walks = 2;
    cfg.walk_length = 10;
    WalkCorpus corpus = generate_walks(b.build(), cfg);
    int singletons = 0;
    for (const auto& walk : corpus.walks)
        if (walk.size() == 1) {
            CHECK(walk.front() == 2);
            ++singletons;
        }
    CHECK(singletons == 2);
}

TEST_CASE("walks: uniform steps on C10 are 0.5/0.5 within 0.01") {
    Graph g = cycle(10);
    Node2VecSampler sampler(g, 1.0, 1.0);
    auto emp = empirical_step(sampler, 0, 1, 100000, 52);
    CHECK(std::fabs(emp[0] - 0.5) <= 0.01);
    CHECK(std::fabs(emp[2] - 0.5) <= 0.01);
}

TEST_CASE("walks: hand-computed biased cases on the path 0-1-2") {
    Graph g = path3();
    {
        Node2VecSampler s(g, 10.0, 10.0);
        auto emp = empirical_step(s, 0, 1, 100000, 53);
        CHECK(std::fabs(emp[0] - 0.5) <= 0.01);  // alpha(0)=1/10, alpha(2)=1/10
    }
    {
        Node2VecSampler s(g, 10.0, 0.1);
        auto emp = empirical_step(s, 0, 1, 100000, 54);
        CHECK(std::fabs(emp[2] - 10.0 / 10.1) <= 0.01);
    }
}

TEST_CASE("walks: sampler law holds on a 10-node graph, alias and linear paths") {
    Graph g = oracles::random_connected_graph(10, 0.3, 55, true);
    check_bias_law(g, 4.0, 0.25, /*alias_cap=*/8u << 20);  // precomputed tables
    check_bias_law(g, 4.0, 0.25, /*alias_cap=*/0);         // linear-scan fallback
}

TEST_CASE("walks: p=q=1 transitions match the uniform law (chi-square)") {
    // df=1 and df=2 critical values at significance 0.01.
    Graph c10 = cycle(10);
    Node2VecSampler s1(c10, 1.0, 1.0);
    auto emp = empirical_step(s1, 0, 1, 100000, 56);
    double chi = 0.0;
    for (int x : {0, 2}) {
        double obs = emp[x] * 100000, expect = 50000;
        chi += (obs - expect) * (obs - expect) / expect;
    }
    CHECK(chi < 6.635);

    GraphBuilder sb(4, false, false);
    sb.add_edge(0, 1);
    sb.add_edge(0, 2);
    sb.add_edge(0, 3);
    sb.add_edge(1, 2);
    Graph star = sb.build();
    Node2VecSampler s2(star, 1.0, 1.0);
    auto emp2 = empirical_step(s2, 1, 0, 100000, 57);
    double chi2 = 0.0;
    for (int x : {1, 2, 3}) {
        double obs = emp2[x] * 100000, expect = 100000.0 / 3.0;
        chi2 += (obs - expect) * (obs - expect) / expect;
    }
    CHECK(chi2 < 9.210);
}

TEST_CASE("walks: corpus independent of thread count and deterministic") {
    auto [g, labels] = generate_sbm(400, 3, 0.1, 0.01, 58);
    WalkConfig cfg;
    cfg.num_walks = 3;
    cfg.walk_length = 15;
    cfg.p = 2.0;
    cfg.q = 0.5;
    cfg.seed = 59;
    WalkCorpus a = generate_walks(g, cfg, 1);
    WalkCorpus b = generate_walks(g, cfg, 4);
    CHECK(a.walks == b.walks);
    WalkCorpus c = generate_walks(g, cfg, 1);
    CHECK(a.walks == c.walks);
}

TEST_CASE("walks: text round trip") {
    Graph g = cycle(6);
    WalkConfig cfg;
    cfg.num_walks = 2;
    cfg.walk_length = 8;
    WalkCorpus corpus = generate_walks(g, cfg);
    std::ostringstream out;
    save_walks(corpus, out);
    std::istringstream in(out.str());
    WalkCorpus back = load_walks(in, 6);
    CHECK(back.walks == corpus.walks);
}

TEST_CASE("sgns: disjoint token groups separate in cosine similarity") {
    // Walks confined to {0..9} or {10..19}.
    WalkCorpus corpus;
    corpus.n = 20;
    Rng rng(60);
    for (int w = 0; w < 200; ++w) {
        int base = (w % 2) * 10;
        std::vector<int> walk;
        for (int i = 0; i < 20; ++i) walk.push_back(base + static_cast<int>(rng.bounded(10)));
        corpus.walks.push_back(std::move(walk));
    }
    Embedding emb = sgns_train(corpus, 8, 5, 5, 0.025, 4, 61);
    // Fixed-sample loss estimate decreases across epochs at lr = 0.025.
    for (std::size_t e = 1; e < emb.loss_trace.size(); ++e)
        CHECK(emb.loss_trace[e] < emb.loss_trace[e - 1]);

    auto cosine = [&](int i, int j) {
        double dot = 0, ni = 0, nj = 0;
        for (int c = 0; c < 8; ++c) {
            dot += emb.Y.at(i, c) * emb.Y.at(j, c);
            ni += emb.Y.at(i, c) * emb.Y.at(i, c);
            nj += emb.Y.at(j, c) * emb.Y.at(j, c);
        }
        return dot / std::sqrt(ni * nj);
    };
    double intra = 0, inter = 0;
    int intra_n = 0, inter_n = 0;
    for (int i = 0; i < 20; ++i)
        for (int j = i + 1; j < 20; ++j) {
            if ((i < 10) == (j < 10)) {
                intra += cosine(i, j);
                ++intra_n;
            } else {
                inter += cosine(i, j);
                ++inter_n;
            }
        }
    CHECK(intra / intra_n > inter / inter_n);
}

TEST_CASE("sgns: alternating walk drives the positive pair together") {
    WalkCorpus corpus;
    corpus.n = 8;  // only tokens 0 and 1 ever occur
    std::vector<int> walk;
    for (int i = 0; i < 40; ++i) walk.push_back(i % 2);
    corpus.walks.push_back(walk);
    DenseMatrix C;
    Embedding emb = sgns_train(corpus, 4, 1, 1, 0.05, 6, 62, &C);
    double dot = 0;
    for (int c = 0; c < 4; ++c) dot += emb.Y.at(0, c) * C.at(1, c);
    CHECK(dot > 0.0);  // context table starts at zero, so any gain is learned
    CHECK(emb.loss_trace.back() < emb.loss_trace.front());
}

TEST_CASE("sgns: SBM walks recover community structure (3-NN >= 0.8)") {
    auto [g, labels] = generate_sbm(600, 3, 0.15, 0.005, 63);
    WalkConfig cfg;
    cfg.num_walks = 8;
    cfg.walk_length = 40;
    cfg.window = 8;
    cfg.seed = 64;
    WalkCorpus corpus = generate_walks(g, cfg);
    Embedding emb = sgns_train(corpus, 32, cfg.window, 5, 0.025, 2, 64);
    CHECK(oracles::knn_label_agreement(emb.Y, labels.labels, 3) >= 0.8);
}

TEST_CASE("node2vec: karate hubs 32 and 33 are mutual top-5 cosine neighbors") {
    Graph karate = load_edge_list_file("data/karate.edges", false, false);
    WalkConfig cfg;
    cfg.num_walks = 10;
    cfg.walk_length = 80;
    cfg.window = 10;
    cfg.seed = 65;
    Embedding emb = node2vec_embed(karate, 16, cfg, 5, 0.025, 3);

    auto cosine = [&](int i, int j) {
        double dot = 0, ni = 0, nj = 0;
        for (int c = 0; c < 16; ++c) {
            dot += emb.Y.at(i, c) * emb.Y.at(j, c);
            ni += emb.Y.at(i, c) * emb.Y.at(i, c);
            nj += emb.Y.at(j, c) * emb.Y.at(j, c);
        }
        return dot / std::sqrt(ni * nj);
    };
    auto rank_of = [&](int query, int target) {
        std::vector<std::pair<double, int>> sims;
        for (int j = 0; j < 34; ++j)
            if (j != query) sims.push_back({cosine(query, j), j});
        std::sort(sims.begin(), sims.end(), [](auto& a, auto& b) { return a.first > b.first; });
        for (std::size_t r = 0; r < sims.size(); ++r)
            if (sims[r].second == target) return static_cast<int>(r);
        return 33;
    };
    CHECK(rank_of(32, 33) < 5);
    CHECK(rank_of(33, 32) < 5);
}

TEST_CASE("node2vec: deterministic per seed") {
    Graph g = cycle(12);
    WalkConfig cfg;
    cfg.num_walks = 3;
    cfg.walk_length = 10;
    cfg.window = 3;
    cfg.seed = 66;
    Embedding a = node2vec_embed(g, 4, cfg, 2, 0.025, 2);
    Embedding b = node2vec_embed(g, 4, cfg, 2, 0.025, 2);
    CHECK(a.Y.data() == b.Y.data());
}
