#include "gembed/walks.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include "gembed/errors.hpp"

namespace gembed {

AliasTable::AliasTable(const std::vector<double>& weights) {
    std::size_t k = weights.size();
    prob_.assign(k, 0.0);
    alias_.assign(k, 0);
    double total = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw config_error("alias table: negative weight");
        total += w;
    }
    if (k == 0 || total <= 0.0) {
        prob_.clear();
        alias_.clear();
        return;
    }
    std::vector<double> scaled(k);
    for (std::size_t i = 0; i < k; ++i) scaled[i] = weights[i] * k / total;
    std::vector<int> small, large;
    for (std::size_t i = 0; i < k; ++i)
        (scaled[i] < 1.0 ? small : large).push_back(static_cast<int>(i));
    while (!small.empty() && !large.empty()) {
        int s = small.back();
        small.pop_back();
        int l = large.back();
        large.pop_back();
        prob_[s] = scaled[s];
        alias_[s] = l;
        scaled[l] = scaled[l] + scaled[s] - 1.0;
        (scaled[l] < 1.0 ? small : large).push_back(l);
    }
    for (int i : large) prob_[i] = 1.0;
    for (int i : small) prob_[i] = 1.0;
}

int AliasTable::sample(Rng& rng) const {
    std::size_t i = static_cast<std::size_t>(rng.bounded(prob_.size()));
    return rng.uniform() < prob_[i] ? static_cast<int>(i) : alias_[i];
}

Node2VecSampler::Node2VecSampler(const Graph& g, double p, double q,
                                 std::size_t alias_entry_cap)
    : g_(g), p_(p), q_(q), second_order_trivial_(p == 1.0 && q == 1.0) {
    if (p <= 0.0 || q <= 0.0) throw config_error("node2vec: need p > 0 and q > 0");

    node_tables_.resize(g.n());
    for (int v = 0; v < g.n(); ++v) {
        auto w = g.neighbor_weights(v);
        if (!w.empty()) node_tables_[v] = AliasTable(std::vector<double>(w.begin(), w.end()));
    }
    if (second_order_trivial_) return;

    std::size_t entries = 0;
    for (int t = 0; t < g.n(); ++t)
        for (int v : g.neighbors(t)) entries += g.neighbors(v).size();
    if (entries > alias_entry_cap) return;  // fall back to linear-scan steps

    edge_tables_.resize(g.adjacency().nnz());
    std::size_t slot = 0;
    std::vector<double> weights;
    for (int t = 0; t < g.n(); ++t) {
        for (int v : g.neighbors(t)) {
            auto nb = g.neighbors(v);
            auto wv = g.neighbor_weights(v);
            weights.assign(nb.size(), 0.0);
            for (std::size_t x = 0; x < nb.size(); ++x) weights[x] = wv[x] * alpha(t, nb[x]);
            if (!nb.empty()) edge_tables_[slot] = AliasTable(weights);
            ++slot;
        }
    }
}

double Node2VecSampler::alpha(int prev, int x) const {
    if (x == prev) return 1.0 / p_;
    if (g_.has_edge(prev, x)) return 1.0;
    return 1.0 / q_;
}

int Node2VecSampler::first_step(int cur, Rng& rng) const {
    auto nb = g_.neighbors(cur);
    if (nb.empty()) return -1;
    return nb[node_tables_[cur].sample(rng)];
}

int Node2VecSampler::step(int prev, int cur, Rng& rng) const {
    auto nb = g_.neighbors(cur);
    if (nb.empty()) return -1;
    if (second_order_trivial_) return nb[node_tables_[cur].sample(rng)];

    if (!edge_tables_.empty()) {
        // CSR slot of (prev -> cur): row offset of prev plus position of cur.
        auto prev_nb = g_.neighbors(prev);
        auto it = std::lower_bound(prev_nb.begin(), prev_nb.end(), cur);
        std::size_t slot = g_.neighbor_offset(prev) + static_cast<std::size_t>(it - prev_nb.begin());
        return nb[edge_tables_[slot].sample(rng)];
    }

    auto wv = g_.neighbor_weights(cur);
    double total = 0.0;
    for (std::size_t x = 0; x < nb.size(); ++x) total += wv[x] * alpha(prev, nb[x]);
    double u = rng.uniform() * total;
    double acc = 0.0;
    for (std::size_t x = 0; x < nb.size(); ++x) {
        acc += wv[x] * alpha(prev, nb[x]);
        if (u < acc) return nb[x];
    }
    return nb[nb.size() - 1];
}

namespace {

std::vector<int> run_walk(const Node2VecSampler& sampler, int start, int length, Rng& rng) {
    std::vector<int> walk;
    walk.reserve(length);
    walk.push_back(start);
    if (length < 2) return walk;
    int next = sampler.first_step(start, rng);
    if (next < 0) return walk;
    walk.push_back(next);
    while (static_cast<int>(walk.size()) < length) {
        int cur = walk.back();
        int prev = walk[walk.size() - 2];
        int nxt = sampler.step(prev, cur, rng);
        if (nxt < 0) break;
        walk.push_back(nxt);
    }
    return walk;
}

}  // namespace

WalkCorpus generate_walks(const Graph& g, const WalkConfig& cfg, int threads) {
    if (cfg.walk_length < 2) throw config_error("walks: need walk_length >= 2");
    if (cfg.window < 1) throw config_error("walks: need window >= 1");
    if (cfg.num_walks < 1) throw config_error("walks: need num_walks >= 1");
    Node2VecSampler sampler(g, cfg.p, cfg.q);

    int n = g.n();
    WalkCorpus corpus;
    corpus.n = n;
    corpus.walks.resize(static_cast<std::size_t>(cfg.num_walks) * n);

    for (int pass = 0; pass < cfg.num_walks; ++pass) {
        std::vector<int> order(n);
        for (int i = 0; i < n; ++i) order[i] = i;
        Rng order_rng(hash_mix(cfg.seed, 0x0dde7ULL, static_cast<std::uint64_t>(pass)));
        order_rng.shuffle(order);

        auto work = [&](int lo, int hi) {
            for (int idx = lo; idx < hi; ++idx) {
                int node = order[idx];
                Rng walk_rng(hash_mix(cfg.seed, static_cast<std::uint64_t>(pass),
                                      static_cast<std::uint64_t>(node)));
                corpus.walks[static_cast<std::size_t>(pass) * n + idx] =
                    run_walk(sampler, node, cfg.walk_length, walk_rng);
            }
        };
        if (threads <= 1 || n < 256) {
            work(0, n);
        } else {
            int t = std::min(threads, 64);
            std::vector<std::thread> pool;
            for (int i = 0; i < t; ++i) {
                int lo = static_cast<int>(static_cast<long long>(n) * i / t);
                int hi = static_cast<int>(static_cast<long long>(n) * (i + 1) / t);
                pool.emplace_back(work, lo, hi);
            }
            for (auto& th : pool) th.join();
        }
    }
    return corpus;
}

void save_walks(const WalkCorpus& corpus, std::ostream& out) {
    for (const auto& walk : corpus.walks) {
        for (std::size_t i = 0; i < walk.size(); ++i) {
            if (i) out << ' ';
            out << walk[i];
        }
        out << '\n';
    }
}

WalkCorpus load_walks(std::istream& in, int n) {
    WalkCorpus corpus;
    corpus.n = n;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::vector<int> walk;
        int id;
        while (ls >> id) {
            if (id < 0 || id >= n) throw io_error("walk corpus: node id out of range");
            walk.push_back(id);
        }
        if (!walk.empty()) corpus.walks.push_back(std::move(walk));
    }
    return corpus;
}

}  // namespace gembed
