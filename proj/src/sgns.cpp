#include "gembed/sgns.hpp"

#include <algorithm>
#include <cmath>

#include "gembed/errors.hpp"
#include "gembed/rng.hpp"

namespace gembed {

namespace {

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    double e = std::exp(x);
    return e / (1.0 + e);
}

double log_sigmoid(double x) {
    if (x >= 0.0) return -std::log1p(std::exp(-x));
    return x - std::log1p(std::exp(x));
}

struct EvalPair {
    int center, context;
    std::vector<int> negatives;
};

}  // namespace

Embedding sgns_train(const WalkCorpus& corpus, int d, int window, int neg,
                     double lr, int epochs, std::uint64_t seed,
                     DenseMatrix* context_out) {
    if (corpus.walks.empty()) throw config_error("sgns: empty corpus");
    if (d < 1 || window < 1 || neg < 1 || lr <= 0.0 || epochs < 1)
        throw config_error("sgns: bad training configuration");
    int n = corpus.n;

    // Noise distribution: corpus unigram counts ^ 0.75.
    std::vector<double> noise(n, 0.0);
    std::size_t pair_total = 0;
    for (const auto& walk : corpus.walks) {
        int len = static_cast<int>(walk.size());
        for (int i = 0; i < len; ++i) {
            noise[walk[i]] += 1.0;
            pair_total += std::min(len - 1, i + window) - std::max(0, i - window);
        }
    }
    for (double& v : noise) v = v > 0.0 ? std::pow(v, 0.75) : 0.0;
    AliasTable noise_table(noise);
    if (noise_table.empty()) throw config_error("sgns: corpus has no tokens");

    Rng rng(hash_mix(seed, 0x59b5ULL));
    DenseMatrix Y(n, d);
    DenseMatrix C(n, d);
    for (double& v : Y.data()) v = (rng.uniform() - 0.5) / d;

    // Fixed pair sample for the per-epoch loss estimate.
    std::vector<EvalPair> eval_pairs;
    {
        Rng erng(hash_mix(seed, 0xe7a1ULL));
        std::size_t budget = 2000;
        for (const auto& walk : corpus.walks) {
            if (eval_pairs.size() >= budget) break;
            int len = static_cast<int>(walk.size());
            for (int i = 0; i < len && eval_pairs.size() < budget; ++i) {
                int lo = std::max(0, i - window), hi = std::min(len - 1, i + window);
                for (int j = lo; j <= hi && eval_pairs.size() < budget; ++j) {
                    if (j == i) continue;
                    EvalPair p{walk[i], walk[j], {}};
                    for (int t = 0; t < neg; ++t) p.negatives.push_back(noise_table.sample(erng));
                    eval_pairs.push_back(std::move(p));
                }
            }
        }
    }
    auto eval_loss = [&]() {
        double loss = 0.0;
        for (const EvalPair& p : eval_pairs) {
            const double* yc = Y.row(p.center).data();
            double s = 0.0;
            const double* cx = C.row(p.context).data();
            for (int c = 0; c < d; ++c) s += yc[c] * cx[c];
            loss -= log_sigmoid(s);
            for (int z : p.negatives) {
                const double* cz = C.row(z).data();
                double sz = 0.0;
                for (int c = 0; c < d; ++c) sz += yc[c] * cz[c];
                loss -= log_sigmoid(-sz);
            }
        }
        return eval_pairs.empty() ? 0.0 : loss / static_cast<double>(eval_pairs.size());
    };

    Embedding emb;
    emb.loss_trace.push_back(eval_loss());

    double total_updates = static_cast<double>(pair_total) * epochs;
    std::size_t done = 0;
    std::vector<double> acc(d);
    for (int epoch = 0; epoch < epochs; ++epoch) {
        for (const auto& walk : corpus.walks) {
            int len = static_cast<int>(walk.size());
            for (int i = 0; i < len; ++i) {
                int center = walk[i];
                double* yc = Y.row(center).data();
                int lo = std::max(0, i - window), hi = std::min(len - 1, i + window);
                for (int j = lo; j <= hi; ++j) {
                    if (j == i) continue;
                    double step =
                        lr * std::max(0.01, 1.0 - static_cast<double>(done) / total_updates);
                    ++done;
                    std::fill(acc.begin(), acc.end(), 0.0);
                    // Positive pair, then `neg` noise draws (resampled if
                    // they collide with the true context).
                    for (int t = 0; t < neg + 1; ++t) {
                        int target;
                        double label;
                        if (t == 0) {
                            target = walk[j];
                            label = 1.0;
                        } else {
                            target = noise_table.sample(rng);
                            if (target == walk[j]) continue;
                            label = 0.0;
                        }
                        double* ct = C.row(target).data();
                        double s = 0.0;
                        for (int c = 0; c < d; ++c) s += yc[c] * ct[c];
                        double gcoef = (label - sigmoid(s)) * step;
                        for (int c = 0; c < d; ++c) acc[c] += gcoef * ct[c];
                        for (int c = 0; c < d; ++c) ct[c] += gcoef * yc[c];
                    }
                    for (int c = 0; c < d; ++c) yc[c] += acc[c];
                }
            }
        }
        emb.loss_trace.push_back(eval_loss());
        if (!std::isfinite(emb.loss_trace.back()))
            throw numerical_error("sgns: training diverged");
    }

    emb.d = d;
    emb.method = "sgns";
    emb.params["window"] = window;
    emb.params["neg"] = neg;
    emb.params["lr"] = lr;
    emb.params["epochs"] = epochs;
    if (context_out) *context_out = C;
    emb.Y = std::move(Y);
    emb.validate();
    return emb;
}

Embedding node2vec_embed(const Graph& g, int d, const WalkConfig& cfg, int neg,
                         double lr, int epochs, int threads) {
    WalkCorpus corpus = generate_walks(g, cfg, threads);
    Embedding emb = sgns_train(corpus, d, cfg.window, neg, lr, epochs, cfg.seed);
    emb.method = "node2vec";
    emb.params["p"] = cfg.p;
    emb.params["q"] = cfg.q;
    emb.params["num_walks"] = cfg.num_walks;
    emb.params["walk_length"] = cfg.walk_length;
    return emb;
}

}  // namespace gembed
