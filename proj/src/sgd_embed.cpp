#include "gembed/sgd_embed.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gembed/errors.hpp"
#include "gembed/rng.hpp"

namespace gembed {

namespace {

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    double e = std::exp(x);
    return e / (1.0 + e);
}

// log(sigmoid(x)) without overflow.
double log_sigmoid(double x) {
    if (x >= 0.0) return -std::log1p(std::exp(-x));
    return x - std::log1p(std::exp(x));
}

DenseMatrix init_embedding(int n, int d, double init_scale, Rng& rng) {
    double s = init_scale > 0.0 ? init_scale : 0.1 / std::sqrt(static_cast<double>(d));
    DenseMatrix Y(n, d);
    for (double& v : Y.data()) v = rng.uniform(-s, s);
    return Y;
}

void check_divergence(double loss, double initial, double lr, const char* what) {
    if (!std::isfinite(loss) || loss > 1e3 * std::max(initial, 1e-30))
        throw numerical_error(std::string(what) + ": training diverged at learning rate " +
                              std::to_string(lr));
}

}  // namespace

double gf_loss(const Graph& g, std::span<const double> Y, int d, double lambda) {
    double loss = 0.0;
    for (const Edge& e : g.edge_list()) {
        const double* yi = Y.data() + static_cast<std::size_t>(e.u) * d;
        const double* yj = Y.data() + static_cast<std::size_t>(e.v) * d;
        double dot = 0.0;
        for (int c = 0; c < d; ++c) dot += yi[c] * yj[c];
        double err = e.w - dot;
        loss += 0.5 * err * err;
    }
    double reg = 0.0;
    for (double v : Y) reg += v * v;
    return loss + 0.5 * lambda * reg;
}

std::vector<double> gf_grad(const Graph& g, std::span<const double> Y, int d, double lambda) {
    std::vector<double> grad(Y.size(), 0.0);
    for (const Edge& e : g.edge_list()) {
        const double* yi = Y.data() + static_cast<std::size_t>(e.u) * d;
        const double* yj = Y.data() + static_cast<std::size_t>(e.v) * d;
        double* gi = grad.data() + static_cast<std::size_t>(e.u) * d;
        double* gj = grad.data() + static_cast<std::size_t>(e.v) * d;
        double dot = 0.0;
        for (int c = 0; c < d; ++c) dot += yi[c] * yj[c];
        double err = e.w - dot;
        for (int c = 0; c < d; ++c) {
            gi[c] -= err * yj[c];
            gj[c] -= err * yi[c];
        }
    }
    for (std::size_t i = 0; i < Y.size(); ++i) grad[i] += lambda * Y[i];
    return grad;
}

Embedding gf_embed(const Graph& g, int d, const SgdConfig& cfg) {
    if (d < 1) throw config_error("gf: need d >= 1");
    if (cfg.learning_rate <= 0.0 || cfg.epochs < 1 || cfg.lambda < 0.0)
        throw config_error("gf: bad SGD configuration");
    int n = g.n();
    Rng rng(hash_mix(cfg.seed, 0x6fULL));
    DenseMatrix Y = init_embedding(n, d, cfg.init_scale, rng);
    std::vector<Edge> edges = g.edge_list();
    std::vector<double> buf(d);

    Embedding emb;
    emb.loss_trace.reserve(cfg.epochs + 1);
    double initial = gf_loss(g, Y.data(), d, cfg.lambda);
    emb.loss_trace.push_back(initial);

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        double lr = cfg.learning_rate;
        if (cfg.decay && cfg.epochs > 1)
            lr = cfg.learning_rate * (1.0 - 0.9 * epoch / static_cast<double>(cfg.epochs - 1));
        rng.shuffle(edges);
        for (const Edge& e : edges) {
            double* yi = Y.row(e.u).data();
            double* yj = Y.row(e.v).data();
            double dot = 0.0;
            for (int c = 0; c < d; ++c) dot += yi[c] * yj[c];
            double err = e.w - dot;
            for (int c = 0; c < d; ++c) buf[c] = yi[c];
            for (int c = 0; c < d; ++c) yi[c] += lr * (err * yj[c] - cfg.lambda * yi[c]);
            for (int c = 0; c < d; ++c) yj[c] += lr * (err * buf[c] - cfg.lambda * yj[c]);
        }
        double loss = gf_loss(g, Y.data(), d, cfg.lambda);
        emb.loss_trace.push_back(loss);
        check_divergence(loss, initial, cfg.learning_rate, "gf");
    }

    emb.d = d;
    emb.method = "gf";
    emb.params["lambda"] = cfg.lambda;
    emb.params["lr"] = cfg.learning_rate;
    emb.params["epochs"] = cfg.epochs;
    emb.Y = std::move(Y);
    emb.validate();
    return emb;
}

std::vector<ScoredPair> positive_pairs(const Graph& g) {
    std::vector<ScoredPair> pairs;
    for (const Edge& e : g.edge_list()) pairs.push_back({e.u, e.v, e.w, true});
    return pairs;
}

double line1_loss(std::span<const ScoredPair> pairs, std::span<const double> Y, int d) {
    double loss = 0.0;
    for (const ScoredPair& p : pairs) {
        const double* yi = Y.data() + static_cast<std::size_t>(p.i) * d;
        const double* yj = Y.data() + static_cast<std::size_t>(p.j) * d;
        double dot = 0.0;
        for (int c = 0; c < d; ++c) dot += yi[c] * yj[c];
        loss -= p.weight * log_sigmoid(p.positive ? dot : -dot);
    }
    return loss;
}

std::vector<double> line1_grad(std::span<const ScoredPair> pairs, std::span<const double> Y, int d) {
    std::vector<double> grad(Y.size(), 0.0);
    for (const ScoredPair& p : pairs) {
        const double* yi = Y.data() + static_cast<std::size_t>(p.i) * d;
        const double* yj = Y.data() + static_cast<std::size_t>(p.j) * d;
        double* gi = grad.data() + static_cast<std::size_t>(p.i) * d;
        double* gj = grad.data() + static_cast<std::size_t>(p.j) * d;
        double dot = 0.0;
        for (int c = 0; c < d; ++c) dot += yi[c] * yj[c];
        // d/ds of -w log sigmoid(s) is -w (1 - sigmoid(s)); negatives flip s.
        double coef = p.positive ? -p.weight * (1.0 - sigmoid(dot))
                                 : p.weight * sigmoid(dot);
        for (int c = 0; c < d; ++c) {
            gi[c] += coef * yj[c];
            gj[c] += coef * yi[c];
        }
    }
    return grad;
}

Embedding line1_embed(const Graph& g, int d, const SgdConfig& cfg) {
    if (d < 1) throw config_error("line1: need d >= 1");
    if (cfg.learning_rate <= 0.0 || cfg.epochs < 1 || cfg.neg_samples < 0)
        throw config_error("line1: bad SGD configuration");
    int n = g.n();
    Rng rng(hash_mix(cfg.seed, 0x11e1ULL));
    DenseMatrix Y = init_embedding(n, d, cfg.init_scale, rng);
    std::vector<Edge> edges = g.edge_list();
    std::vector<ScoredPair> positives = positive_pairs(g);
    std::vector<double> buf(d);

    Embedding emb;
    emb.loss_trace.reserve(cfg.epochs + 1);
    double initial = line1_loss(positives, Y.data(), d);
    emb.loss_trace.push_back(initial);

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        double lr = cfg.learning_rate;
        if (cfg.decay && cfg.epochs > 1)
            lr = cfg.learning_rate * (1.0 - 0.9 * epoch / static_cast<double>(cfg.epochs - 1));
        rng.shuffle(edges);
        for (const Edge& e : edges) {
            double* yi = Y.row(e.u).data();
            double* yj = Y.row(e.v).data();
            double dot = 0.0;
            for (int c = 0; c < d; ++c) dot += yi[c] * yj[c];
            double coef = e.w * (1.0 - sigmoid(dot));
            for (int c = 0; c < d; ++c) buf[c] = yi[c];
            for (int c = 0; c < d; ++c) yi[c] += lr * coef * yj[c];
            for (int c = 0; c < d; ++c) yj[c] += lr * coef * buf[c];

            // Negative pairs anchored alternately at each endpoint.
            for (int t = 0; t < cfg.neg_samples; ++t) {
                int anchor = (t % 2 == 0) ? e.u : e.v;
                int z = -1;
                for (int attempt = 0; attempt < 64; ++attempt) {
                    int cand = static_cast<int>(rng.bounded(n));
                    if (cand != anchor && !g.has_edge(anchor, cand)) {
                        z = cand;
                        break;
                    }
                }
                if (z < 0) continue;  // near-complete graph; no sample found
                double* ya = Y.row(anchor).data();
                double* yz = Y.row(z).data();
                double s = 0.0;
                for (int c = 0; c < d; ++c) s += ya[c] * yz[c];
                double nc = sigmoid(s);
                for (int c = 0; c < d; ++c) buf[c] = ya[c];
                for (int c = 0; c < d; ++c) ya[c] -= lr * nc * yz[c];
                for (int c = 0; c < d; ++c) yz[c] -= lr * nc * buf[c];
            }
        }
        double loss = line1_loss(positives, Y.data(), d);
        emb.loss_trace.push_back(loss);
        check_divergence(loss, initial, cfg.learning_rate, "line1");
    }

    emb.d = d;
    emb.method = "line1";
    emb.params["neg"] = cfg.neg_samples;
    emb.params["lr"] = cfg.learning_rate;
    emb.params["epochs"] = cfg.epochs;
    emb.Y = std::move(Y);
    emb.validate();
    return emb;
}

}  // namespace gembed
