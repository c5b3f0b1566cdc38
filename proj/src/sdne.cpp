#include "gembed/sdne.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "gembed/errors.hpp"
#include "gembed/rng.hpp"

namespace gembed {

namespace {

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    double e = std::exp(x);
    return e / (1.0 + e);
}

void validate_config(const Graph& g, const SdneConfig& cfg) {
    const auto& ls = cfg.layer_sizes;
    if (ls.size() < 2) throw config_error("sdne: need at least [n, d] layer sizes");
    if (ls.front() != g.n())
        throw config_error("sdne: first layer width must equal the node count");
    for (std::size_t i = 0; i + 1 < ls.size(); ++i)
        if (ls[i] <= ls[i + 1]) throw config_error("sdne: layer sizes must strictly decrease");
    for (int w : ls)
        if (w < 1 || w > g.n()) throw config_error("sdne: layer width exceeding n");
    if (cfg.beta_penalty <= 1.0) throw config_error("sdne: beta_penalty must be > 1");
    if (cfg.alpha < 0.0 || cfg.nu < 0.0) throw config_error("sdne: alpha and nu must be >= 0");
    if (cfg.lr <= 0.0 || cfg.epochs < 1) throw config_error("sdne: bad optimizer settings");
    if (g.directed()) throw config_error("sdne: graph must be undirected");
}

}  // namespace

SdneModel::SdneModel(const std::vector<int>& encoder_widths, std::uint64_t seed) {
    widths = encoder_widths;
    bottleneck = static_cast<int>(encoder_widths.size()) - 1;
    for (int i = static_cast<int>(encoder_widths.size()) - 2; i >= 0; --i)
        widths.push_back(encoder_widths[i]);

    Rng rng(hash_mix(seed, 0x5d2eULL));
    int layers = static_cast<int>(widths.size()) - 1;
    W.reserve(layers);
    b.reserve(layers);
    for (int l = 0; l < layers; ++l) {
        int fan_in = widths[l], fan_out = widths[l + 1];
        double bound = std::sqrt(6.0 / (fan_in + fan_out));
        DenseMatrix w(fan_out, fan_in);
        for (double& v : w.data()) v = rng.uniform(-bound, bound);
        W.push_back(std::move(w));
        b.emplace_back(fan_out, 0.0);
    }
}

std::vector<double> SdneModel::encode(std::span<const double> x) const {
    std::vector<double> a(x.begin(), x.end());
    for (int l = 0; l < bottleneck; ++l) {
        std::vector<double> z(widths[l + 1]);
        W[l].matvec(a, z);
        for (int i = 0; i < widths[l + 1]; ++i) z[i] = sigmoid(z[i] + b[l][i]);
        a = std::move(z);
    }
    return a;
}

std::vector<double> SdneModel::decode(std::span<const double> y) const {
    std::vector<double> a(y.begin(), y.end());
    for (int l = bottleneck; l < num_layers(); ++l) {
        std::vector<double> z(widths[l + 1]);
        W[l].matvec(a, z);
        for (int i = 0; i < widths[l + 1]; ++i) z[i] = sigmoid(z[i] + b[l][i]);
        a = std::move(z);
    }
    return a;
}

std::vector<double> SdneModel::to_flat() const {
    std::vector<double> out;
    for (int l = 0; l < num_layers(); ++l) {
        out.insert(out.end(), W[l].data().begin(), W[l].data().end());
        out.insert(out.end(), b[l].begin(), b[l].end());
    }
    return out;
}

void SdneModel::from_flat(std::span<const double> params) {
    std::size_t pos = 0;
    for (int l = 0; l < num_layers(); ++l) {
        std::size_t wn = W[l].data().size();
        std::copy(params.begin() + pos, params.begin() + pos + wn, W[l].data().begin());
        pos += wn;
        std::copy(params.begin() + pos, params.begin() + pos + b[l].size(), b[l].begin());
        pos += b[l].size();
    }
    if (pos != params.size()) throw config_error("sdne: flat parameter size mismatch");
}

void SdneModel::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot write model file: " + path);
    const char magic[4] = {'S', 'D', 'N', 'E'};
    std::uint32_t version = 1;
    std::uint32_t nw = static_cast<std::uint32_t>(widths.size());
    std::int32_t bott = bottleneck;
    out.write(magic, 4);
    out.write(reinterpret_cast<const char*>(&version), 4);
    out.write(reinterpret_cast<const char*>(&nw), 4);
    out.write(reinterpret_cast<const char*>(&bott), 4);
    for (int w : widths) {
        std::int32_t v = w;
        out.write(reinterpret_cast<const char*>(&v), 4);
    }
    for (int l = 0; l < num_layers(); ++l) {
        out.write(reinterpret_cast<const char*>(W[l].data().data()),
                  static_cast<std::streamsize>(W[l].data().size() * sizeof(double)));
        out.write(reinterpret_cast<const char*>(b[l].data()),
                  static_cast<std::streamsize>(b[l].size() * sizeof(double)));
    }
    if (!out) throw io_error("short write on model file: " + path);
}

SdneModel SdneModel::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open model file: " + path);
    char magic[4];
    std::uint32_t version = 0, nw = 0;
    std::int32_t bott = 0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&version), 4);
    in.read(reinterpret_cast<char*>(&nw), 4);
    in.read(reinterpret_cast<char*>(&bott), 4);
    if (!in || std::memcmp(magic, "SDNE", 4) != 0 || version != 1)
        throw io_error("model file: bad header: " + path);
    SdneModel m;
    m.widths.resize(nw);
    m.bottleneck = bott;
    for (std::uint32_t i = 0; i < nw; ++i) {
        std::int32_t v;
        in.read(reinterpret_cast<char*>(&v), 4);
        m.widths[i] = v;
    }
    for (std::uint32_t l = 0; l + 1 < nw; ++l) {
        DenseMatrix w(m.widths[l + 1], m.widths[l]);
        in.read(reinterpret_cast<char*>(w.data().data()),
                static_cast<std::streamsize>(w.data().size() * sizeof(double)));
        std::vector<double> b(m.widths[l + 1]);
        in.read(reinterpret_cast<char*>(b.data()),
                static_cast<std::streamsize>(b.size() * sizeof(double)));
        m.W.push_back(std::move(w));
        m.b.push_back(std::move(b));
    }
    if (!in) throw io_error("model file truncated: " + path);
    return m;
}

namespace {

// Shared forward/backward machinery over a batch of node rows.
class SdneTrainerImpl {
public:
    SdneTrainerImpl(const Graph& g, const SdneConfig& cfg) : g_(g), cfg_(cfg) {}

    // Forward the given nodes; activations[l] is |batch| x widths[l].
    void forward(const SdneModel& m, const std::vector<int>& nodes,
                 std::vector<DenseMatrix>& acts) const {
        int bn = static_cast<int>(nodes.size());
        acts.assign(m.widths.size(), DenseMatrix());
        acts[0] = DenseMatrix(bn, g_.n());
        for (int r = 0; r < bn; ++r) {
            auto nb = g_.neighbors(nodes[r]);
            auto w = g_.neighbor_weights(nodes[r]);
            for (std::size_t k = 0; k < nb.size(); ++k) acts[0].at(r, nb[k]) = w[k];
        }
        for (int l = 0; l < m.num_layers(); ++l) {
            DenseMatrix z = acts[l].multiply(m.W[l].transposed());
            for (int r = 0; r < bn; ++r) {
                auto row = z.row(r);
                for (int c = 0; c < z.cols(); ++c) row[c] = sigmoid(row[c] + m.b[l][c]);
            }
            acts[l + 1] = std::move(z);
        }
    }

    // Loss over the batch (and, for the full batch, of the whole model).
    double loss(const SdneModel& m, const std::vector<int>& nodes,
                const std::vector<DenseMatrix>& acts) const {
        int bn = static_cast<int>(nodes.size());
        const DenseMatrix& X = acts[0];
        const DenseMatrix& Xhat = acts.back();
        double total = 0.0;
        for (int r = 0; r < bn; ++r) {
            auto x = X.row(r);
            auto xh = Xhat.row(r);
            for (int c = 0; c < X.cols(); ++c) {
                double b = x[c] > 0.0 ? cfg_.beta_penalty : 1.0;
                double e = (xh[c] - x[c]) * b;
                total += e * e;
            }
        }
        // First-order penalty over edges inside the batch.
        const DenseMatrix& Y = acts[m.bottleneck];
        std::vector<int> pos(g_.n(), -1);
        for (int r = 0; r < bn; ++r) pos[nodes[r]] = r;
        for (int r = 0; r < bn; ++r) {
            int u = nodes[r];
            auto nb = g_.neighbors(u);
            auto w = g_.neighbor_weights(u);
            for (std::size_t k = 0; k < nb.size(); ++k) {
                int s = pos[nb[k]];
                if (s < 0 || nb[k] < u) continue;  // unordered edges once
                double acc = 0.0;
                for (int c = 0; c < Y.cols(); ++c) {
                    double dlt = Y.at(r, c) - Y.at(s, c);
                    acc += dlt * dlt;
                }
                total += cfg_.alpha * w[k] * acc;
            }
        }
        for (const DenseMatrix& w : m.W) total += cfg_.nu * w.frobenius_sq();
        return total;
    }

    // Gradients with respect to every weight and bias, batch semantics as in
    // loss(). Outputs are accumulated into gW/gb (must be pre-sized).
    void gradients(const SdneModel& m, const std::vector<int>& nodes,
                   const std::vector<DenseMatrix>& acts, std::vector<DenseMatrix>& gW,
                   std::vector<std::vector<double>>& gb) const {
        int bn = static_cast<int>(nodes.size());
        int layers = m.num_layers();
        const DenseMatrix& X = acts[0];
        const DenseMatrix& Xhat = acts.back();

        // dL/dz at the output layer.
        DenseMatrix delta(bn, X.cols());
        for (int r = 0; r < bn; ++r) {
            auto x = X.row(r);
            auto xh = Xhat.row(r);
            auto dl = delta.row(r);
            for (int c = 0; c < X.cols(); ++c) {
                double b = x[c] > 0.0 ? cfg_.beta_penalty : 1.0;
                dl[c] = 2.0 * b * b * (xh[c] - x[c]) * xh[c] * (1.0 - xh[c]);
            }
        }

        // Laplacian contribution at the bottleneck: 2 alpha (L_batch Y).
        const DenseMatrix& Y = acts[m.bottleneck];
        DenseMatrix lap(bn, Y.cols());
        if (cfg_.alpha > 0.0) {
            std::vector<int> pos(g_.n(), -1);
            for (int r = 0; r < bn; ++r) pos[nodes[r]] = r;
            for (int r = 0; r < bn; ++r) {
                int u = nodes[r];
                auto nb = g_.neighbors(u);
                auto w = g_.neighbor_weights(u);
                for (std::size_t k = 0; k < nb.size(); ++k) {
                    int s = pos[nb[k]];
                    if (s < 0) continue;
                    for (int c = 0; c < Y.cols(); ++c)
                        lap.at(r, c) += 2.0 * cfg_.alpha * w[k] * (Y.at(r, c) - Y.at(s, c));
                }
            }
        }

        for (int l = layers - 1; l >= 0; --l) {
            // grad W_l = delta^T a_l (+ decay), grad b_l = column sums.
            DenseMatrix gw = delta.transpose_multiply(acts[l]);
            for (std::size_t i = 0; i < gw.data().size(); ++i)
                gW[l].data()[i] += gw.data()[i] + 2.0 * cfg_.nu * m.W[l].data()[i];
            for (int r = 0; r < bn; ++r) {
                auto dl = delta.row(r);
                for (int c = 0; c < delta.cols(); ++c) gb[l][c] += dl[c];
            }
            if (l == 0) break;
            DenseMatrix prev = delta.multiply(m.W[l]);
            if (l == m.bottleneck && cfg_.alpha > 0.0)
                for (std::size_t i = 0; i < prev.data().size(); ++i)
                    prev.data()[i] += lap.data()[i];
            for (int r = 0; r < bn; ++r) {
                auto a = acts[l].row(r);
                auto pv = prev.row(r);
                for (int c = 0; c < prev.cols(); ++c) pv[c] *= a[c] * (1.0 - a[c]);
            }
            delta = std::move(prev);
        }
    }

private:
    const Graph& g_;
    const SdneConfig& cfg_;
};

}  // namespace

double sdne_loss(const Graph& g, const SdneModel& model, const SdneConfig& cfg) {
    SdneTrainerImpl impl(g, cfg);
    std::vector<int> nodes(g.n());
    for (int i = 0; i < g.n(); ++i) nodes[i] = i;
    std::vector<DenseMatrix> acts;
    impl.forward(model, nodes, acts);
    return impl.loss(model, nodes, acts);
}

std::vector<double> sdne_grad_flat(const Graph& g, const SdneModel& model,
                                   const SdneConfig& cfg) {
    SdneTrainerImpl impl(g, cfg);
    std::vector<int> nodes(g.n());
    for (int i = 0; i < g.n(); ++i) nodes[i] = i;
    std::vector<DenseMatrix> acts;
    impl.forward(model, nodes, acts);

    std::vector<DenseMatrix> gW;
    std::vector<std::vector<double>> gb;
    for (int l = 0; l < model.num_layers(); ++l) {
        gW.emplace_back(model.widths[l + 1], model.widths[l]);
        gb.emplace_back(model.widths[l + 1], 0.0);
    }
    impl.gradients(model, nodes, acts, gW, gb);

    std::vector<double> flat;
    for (int l = 0; l < model.num_layers(); ++l) {
        flat.insert(flat.end(), gW[l].data().begin(), gW[l].data().end());
        flat.insert(flat.end(), gb[l].begin(), gb[l].end());
    }
    return flat;
}

SdneResult sdne_embed(const Graph& g, const SdneConfig& cfg) {
    validate_config(g, cfg);
    int n = g.n();
    SdneModel model(cfg.layer_sizes, cfg.seed);
    SdneTrainerImpl impl(g, cfg);

    int batch = cfg.batch_size <= 0 || cfg.batch_size > n ? n : cfg.batch_size;
    Rng rng(hash_mix(cfg.seed, 0xba7cULL));

    // Momentum buffers.
    std::vector<DenseMatrix> vW;
    std::vector<std::vector<double>> vb;
    for (int l = 0; l < model.num_layers(); ++l) {
        vW.emplace_back(model.widths[l + 1], model.widths[l]);
        vb.emplace_back(model.widths[l + 1], 0.0);
    }

    Embedding emb;
    double initial = sdne_loss(g, model, cfg);
    emb.loss_trace.push_back(initial);

    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::vector<DenseMatrix> acts;
    std::vector<DenseMatrix> gW;
    std::vector<std::vector<double>> gb;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        if (batch < n) rng.shuffle(order);
        for (int start = 0; start < n; start += batch) {
            int end = std::min(n, start + batch);
            std::vector<int> nodes(order.begin() + start, order.begin() + end);
            impl.forward(model, nodes, acts);

            gW.clear();
            gb.clear();
            for (int l = 0; l < model.num_layers(); ++l) {
                gW.emplace_back(model.widths[l + 1], model.widths[l]);
                gb.emplace_back(model.widths[l + 1], 0.0);
            }
            impl.gradients(model, nodes, acts, gW, gb);

            // SGD with momentum; steps use the batch-mean gradient so the
            // learning rate is comparable across graph sizes.
            double scale = cfg.lr / static_cast<double>(nodes.size());
            for (int l = 0; l < model.num_layers(); ++l) {
                auto& w = model.W[l].data();
                auto& vw = vW[l].data();
                const auto& gw = gW[l].data();
                for (std::size_t i = 0; i < w.size(); ++i) {
                    vw[i] = 0.9 * vw[i] - scale * gw[i];
                    w[i] += vw[i];
                }
                for (std::size_t i = 0; i < model.b[l].size(); ++i) {
                    vb[l][i] = 0.9 * vb[l][i] - scale * gb[l][i];
                    model.b[l][i] += vb[l][i];
                }
            }
        }
        double loss = sdne_loss(g, model, cfg);
        emb.loss_trace.push_back(loss);
        if (!std::isfinite(loss) || loss > 1e3 * std::max(initial, 1e-30))
            throw numerical_error("sdne: training diverged at learning rate " +
                                  std::to_string(cfg.lr));
    }

    // Bottleneck activations for every node.
    int d = model.bottleneck_dim();
    emb.d = d;
    emb.method = "sdne";
    emb.params["alpha"] = cfg.alpha;
    emb.params["beta_penalty"] = cfg.beta_penalty;
    emb.params["nu"] = cfg.nu;
    emb.params["lr"] = cfg.lr;
    emb.params["epochs"] = cfg.epochs;
    emb.Y = DenseMatrix(n, d);
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) {
        std::fill(x.begin(), x.end(), 0.0);
        auto nb = g.neighbors(i);
        auto w = g.neighbor_weights(i);
        for (std::size_t k = 0; k < nb.size(); ++k) x[nb[k]] = w[k];
        std::vector<double> y = model.encode(x);
        for (int c = 0; c < d; ++c) emb.Y.at(i, c) = y[c];
    }
    emb.validate();
    return {std::move(emb), std::move(model)};
}

std::vector<double> sdne_reconstruct(const SdneModel& model, const Embedding& emb, int node) {
    if (model.num_layers() == 0) throw config_error("sdne_reconstruct: untrained model");
    if (node < 0 || node >= emb.n()) throw config_error("sdne_reconstruct: node out of range");
    return model.decode(emb.Y.row(node));
}

}  // namespace gembed
