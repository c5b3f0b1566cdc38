#include "gembed/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <sstream>

#include <json.hpp>

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

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::vector<int> sample_nodes(int n, int k, Rng& rng) {
    std::vector<int> pool(n);
    for (int i = 0; i < n; ++i) pool[i] = i;
    for (int i = 0; i < k; ++i) {
        int j = i + static_cast<int>(rng.bounded(static_cast<std::uint64_t>(n - i)));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    return pool;
}

}  // namespace

ScoreKind score_kind_from_string(const std::string& s) {
    if (s == "dot") return ScoreKind::dot;
    if (s == "cosine") return ScoreKind::cosine;
    if (s == "euclidean" || s == "neg_euclidean") return ScoreKind::neg_euclidean;
    if (s == "decoder") return ScoreKind::decoder;
    throw config_error("unknown score kind: " + s);
}

std::string to_string(ScoreKind kind) {
    switch (kind) {
        case ScoreKind::dot: return "dot";
        case ScoreKind::cosine: return "cosine";
        case ScoreKind::neg_euclidean: return "neg_euclidean";
        case ScoreKind::decoder: return "decoder";
    }
    return "?";
}

ScoreFn make_score(const Embedding& emb, ScoreKind kind) {
    const DenseMatrix* Y = &emb.Y;
    switch (kind) {
        case ScoreKind::dot: {
            const DenseMatrix* Yt = emb.has_pair() ? &*emb.Yt : &emb.Y;
            return [Y, Yt](int i, int j) {
                auto a = Y->row(i);
                auto b = Yt->row(j);
                double s = 0.0;
                for (std::size_t c = 0; c < a.size(); ++c) s += a[c] * b[c];
                return s;
            };
        }
        case ScoreKind::cosine:
            return [Y](int i, int j) {
                auto a = Y->row(i);
                auto b = Y->row(j);
                double s = 0.0, na = 0.0, nb = 0.0;
                for (std::size_t c = 0; c < a.size(); ++c) {
                    s += a[c] * b[c];
                    na += a[c] * a[c];
                    nb += b[c] * b[c];
                }
                if (na == 0.0 || nb == 0.0) return 0.0;
                return s / std::sqrt(na * nb);
            };
        case ScoreKind::neg_euclidean:
            return [Y](int i, int j) {
                auto a = Y->row(i);
                auto b = Y->row(j);
                double s = 0.0;
                for (std::size_t c = 0; c < a.size(); ++c) {
                    double d = a[c] - b[c];
                    s += d * d;
                }
                return -std::sqrt(s);
            };
        case ScoreKind::decoder:
            throw config_error("decoder score needs a trained model (make_decoder_score)");
    }
    throw config_error("unknown score kind");
}

ScoreFn make_decoder_score(const SdneModel& model, const Embedding& emb) {
    int n = emb.n();
    auto rows = std::make_shared<DenseMatrix>(n, model.input_dim());
    for (int i = 0; i < n; ++i) {
        std::vector<double> xr = model.decode(emb.Y.row(i));
        for (int j = 0; j < model.input_dim(); ++j) rows->at(i, j) = xr[j];
    }
    return [rows](int i, int j) { return 0.5 * (rows->at(i, j) + rows->at(j, i)); };
}

MeanStd mean_std(const std::vector<double>& xs) {
    MeanStd out;
    if (xs.empty()) return out;
    double sum = 0.0;
    for (double x : xs) sum += x;
    out.mean = sum / static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double acc = 0.0;
        for (double x : xs) acc += (x - out.mean) * (x - out.mean);
        out.stddev = std::sqrt(acc / static_cast<double>(xs.size() - 1));
    }
    return out;
}

namespace {

struct RankedTrialResult {
    std::vector<double> precision;  // parallel to ks
    double map = 0.0;
};

// Shared engine for reconstruction and link prediction: rank intra-sample
// candidate pairs by score, compare against an observed pair set.
RankedTrialResult ranked_trial(const Graph& g, const std::vector<int>& nodes,
                               const ScoreFn& score, const std::vector<int>& ks,
                               const std::function<bool(int, int)>& is_candidate,
                               const std::function<bool(int, int)>& is_observed) {
    bool directed = g.directed();
    int m = static_cast<int>(nodes.size());

    struct Scored {
        double s;
        int a, b;  // indices into `nodes`
    };
    std::vector<Scored> pairs;
    pairs.reserve(static_cast<std::size_t>(m) * (m - 1) / (directed ? 1 : 2));
    for (int a = 0; a < m; ++a) {
        int bstart = directed ? 0 : a + 1;
        for (int b = bstart; b < m; ++b) {
            if (b == a) continue;
            int u = nodes[a], v = nodes[b];
            if (!is_candidate(u, v)) continue;
            pairs.push_back({score(u, v), a, b});
        }
    }
    std::sort(pairs.begin(), pairs.end(), [](const Scored& x, const Scored& y) {
        if (x.s != y.s) return x.s > y.s;
        if (x.a != y.a) return x.a < y.a;
        return x.b < y.b;
    });

    RankedTrialResult out;
    // Pr@k over the global ranking (clamped to the candidate count).
    std::size_t total = pairs.size();
    std::size_t hits = 0, pos = 0;
    std::vector<std::pair<std::size_t, std::size_t>> k_positions;  // (k, index into ks)
    for (std::size_t i = 0; i < ks.size(); ++i)
        k_positions.push_back({std::min<std::size_t>(ks[i], total), i});
    std::sort(k_positions.begin(), k_positions.end());
    out.precision.assign(ks.size(), 0.0);
    for (const auto& [k, ki] : k_positions) {
        while (pos < k) {
            if (is_observed(nodes[pairs[pos].a], nodes[pairs[pos].b])) ++hits;
            ++pos;
        }
        out.precision[ki] = k > 0 ? static_cast<double>(hits) / static_cast<double>(k) : 0.0;
    }

    // Per-node rankings for MAP.
    std::vector<std::vector<std::pair<double, int>>> per_node(m);
    for (const Scored& p : pairs) {
        per_node[p.a].push_back({p.s, p.b});
        if (!directed) per_node[p.b].push_back({p.s, p.a});
    }
    double ap_sum = 0.0;
    std::size_t counted = 0;
    for (int a = 0; a < m; ++a) {
        auto& cand = per_node[a];
        std::sort(cand.begin(), cand.end(), [](const auto& x, const auto& y) {
            if (x.first != y.first) return x.first > y.first;
            return x.second < y.second;
        });
        std::size_t node_hits = 0;
        double acc = 0.0;
        for (std::size_t r = 0; r < cand.size(); ++r) {
            if (is_observed(nodes[a], nodes[cand[r].second])) {
                ++node_hits;
                acc += static_cast<double>(node_hits) / static_cast<double>(r + 1);
            }
        }
        if (node_hits > 0) {
            ap_sum += acc / static_cast<double>(node_hits);
            ++counted;
        }
    }
    out.map = counted > 0 ? ap_sum / static_cast<double>(counted) : 0.0;
    return out;
}

EvalReport aggregate_ranked(const std::string& task, const Graph& g, const ScoreFn& score,
                            const RankedEvalConfig& cfg,
                            const std::function<bool(int, int)>& is_candidate,
                            const std::function<bool(int, int)>& is_observed) {
    EvalReport report;
    report.task = task;
    report.ks = cfg.ks;
    report.trials = cfg.trials;
    if (cfg.trials < 1) throw config_error("eval: trials must be >= 1");

    int sample = cfg.sample;
    if (sample > g.n()) {
        sample = g.n();
        report.notes.push_back("sample exceeds node count; using the full graph");
    }
    if (sample < 2) throw config_error("eval: sample must cover at least 2 nodes");

    std::vector<std::vector<double>> per_k(cfg.ks.size());
    std::vector<double> maps;
    for (int trial = 0; trial < cfg.trials; ++trial) {
        Rng rng(hash_mix(cfg.seed, 0x7e1aULL, static_cast<std::uint64_t>(trial)));
        std::vector<int> nodes = sample_nodes(g.n(), sample, rng);
        RankedTrialResult r = ranked_trial(g, nodes, score, cfg.ks, is_candidate, is_observed);
        for (std::size_t i = 0; i < cfg.ks.size(); ++i) per_k[i].push_back(r.precision[i]);
        maps.push_back(r.map);
    }
    for (auto& xs : per_k) report.precision.push_back(mean_std(xs));
    report.map = mean_std(maps);
    report.hyperparams["sample"] = sample;
    report.hyperparams["trials"] = cfg.trials;
    return report;
}

}  // namespace

EvalReport reconstruct_eval(const Graph& g, const Embedding& emb, const ScoreFn& score,
                            const RankedEvalConfig& cfg) {
    if (emb.n() != g.n()) throw config_error("reconstruct_eval: embedding/graph size mismatch");
    auto candidate = [](int, int) { return true; };
    auto observed = [&g](int u, int v) { return g.has_edge(u, v); };
    EvalReport report = aggregate_ranked("reconstruct", g, score, cfg, candidate, observed);
    return report;
}

EvalReport link_predict_eval(const Graph& g, const EmbedderFn& embedder, double fraction,
                             const RankedEvalConfig& cfg, ScoreKind score_kind) {
    EdgeSplit split = split_edges(g, fraction, hash_mix(cfg.seed, 0x51dULL));
    Embedding emb = embedder(split.train_graph);
    if (emb.n() != g.n()) throw config_error("link_predict_eval: embedder changed node count");
    ScoreFn score = make_score(emb, score_kind);

    PairSet heldout(g.directed());
    for (const auto& [u, v] : split.heldout_edges) heldout.insert(u, v);
    const Graph& train = split.train_graph;

    // Candidates are pairs absent from the training graph; scoring a train
    // edge would leak the answer, so they are filtered out up front.
    auto candidate = [&train](int u, int v) { return !train.has_edge(u, v); };
    auto observed = [&heldout](int u, int v) { return heldout.contains(u, v); };
    EvalReport report =
        aggregate_ranked("linkpred", g, score, cfg, candidate, observed);
    report.hyperparams["fraction"] = fraction;
    report.hyperparams["heldout_edges"] = static_cast<double>(split.heldout_edges.size());
    return report;
}

std::vector<double> LogRegModel::scores(std::span<const double> x) const {
    std::vector<double> z(x.size());
    for (std::size_t c = 0; c < x.size(); ++c)
        z[c] = (x[c] - feature_mean[c]) / feature_std[c];
    std::vector<double> out(W.rows());
    for (int l = 0; l < W.rows(); ++l) {
        auto w = W.row(l);
        double s = bias[l];
        for (std::size_t c = 0; c < z.size(); ++c) s += w[c] * z[c];
        out[l] = sigmoid(s);
    }
    return out;
}

double logreg_loss(const DenseMatrix& X, std::span<const int> y, std::span<const double> params,
                   double l2) {
    int d = X.cols();
    double loss = 0.0;
    for (int i = 0; i < X.rows(); ++i) {
        auto x = X.row(i);
        double s = params[d];
        for (int c = 0; c < d; ++c) s += params[c] * x[c];
        loss -= y[i] ? log_sigmoid(s) : log_sigmoid(-s);
    }
    double reg = 0.0;
    for (int c = 0; c < d; ++c) reg += params[c] * params[c];
    return loss + 0.5 * l2 * reg;
}

std::vector<double> logreg_grad(const DenseMatrix& X, std::span<const int> y,
                                std::span<const double> params, double l2) {
    int d = X.cols();
    std::vector<double> grad(d + 1, 0.0);
    for (int i = 0; i < X.rows(); ++i) {
        auto x = X.row(i);
        double s = params[d];
        for (int c = 0; c < d; ++c) s += params[c] * x[c];
        double e = sigmoid(s) - (y[i] ? 1.0 : 0.0);
        for (int c = 0; c < d; ++c) grad[c] += e * x[c];
        grad[d] += e;
    }
    for (int c = 0; c < d; ++c) grad[c] += l2 * params[c];
    return grad;
}

LogRegModel train_logreg_ovr(const DenseMatrix& X, const std::vector<std::vector<int>>& labels,
                             int label_count, const LogRegConfig& cfg) {
    if (static_cast<int>(labels.size()) != X.rows())
        throw config_error("logreg: features/labels size mismatch");
    if (label_count < 1) throw config_error("logreg: need at least one label");
    int d = X.cols();
    int n = X.rows();

    LogRegModel model;
    model.W = DenseMatrix(label_count, d);
    model.bias.assign(label_count, 0.0);
    model.l2 = cfg.l2;
    model.feature_mean.assign(d, 0.0);
    model.feature_std.assign(d, 1.0);
    for (int c = 0; c < d; ++c) {
        double mean = 0.0;
        for (int i = 0; i < n; ++i) mean += X.at(i, c);
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (int i = 0; i < n; ++i) var += (X.at(i, c) - mean) * (X.at(i, c) - mean);
        var /= static_cast<double>(n);
        model.feature_mean[c] = mean;
        model.feature_std[c] = var > 1e-24 ? std::sqrt(var) : 1.0;
    }
    DenseMatrix Z(n, d);
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < d; ++c)
            Z.at(i, c) = (X.at(i, c) - model.feature_mean[c]) / model.feature_std[c];

    std::vector<int> y(n);
    std::vector<double> params(d + 1);
    for (int l = 0; l < label_count; ++l) {
        for (int i = 0; i < n; ++i)
            y[i] = std::binary_search(labels[i].begin(), labels[i].end(), l) ? 1 : 0;
        std::fill(params.begin(), params.end(), 0.0);
        // Full-batch gradient descent, step scaled by 1/n.
        for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
            std::vector<double> grad = logreg_grad(Z, y, params, cfg.l2);
            double step = cfg.lr / static_cast<double>(n);
            for (int c = 0; c <= d; ++c) params[c] -= step * grad[c];
        }
        for (int c = 0; c < d; ++c) model.W.at(l, c) = params[c];
        model.bias[l] = params[d];
    }
    return model;
}

EvalReport node_classify_eval(const Embedding& emb, const NodeLabels& labels,
                              const ClassifyEvalConfig& cfg) {
    if (labels.empty()) throw config_error("node_classify_eval: labels are empty");
    if (static_cast<int>(labels.labels.size()) != emb.n())
        throw config_error("node_classify_eval: labels/embedding size mismatch");
    int L = labels.label_count;
    int d = emb.d;

    std::vector<int> labeled;
    for (int i = 0; i < emb.n(); ++i)
        if (!labels.labels[i].empty()) labeled.push_back(i);

    EvalReport report;
    report.task = "nodeclass";
    report.ratios = cfg.ratios;
    report.trials = cfg.trials;
    report.hyperparams["l2"] = cfg.logreg.l2;
    report.hyperparams["lr"] = cfg.logreg.lr;
    report.hyperparams["epochs"] = cfg.logreg.epochs;

    for (std::size_t ri = 0; ri < cfg.ratios.size(); ++ri) {
        double ratio = cfg.ratios[ri];
        std::vector<double> micro_trials, macro_trials;
        for (int trial = 0; trial < cfg.trials; ++trial) {
            Rng rng(hash_mix(cfg.seed, static_cast<std::uint64_t>(ri),
                             static_cast<std::uint64_t>(trial)));
            std::vector<int> order = labeled;
            rng.shuffle(order);
            std::size_t train_n =
                static_cast<std::size_t>(std::llround(ratio * static_cast<double>(order.size())));
            if (train_n == 0 || train_n >= order.size())
                throw config_error("node_classify_eval: ratio yields an empty train or test set");

            DenseMatrix Xtr(static_cast<int>(train_n), d);
            std::vector<std::vector<int>> ytr(train_n);
            for (std::size_t i = 0; i < train_n; ++i) {
                auto row = emb.Y.row(order[i]);
                for (int c = 0; c < d; ++c) Xtr.at(static_cast<int>(i), c) = row[c];
                ytr[i] = labels.labels[order[i]];
            }
            LogRegModel model = train_logreg_ovr(Xtr, ytr, L, cfg.logreg);

            std::vector<long long> tp(L, 0), fp(L, 0), fn(L, 0);
            std::vector<int> pred_idx(L);
            for (std::size_t i = train_n; i < order.size(); ++i) {
                int node = order[i];
                const auto& truth = labels.labels[node];
                std::vector<double> s = model.scores(emb.Y.row(node));
                std::size_t k = truth.size();  // the label count is known
                for (int l = 0; l < L; ++l) pred_idx[l] = l;
                std::partial_sort(pred_idx.begin(), pred_idx.begin() + k, pred_idx.end(),
                                  [&s](int a, int b) {
                                      if (s[a] != s[b]) return s[a] > s[b];
                                      return a < b;
                                  });
                std::vector<int> pred(pred_idx.begin(), pred_idx.begin() + k);
                std::sort(pred.begin(), pred.end());
                for (int l : pred) {
                    if (std::binary_search(truth.begin(), truth.end(), l))
                        ++tp[l];
                    else
                        ++fp[l];
                }
                for (int l : truth)
                    if (!std::binary_search(pred.begin(), pred.end(), l)) ++fn[l];
            }
            micro_trials.push_back(micro_f1(tp, fp, fn));
            macro_trials.push_back(macro_f1(tp, fp, fn));
        }
        report.micro_f1.push_back(mean_std(micro_trials));
        report.macro_f1.push_back(mean_std(macro_trials));
    }
    return report;
}

SweepResult run_sweep(const ParamGrid& grid,
                      const std::function<EvalReport(const std::map<std::string, double>&)>& run) {
    if (grid.axes.empty()) throw config_error("sweep: empty grid");
    for (const auto& [name, values] : grid.axes)
        if (values.empty()) throw config_error("sweep: axis " + name + " has no values");

    SweepResult result;
    std::vector<std::size_t> idx(grid.axes.size(), 0);
    while (true) {
        SweepCell cell;
        for (std::size_t a = 0; a < grid.axes.size(); ++a)
            cell.params[grid.axes[a].first] = grid.axes[a].second[idx[a]];
        try {
            cell.report = run(cell.params);
            cell.ok = true;
        } catch (const std::exception& e) {
            cell.ok = false;
            cell.error = e.what();
        }
        result.cells.push_back(std::move(cell));

        // Advance the Cartesian counter (last axis fastest).
        bool done = false;
        std::size_t a = grid.axes.size();
        while (true) {
            if (a == 0) {
                done = true;
                break;
            }
            --a;
            if (++idx[a] < grid.axes[a].second.size()) break;
            idx[a] = 0;
        }
        if (done) break;
    }

    double best = -1.0;
    for (std::size_t i = 0; i < result.cells.size(); ++i) {
        const SweepCell& c = result.cells[i];
        if (!c.ok) continue;
        double objective = c.report.map.mean;
        if (objective == 0.0 && !c.report.micro_f1.empty()) {
            objective = 0.0;
            for (const MeanStd& m : c.report.micro_f1) objective += m.mean;
            objective /= static_cast<double>(c.report.micro_f1.size());
        }
        if (objective > best) {
            best = objective;
            result.best_index = static_cast<int>(i);
        }
    }
    if (result.best_index >= 0) result.cells[result.best_index].best = true;
    return result;
}

std::string report_to_json(const EvalReport& report) {
    nlohmann::ordered_json j;
    j["task"] = report.task;
    j["trials"] = report.trials;
    if (!report.ks.empty()) {
        j["ks"] = report.ks;
        nlohmann::ordered_json prec = nlohmann::ordered_json::array();
        for (const MeanStd& m : report.precision)
            prec.push_back({{"mean", m.mean}, {"std", m.stddev}});
        j["precision_at_k"] = prec;
    }
    if (report.task != "nodeclass")
        j["map"] = {{"mean", report.map.mean}, {"std", report.map.stddev}};
    if (!report.ratios.empty()) {
        j["ratios"] = report.ratios;
        nlohmann::ordered_json micro = nlohmann::ordered_json::array();
        nlohmann::ordered_json macro = nlohmann::ordered_json::array();
        for (const MeanStd& m : report.micro_f1)
            micro.push_back({{"mean", m.mean}, {"std", m.stddev}});
        for (const MeanStd& m : report.macro_f1)
            macro.push_back({{"mean", m.mean}, {"std", m.stddev}});
        j["micro_f1"] = micro;
        j["macro_f1"] = macro;
    }
    nlohmann::ordered_json hp;
    for (const auto& [k, v] : report.hyperparams) hp[k] = v;
    j["hyperparams"] = hp;
    if (!report.notes.empty()) j["notes"] = report.notes;
    j["schema_version"] = 1;
    return j.dump(2) + "\n";
}

namespace {

void append_csv_row(std::ostringstream& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out << ',';
        out << cells[i];
    }
    out << '\n';
}

}  // namespace

std::string report_to_csv(const EvalReport& report) {
    std::ostringstream out;
    if (report.task == "nodeclass") {
        append_csv_row(out, {"ratio", "micro_f1_mean", "micro_f1_std", "macro_f1_mean",
                             "macro_f1_std"});
        for (std::size_t i = 0; i < report.ratios.size(); ++i)
            append_csv_row(out, {fmt(report.ratios[i]), fmt(report.micro_f1[i].mean),
                                 fmt(report.micro_f1[i].stddev), fmt(report.macro_f1[i].mean),
                                 fmt(report.macro_f1[i].stddev)});
    } else {
        append_csv_row(out, {"metric", "k", "mean", "std"});
        for (std::size_t i = 0; i < report.ks.size(); ++i)
            append_csv_row(out, {"precision", std::to_string(report.ks[i]),
                                 fmt(report.precision[i].mean), fmt(report.precision[i].stddev)});
        append_csv_row(out, {"map", "", fmt(report.map.mean), fmt(report.map.stddev)});
    }
    return out.str();
}

std::string sweep_to_csv(const SweepResult& result) {
    std::ostringstream out;
    if (result.cells.empty()) return "";
    std::vector<std::string> header;
    for (const auto& [name, _] : result.cells.front().params) header.push_back(name);
    std::vector<std::string> cols = header;
    cols.insert(cols.end(), {"ok", "map_mean", "map_std", "micro_f1_mean", "best", "error"});
    append_csv_row(out, cols);
    for (const SweepCell& c : result.cells) {
        std::vector<std::string> row;
        for (const std::string& name : header) row.push_back(fmt(c.params.at(name)));
        row.push_back(c.ok ? "1" : "0");
        row.push_back(fmt(c.report.map.mean));
        row.push_back(fmt(c.report.map.stddev));
        double micro = 0.0;
        if (!c.report.micro_f1.empty()) {
            for (const MeanStd& m : c.report.micro_f1) micro += m.mean;
            micro /= static_cast<double>(c.report.micro_f1.size());
        }
        row.push_back(fmt(micro));
        row.push_back(c.best ? "1" : "0");
        std::string err = c.error;
        for (char& ch : err)
            if (ch == ',' || ch == '\n') ch = ';';
        row.push_back(err);
        append_csv_row(out, row);
    }
    return out.str();
}

}  // namespace gembed
