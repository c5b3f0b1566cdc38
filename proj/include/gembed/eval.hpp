#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "gembed/embedding.hpp"
#include "gembed/graph.hpp"
#include "gembed/metrics.hpp"
#include "gembed/sdne.hpp"

namespace gembed {

enum class ScoreKind { dot, cosine, neg_euclidean, decoder };

ScoreKind score_kind_from_string(const std::string& s);
std::string to_string(ScoreKind kind);

/// Higher score = more likely edge, for every kind.
using ScoreFn = std::function<double(int, int)>;

/// dot uses <Y_s[i], Y_t[j]> when the embedding carries a factor pair;
/// cosine and neg_euclidean work on Y. The embedding must outlive the fn.
ScoreFn make_score(const Embedding& emb, ScoreKind kind);

/// Decoder-based scorer: mean of the two reconstructed adjacency entries.
/// Rows are precomputed, so this owns its storage.
ScoreFn make_decoder_score(const SdneModel& model, const Embedding& emb);

struct MeanStd {
    double mean = 0.0;
    double stddev = 0.0;
};

MeanStd mean_std(const std::vector<double>& xs);

struct EvalReport {
    std::string task;
    std::vector<int> ks;
    std::vector<MeanStd> precision;  // parallel to ks
    MeanStd map;
    std::vector<double> ratios;      // node classification only
    std::vector<MeanStd> micro_f1;
    std::vector<MeanStd> macro_f1;
    std::map<std::string, double> hyperparams;
    int trials = 1;
    double runtime_seconds = 0.0;    // recorded in run sidecars, not report files
    std::vector<std::string> notes;
};

/// Deterministic JSON (stable key order) and flat CSV renderings. Runtime is
/// deliberately omitted so identical configs produce identical bytes.
std::string report_to_json(const EvalReport& report);
std::string report_to_csv(const EvalReport& report);

struct RankedEvalConfig {
    std::vector<int> ks = {10, 100, 1000};
    int sample = 1024;
    int trials = 5;
    std::uint64_t seed = 12345;
};

/// Graph reconstruction: rank all intra-sample pairs by score and measure
/// recovery of the graph's own edges; repeated over node samples.
EvalReport reconstruct_eval(const Graph& g, const Embedding& emb, const ScoreFn& score,
                            const RankedEvalConfig& cfg);

/// Link prediction: hide a fraction of edges, embed the rest, rank candidate
/// pairs that are not training edges against the held-out set.
using EmbedderFn = std::function<Embedding(const Graph&)>;
EvalReport link_predict_eval(const Graph& g, const EmbedderFn& embedder, double fraction,
                             const RankedEvalConfig& cfg,
                             ScoreKind score_kind = ScoreKind::dot);

/// One-vs-rest logistic regression on embedding features. Features are
/// standardized internally (stored mean/std) so the gradient-descent solver
/// behaves uniformly across embedding scales.
struct LogRegModel {
    DenseMatrix W;             // label_count x d, in standardized feature space
    std::vector<double> bias;  // label_count
    std::vector<double> feature_mean, feature_std;
    double l2 = 0.0;

    std::vector<double> scores(std::span<const double> x) const;
};

struct LogRegConfig {
    double l2 = 1e-3;
    double lr = 0.1;
    int epochs = 300;
};

LogRegModel train_logreg_ovr(const DenseMatrix& X, const std::vector<std::vector<int>>& labels,
                             int label_count, const LogRegConfig& cfg);

/// Binary regularized log-loss and gradient for one classifier; params are
/// [w_0..w_{d-1}, b]. Used by the finite-difference gate.
double logreg_loss(const DenseMatrix& X, std::span<const int> y, std::span<const double> params,
                   double l2);
std::vector<double> logreg_grad(const DenseMatrix& X, std::span<const int> y,
                                std::span<const double> params, double l2);

struct ClassifyEvalConfig {
    std::vector<double> ratios = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    int trials = 5;
    std::uint64_t seed = 12345;
    LogRegConfig logreg;
};

/// Train/test node splits at each ratio; predictions take the top-k_i labels
/// where k_i is the node's true label count.
EvalReport node_classify_eval(const Embedding& emb, const NodeLabels& labels,
                              const ClassifyEvalConfig& cfg);

// --- hyperparameter sweeps ------------------------------------------------

struct ParamGrid {
    std::vector<std::pair<std::string, std::vector<double>>> axes;
};

struct SweepCell {
    std::map<std::string, double> params;
    bool ok = false;
    std::string error;
    EvalReport report;
    bool best = false;
};

struct SweepResult {
    std::vector<SweepCell> cells;
    int best_index = -1;
};

/// Evaluates the Cartesian product of the grid; failures are recorded and the
/// sweep continues. The best cell by mean MAP (or mean micro-F1 when MAP is
/// absent) is flagged.
SweepResult run_sweep(const ParamGrid& grid,
                      const std::function<EvalReport(const std::map<std::string, double>&)>& run);

std::string sweep_to_csv(const SweepResult& result);

}  // namespace gembed
