#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gembed/embedding.hpp"
#include "gembed/graph.hpp"

namespace gembed {

struct SdneConfig {
    std::vector<int> layer_sizes;  // encoder widths from n down to d; decoder mirrors
    double alpha = 1e-2;           // first-order (Laplacian) penalty weight
    double beta_penalty = 5.0;     // reconstruction reweight of observed entries
    double nu = 1e-4;              // weight decay on the weight matrices
    double lr = 1e-2;
    int epochs = 50;
    int batch_size = 0;            // 0 -> full batch
    std::uint64_t seed = 12345;
};

/// Sigmoid autoencoder over adjacency rows: widths runs from n down to the
/// bottleneck d and mirrors back up; W[l] maps activation l to l+1.
struct SdneModel {
    std::vector<int> widths;        // full stack, encoder then mirrored decoder
    int bottleneck = 0;             // activation index of the embedding layer
    std::vector<DenseMatrix> W;     // W[l]: widths[l+1] x widths[l]
    std::vector<std::vector<double>> b;

    SdneModel() = default;
    SdneModel(const std::vector<int>& encoder_widths, std::uint64_t seed);

    int input_dim() const { return widths.empty() ? 0 : widths.front(); }
    int bottleneck_dim() const { return widths.empty() ? 0 : widths[bottleneck]; }
    int num_layers() const { return static_cast<int>(W.size()); }

    std::vector<double> encode(std::span<const double> x) const;
    std::vector<double> decode(std::span<const double> y) const;

    /// Flat parameter vector: per layer, W row-major then b.
    std::vector<double> to_flat() const;
    void from_flat(std::span<const double> params);

    /// Versioned flat binary: header, widths, then the parameter matrices.
    void save(const std::string& path) const;
    static SdneModel load(const std::string& path);
};

struct SdneResult {
    Embedding embedding;
    SdneModel model;
};

/// Train the coupled autoencoder on a graph's adjacency rows, minimizing
///   sum_i ||(xhat_i - x_i) . b_i||^2
///   + alpha sum_{(i,j) in E} w_ij ||y_i - y_j||^2
///   + nu * sum of squared weights,
/// where b_i is beta_penalty on observed entries and 1 elsewhere.
SdneResult sdne_embed(const Graph& g, const SdneConfig& cfg);

/// Decoder output for one node's embedding (a reconstructed adjacency row).
std::vector<double> sdne_reconstruct(const SdneModel& model, const Embedding& emb, int node);

/// Full-batch loss/gradient in flat parameter space (finite-difference gate).
double sdne_loss(const Graph& g, const SdneModel& model, const SdneConfig& cfg);
std::vector<double> sdne_grad_flat(const Graph& g, const SdneModel& model, const SdneConfig& cfg);

}  // namespace gembed
