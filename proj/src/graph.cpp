#include "gembed/graph.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "gembed/errors.hpp"
#include "gembed/rng.hpp"

namespace gembed {

bool Graph::has_edge(int u, int v) const {
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

double Graph::edge_weight(int u, int v) const {
    auto nb = neighbors(u);
    auto it = std::lower_bound(nb.begin(), nb.end(), v);
    if (it == nb.end() || *it != v) return 0.0;
    return wgt_[offsets_[u] + static_cast<std::size_t>(it - nb.begin())];
}

std::vector<Edge> Graph::edge_list() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (int u = 0; u < n_; ++u) {
        auto nb = neighbors(u);
        auto w = neighbor_weights(u);
        for (std::size_t k = 0; k < nb.size(); ++k) {
            if (!directed_ && nb[k] < u) continue;
            out.push_back({u, nb[k], w[k]});
        }
    }
    return out;
}

SparseMatrix Graph::adjacency() const {
    std::vector<SparseMatrix::Triplet> t;
    t.reserve(nbr_.size());
    for (int u = 0; u < n_; ++u) {
        auto nb = neighbors(u);
        auto w = neighbor_weights(u);
        for (std::size_t k = 0; k < nb.size(); ++k) t.push_back({u, nb[k], w[k]});
    }
    return SparseMatrix::from_triplets(n_, n_, std::move(t));
}

bool Graph::is_connected() const {
    if (n_ == 0) return true;
    std::vector<char> seen(n_, 0);
    std::vector<int> stack = {0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (int v : neighbors(u)) {
            if (!seen[v]) {
                seen[v] = 1;
                ++count;
                stack.push_back(v);
            }
        }
    }
    // For directed graphs this is reachability from node 0 only; the
    // embedders that require connectivity all take undirected input.
    return count == n_;
}

int Graph::min_degree() const {
    int m = n_ > 0 ? degree(0) : 0;
    for (int u = 1; u < n_; ++u) m = std::min(m, degree(u));
    return m;
}

GraphBuilder::GraphBuilder(int n, bool directed, bool weighted)
    : n_(n), directed_(directed), weighted_(weighted) {
    if (n < 0) throw config_error("GraphBuilder: negative node count");
}

void GraphBuilder::add_edge(int u, int v, double w) {
    if (u < 0 || u >= n_ || v < 0 || v >= n_)
        throw config_error("GraphBuilder: node id out of range");
    if (u == v) throw config_error("GraphBuilder: self-loops are not supported");
    if (w < 0.0) throw config_error("GraphBuilder: negative edge weight");
    if (!std::isfinite(w)) throw config_error("GraphBuilder: non-finite edge weight");
    edges_.push_back({u, v, w});
}

Graph GraphBuilder::build() {
    std::vector<Edge> all = edges_;
    if (!directed_) {
        all.reserve(edges_.size() * 2);
        for (const Edge& e : edges_) all.push_back({e.v, e.u, e.w});
    }
    std::sort(all.begin(), all.end(), [](const Edge& a, const Edge& b) {
        return a.u != b.u ? a.u < b.u : a.v < b.v;
    });

    Graph g;
    g.n_ = n_;
    g.directed_ = directed_;
    g.weighted_ = weighted_;
    g.offsets_.assign(static_cast<std::size_t>(n_) + 1, 0);
    std::size_t i = 0;
    for (int u = 0; u < n_; ++u) {
        while (i < all.size() && all[i].u == u) {
            int v = all[i].v;
            double w = 0.0;
            while (i < all.size() && all[i].u == u && all[i].v == v) w += all[i++].w;
            g.nbr_.push_back(v);
            g.wgt_.push_back(w);
        }
        g.offsets_[u + 1] = g.nbr_.size();
    }
    g.strength_.resize(n_, 0.0);
    for (int u = 0; u < n_; ++u) {
        double s = 0.0;
        for (double w : g.neighbor_weights(u)) s += w;
        g.strength_[u] = s;
    }
    g.edge_count_ = directed_ ? g.nbr_.size() : g.nbr_.size() / 2;
    return g;
}

bool NodeLabels::empty() const {
    for (const auto& l : labels)
        if (!l.empty()) return false;
    return true;
}

std::vector<int> NodeLabels::histogram() const {
    std::vector<int> h(label_count, 0);
    for (const auto& ls : labels)
        for (int l : ls) ++h[l];
    return h;
}

namespace {

bool parse_int(const std::string& tok, long long& out) {
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
    return ec == std::errc() && p == tok.data() + tok.size();
}

bool parse_double(const std::string& tok, double& out) {
    try {
        std::size_t pos = 0;
        out = std::stod(tok, &pos);
        return pos == tok.size();
    } catch (...) {
        return false;
    }
}

}  // namespace

Graph load_edge_list(std::istream& in, bool directed, bool weighted) {
    struct Raw {
        long long u, v;
        double w;
    };
    std::vector<Raw> raw;
    long long max_id = -1;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string a, b, c, extra;
        if (!(ls >> a)) continue;          // blank line
        if (a[0] == '#') continue;          // comment
        if (!(ls >> b)) throw io_error("edge list line " + std::to_string(lineno) + ": expected \"src dst [weight]\"");
        bool has_weight = static_cast<bool>(ls >> c);
        if (has_weight && (ls >> extra))
            throw io_error("edge list line " + std::to_string(lineno) + ": too many fields");

        long long u, v;
        if (!parse_int(a, u) || !parse_int(b, v) || u < 0 || v < 0)
            throw io_error("edge list line " + std::to_string(lineno) + ": node ids must be nonnegative integers");
        double w = 1.0;
        if (has_weight) {
            if (!weighted)
                throw io_error("edge list line " + std::to_string(lineno) + ": weight column present in unweighted mode");
            if (!parse_double(c, w) || !std::isfinite(w))
                throw io_error("edge list line " + std::to_string(lineno) + ": malformed weight");
            if (w < 0.0)
                throw io_error("edge list line " + std::to_string(lineno) + ": negative weight");
        }
        if (u == v)
            throw io_error("edge list line " + std::to_string(lineno) + ": self-loops are not supported");
        raw.push_back({u, v, w});
        max_id = std::max({max_id, u, v});
    }
    if (max_id >= (1LL << 31) - 1) throw io_error("edge list: node id exceeds supported range");
    int n = static_cast<int>(max_id + 1);
    GraphBuilder b(n, directed, weighted);
    for (const Raw& r : raw) b.add_edge(static_cast<int>(r.u), static_cast<int>(r.v), r.w);
    return b.build();
}

Graph load_edge_list_file(const std::string& path, bool directed, bool weighted) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open edge list: " + path);
    return load_edge_list(in, directed, weighted);
}

void save_edge_list(const Graph& g, std::ostream& out) {
    char buf[64];
    for (const Edge& e : g.edge_list()) {
        if (g.weighted()) {
            std::snprintf(buf, sizeof(buf), "%d %d %.9g\n", e.u, e.v, e.w);
        } else {
            std::snprintf(buf, sizeof(buf), "%d %d\n", e.u, e.v);
        }
        out << buf;
    }
}

NodeLabels load_labels(std::istream& in, int n) {
    NodeLabels out;
    out.labels.assign(n, {});
    int max_label = -1;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string id_tok, label_tok;
        if (!(ls >> id_tok)) continue;
        if (!(ls >> label_tok))
            throw io_error("label file line " + std::to_string(lineno) + ": expected \"node_id<TAB>label[,label...]\"");
        long long node;
        if (!parse_int(id_tok, node) || node < 0 || node >= n)
            throw io_error("label file line " + std::to_string(lineno) + ": node id out of range");
        std::vector<int>& ls_out = out.labels[static_cast<int>(node)];
        std::size_t start = 0;
        while (start <= label_tok.size()) {
            std::size_t comma = label_tok.find(',', start);
            std::string piece = label_tok.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
            long long lab;
            if (!parse_int(piece, lab) || lab < 0)
                throw io_error("label file line " + std::to_string(lineno) + ": malformed label id");
            ls_out.push_back(static_cast<int>(lab));
            max_label = std::max(max_label, static_cast<int>(lab));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        std::sort(ls_out.begin(), ls_out.end());
        ls_out.erase(std::unique(ls_out.begin(), ls_out.end()), ls_out.end());
    }
    out.label_count = max_label + 1;
    return out;
}

NodeLabels load_labels_file(const std::string& path, int n) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open label file: " + path);
    return load_labels(in, n);
}

void save_labels(const NodeLabels& labels, std::ostream& out) {
    for (std::size_t node = 0; node < labels.labels.size(); ++node) {
        const auto& ls = labels.labels[node];
        if (ls.empty()) continue;
        out << node << '\t';
        for (std::size_t i = 0; i < ls.size(); ++i) {
            if (i) out << ',';
            out << ls[i];
        }
        out << '\n';
    }
}

std::pair<Graph, NodeLabels> generate_sbm(int n, int blocks, double p_in, double p_out,
                                          std::uint64_t seed) {
    if (blocks <= 0 || blocks > n) throw config_error("generate_sbm: need 0 < blocks <= n");
    if (!(0.0 <= p_out && p_out <= p_in && p_in <= 1.0))
        throw config_error("generate_sbm: need 0 <= p_out <= p_in <= 1");

    Rng rng(hash_mix(seed, 0x5b3aULL));
    GraphBuilder b(n, /*directed=*/false, /*weighted=*/false);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double p = (i % blocks == j % blocks) ? p_in : p_out;
            if (rng.uniform() < p) b.add_edge(i, j);
        }
    }
    NodeLabels labels;
    labels.label_count = blocks;
    labels.labels.resize(n);
    for (int i = 0; i < n; ++i) labels.labels[i] = {i % blocks};
    return {b.build(), std::move(labels)};
}

SparseMatrix laplacian(const Graph& g, bool normalized) {
    if (g.directed()) throw config_error("laplacian: graph must be undirected");
    int n = g.n();
    std::vector<SparseMatrix::Triplet> t;
    t.reserve(static_cast<std::size_t>(n) + g.edge_count() * 2);
    if (!normalized) {
        for (int u = 0; u < n; ++u) {
            double d = g.weighted_degree(u);
            if (d != 0.0) t.push_back({u, u, d});
            auto nb = g.neighbors(u);
            auto w = g.neighbor_weights(u);
            for (std::size_t k = 0; k < nb.size(); ++k) t.push_back({u, nb[k], -w[k]});
        }
    } else {
        std::vector<double> dinv_sqrt(n, 0.0);
        for (int u = 0; u < n; ++u) {
            double d = g.weighted_degree(u);
            dinv_sqrt[u] = d > 0.0 ? 1.0 / std::sqrt(d) : 0.0;  // zero-degree rows stay zero
        }
        for (int u = 0; u < n; ++u) {
            if (g.weighted_degree(u) > 0.0) t.push_back({u, u, 1.0});
            auto nb = g.neighbors(u);
            auto w = g.neighbor_weights(u);
            for (std::size_t k = 0; k < nb.size(); ++k)
                t.push_back({u, nb[k], -w[k] * dinv_sqrt[u] * dinv_sqrt[nb[k]]});
        }
    }
    return SparseMatrix::from_triplets(n, n, std::move(t));
}

TransitionMatrix transition_matrix(const Graph& g) {
    int n = g.n();
    TransitionMatrix out;
    std::vector<SparseMatrix::Triplet> t;
    t.reserve(g.edge_count() * 2);
    for (int u = 0; u < n; ++u) {
        double d = g.weighted_degree(u);
        if (d <= 0.0) {
            out.zero_degree_nodes.push_back(u);
            continue;
        }
        auto nb = g.neighbors(u);
        auto w = g.neighbor_weights(u);
        for (std::size_t k = 0; k < nb.size(); ++k) t.push_back({u, nb[k], w[k] / d});
    }
    out.T = SparseMatrix::from_triplets(n, n, std::move(t));
    return out;
}

EdgeSplit split_edges(const Graph& g, double fraction, std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction < 1.0))
        throw config_error("split_edges: fraction must be in (0,1)");
    std::vector<Edge> edges = g.edge_list();
    std::size_t m = edges.size();
    std::size_t h = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(m)));
    if (h == 0 || h >= m)
        throw config_error("split_edges: fraction holds out 0 or all edges");

    Rng rng(hash_mix(seed, 0x511a7ULL));
    std::vector<std::size_t> order(m);
    for (std::size_t i = 0; i < m; ++i) order[i] = i;
    rng.shuffle(order);

    EdgeSplit split;
    split.fraction = fraction;
    split.seed = seed;
    GraphBuilder b(g.n(), g.directed(), g.weighted());
    for (std::size_t i = 0; i < m; ++i) {
        const Edge& e = edges[order[i]];
        if (i < h)
            split.heldout_edges.push_back({e.u, e.v});
        else
            b.add_edge(e.u, e.v, e.w);
    }
    std::sort(split.heldout_edges.begin(), split.heldout_edges.end());
    split.train_graph = b.build();
    return split;
}

std::pair<Graph, std::vector<int>> sample_node_subgraph(const Graph& g, int k,
                                                        std::uint64_t seed) {
    if (k < 0 || k > g.n()) throw config_error("sample_node_subgraph: need 0 <= k <= n");
    Rng rng(hash_mix(seed, 0x54b6ULL));
    std::vector<int> pool(g.n());
    for (int i = 0; i < g.n(); ++i) pool[i] = i;
    // Partial Fisher-Yates: first k entries are the sample.
    for (int i = 0; i < k; ++i) {
        int j = i + static_cast<int>(rng.bounded(static_cast<std::uint64_t>(g.n() - i)));
        std::swap(pool[i], pool[j]);
    }
    std::vector<int> sampled(pool.begin(), pool.begin() + k);
    std::sort(sampled.begin(), sampled.end());

    std::vector<int> new_id(g.n(), -1);
    for (int i = 0; i < k; ++i) new_id[sampled[i]] = i;

    GraphBuilder b(k, g.directed(), g.weighted());
    for (int i = 0; i < k; ++i) {
        int u = sampled[i];
        auto nb = g.neighbors(u);
        auto w = g.neighbor_weights(u);
        for (std::size_t t = 0; t < nb.size(); ++t) {
            int v = nb[t];
            if (new_id[v] < 0) continue;
            if (!g.directed() && v < u) continue;  // count each undirected edge once
            b.add_edge(new_id[u], new_id[v], w[t]);
        }
    }
    return {b.build(), std::move(sampled)};
}

}  // namespace gembed
