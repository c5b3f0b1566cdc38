// gembed: graph embedding toolkit CLI.
//
// Subcommands: gen (synthetic SBM datasets), embed (learn an embedding),
// eval (reconstruction / link prediction / node classification), viz
// (PCA 2-D projection export). Every run writes a run.json sidecar carrying
// the full effective configuration; re-running with --config <sidecar>
// reproduces the artifacts byte for byte in single-threaded mode.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gembed/embedding.hpp"
#include "gembed/errors.hpp"
#include "gembed/eval.hpp"
#include "gembed/graph.hpp"
#include "gembed/proximity.hpp"
#include "gembed/sdne.hpp"
#include "gembed/sgd_embed.hpp"
#include "gembed/sgns.hpp"
#include "gembed/spectral.hpp"
#include "gembed/viz.hpp"
#include "gembed/walks.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace gembed;

namespace {

struct Opts {
    std::string config_path;
    std::string input;
    std::string labels;
    std::string output;
    std::string embedding;
    std::string model;
    std::string method;
    std::string task;
    std::string score = "dot";
    std::string similarity = "katz";
    std::string layers;  // comma list of hidden widths for sdne
    std::string ks = "10,100,1000";
    std::string split_fractions = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9";
    std::vector<std::string> grid;

    int dim = 128;
    std::uint64_t seed = 12345;
    int threads = 1;
    bool directed = false;
    bool weighted = false;

    // gen
    int n = 1024;
    int blocks = 3;
    double p_in = 0.1;
    double p_out = 0.01;

    // method hyperparameters (0 means "per-method default" where noted)
    double beta = 0.0;  // katz attenuation; 0 -> 0.5/rho(W)
    double lambda = 1.0;
    double p = 1.0;
    double q = 1.0;
    int walk_length = 80;
    int num_walks = 10;
    int window = 10;
    int neg = 5;
    double alpha = 1e-2;
    double beta_penalty = 5.0;
    double nu = 1e-4;
    double lr = 0.0;   // 0 -> per-method default
    int epochs = 0;    // 0 -> per-method default
    double l2 = 1e-3;

    double fraction = 0.2;
    int sample = 1024;
    int trials = 5;
};

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(std::stoi(tok));
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(std::stod(tok));
    }
    return out;
}

// Flags not given on the command line pick up values from --config. Each
// subcommand registers its own bindings; apply() consults the subcommand
// that actually parsed so explicit flags always win.
class ConfigMerge {
public:
    template <typename T>
    void bind(CLI::App* app, const std::string& name, T* target) {
        setters_[app][name] = [target](const json& v) { *target = v.get<T>(); };
    }
    void bind(CLI::App* app, const std::string& name, std::vector<std::string>* target) {
        setters_[app][name] = [target](const json& v) {
            target->clear();
            for (const auto& e : v) target->push_back(e.get<std::string>());
        };
    }

    void apply(CLI::App* app, const json& cfg) {
        auto table = setters_.find(app);
        if (table == setters_.end()) return;
        for (const auto& [key, value] : cfg.items()) {
            auto it = table->second.find(key);
            if (it == table->second.end()) continue;  // unknown keys are ignored
            CLI::Option* opt = app->get_option_no_throw("--" + key);
            if (opt && opt->count() > 0) continue;  // explicit flag wins
            it->second(value);
        }
    }

private:
    std::map<CLI::App*, std::map<std::string, std::function<void(const json&)>>> setters_;
};

json load_config_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open config file: " + path);
    json j;
    in >> j;
    if (j.contains("config")) return j["config"];  // accept run sidecars
    return j;
}

void ensure_output_dir(const Opts& o) {
    if (o.output.empty()) throw config_error("--output directory is required");
    std::error_code ec;
    fs::create_directories(o.output, ec);
    if (ec) throw io_error("cannot create output directory: " + o.output);
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot write file: " + path);
    out << content;
}

Graph load_input_graph(const Opts& o) {
    if (o.input.empty()) throw io_error("--input edge list is required");
    return load_edge_list_file(o.input, o.directed, o.weighted);
}

// The full effective configuration, echoed into every sidecar.
json config_echo(const std::string& command, const Opts& o) {
    json c;
    c["command"] = command;
    c["input"] = o.input;
    c["labels"] = o.labels;
    c["output"] = o.output;
    c["embedding"] = o.embedding;
    c["model"] = o.model;
    c["method"] = o.method;
    c["task"] = o.task;
    c["score"] = o.score;
    c["similarity"] = o.similarity;
    c["layers"] = o.layers;
    c["ks"] = o.ks;
    c["split-fractions"] = o.split_fractions;
    c["grid"] = o.grid;
    c["dim"] = o.dim;
    c["seed"] = o.seed;
    c["threads"] = o.threads;
    c["directed"] = o.directed;
    c["weighted"] = o.weighted;
    c["n"] = o.n;
    c["blocks"] = o.blocks;
    c["p-in"] = o.p_in;
    c["p-out"] = o.p_out;
    c["beta"] = o.beta;
    c["lambda"] = o.lambda;
    c["p"] = o.p;
    c["q"] = o.q;
    c["walk-length"] = o.walk_length;
    c["num-walks"] = o.num_walks;
    c["window"] = o.window;
    c["neg"] = o.neg;
    c["alpha"] = o.alpha;
    c["beta-penalty"] = o.beta_penalty;
    c["nu"] = o.nu;
    c["lr"] = o.lr;
    c["epochs"] = o.epochs;
    c["l2"] = o.l2;
    c["fraction"] = o.fraction;
    c["sample"] = o.sample;
    c["trials"] = o.trials;
    return c;
}

void write_sidecar(const std::string& command, const Opts& o,
                   const std::vector<std::string>& outputs, double seconds,
                   const json& extra = json::object()) {
    json side;
    side["command"] = command;
    side["config"] = config_echo(command, o);
    side["outputs"] = outputs;
    json timings;
    timings["total_seconds"] = seconds;
    side["timings"] = timings;
    if (!extra.empty()) side["run_info"] = extra;
    write_text_file(fs::path(o.output) / "run.json", side.dump(2) + "\n");
}

double lr_default(const Opts& o, const std::string& method) {
    if (o.lr > 0.0) return o.lr;
    if (method == "gf") return 0.01;
    if (method == "line1") return 0.025;
    if (method == "deepwalk" || method == "node2vec") return 0.025;
    if (method == "sdne") return 0.01;
    return 0.1;
}

int epochs_default(const Opts& o, const std::string& method) {
    if (o.epochs > 0) return o.epochs;
    if (method == "gf") return 300;
    if (method == "line1") return 50;
    if (method == "deepwalk" || method == "node2vec") return 3;
    if (method == "sdne") return 50;
    return 100;
}

std::vector<int> sdne_layer_sizes(const Opts& o, int n) {
    std::vector<int> sizes = {n};
    if (!o.layers.empty()) {
        for (int h : parse_int_list(o.layers)) sizes.push_back(h);
    } else {
        int h = std::min(n - 1, std::max(2 * o.dim, 32));
        if (h > o.dim) sizes.push_back(h);
    }
    sizes.push_back(o.dim);
    return sizes;
}

ProximityMatrix build_similarity(const Graph& g, const Opts& o) {
    if (o.similarity == "katz") {
        double beta = o.beta > 0.0 ? o.beta : katz_default_beta(g);
        return katz_matrix(g, beta);
    }
    if (o.similarity == "cn" || o.similarity == "common_neighbors")
        return common_neighbors_matrix(g);
    if (o.similarity == "aa" || o.similarity == "adamic_adar") return adamic_adar_matrix(g);
    throw config_error("unknown similarity kind: " + o.similarity);
}

struct EmbedOutcome {
    Embedding embedding;
    std::optional<SdneModel> model;
};

EmbedOutcome run_method(const Graph& g, const Opts& o) {
    const std::string& m = o.method;
    if (o.dim >= g.n() && m != "hope")
        throw config_error("dimension must be smaller than the node count");
    EmbedOutcome out;
    if (m == "lle") {
        out.embedding = lle_embed(g, o.dim, 1e-8, 4000, o.seed);
    } else if (m == "le") {
        out.embedding = le_embed(g, o.dim, 1e-8, 4000, o.seed);
    } else if (m == "hope") {
        ProximityMatrix prox = build_similarity(g, o);
        out.embedding = hope_embed(g, o.dim, prox, 1e-8, 4000, o.seed);
    } else if (m == "gf") {
        SgdConfig cfg;
        cfg.learning_rate = lr_default(o, m);
        cfg.epochs = epochs_default(o, m);
        cfg.seed = o.seed;
        cfg.lambda = o.lambda;
        out.embedding = gf_embed(g, o.dim, cfg);
    } else if (m == "line1") {
        SgdConfig cfg;
        cfg.learning_rate = lr_default(o, m);
        cfg.epochs = epochs_default(o, m);
        cfg.seed = o.seed;
        cfg.neg_samples = o.neg;
        out.embedding = line1_embed(g, o.dim, cfg);
    } else if (m == "deepwalk" || m == "node2vec") {
        WalkConfig cfg;
        cfg.num_walks = o.num_walks;
        cfg.walk_length = o.walk_length;
        cfg.window = o.window;
        cfg.p = m == "deepwalk" ? 1.0 : o.p;
        cfg.q = m == "deepwalk" ? 1.0 : o.q;
        cfg.seed = o.seed;
        out.embedding =
            node2vec_embed(g, o.dim, cfg, o.neg, lr_default(o, m), epochs_default(o, m), o.threads);
    } else if (m == "sdne") {
        SdneConfig cfg;
        cfg.layer_sizes = sdne_layer_sizes(o, g.n());
        cfg.alpha = o.alpha;
        cfg.beta_penalty = o.beta_penalty;
        cfg.nu = o.nu;
        cfg.lr = lr_default(o, m);
        cfg.epochs = epochs_default(o, m);
        cfg.seed = o.seed;
        SdneResult r = sdne_embed(g, cfg);
        out.embedding = std::move(r.embedding);
        out.model = std::move(r.model);
    } else {
        throw config_error("unknown method: " + m);
    }
    return out;
}

int cmd_gen(const Opts& o) {
    auto t0 = std::chrono::steady_clock::now();
    ensure_output_dir(o);
    auto [g, labels] = generate_sbm(o.n, o.blocks, o.p_in, o.p_out, o.seed);

    std::ostringstream edges;
    save_edge_list(g, edges);
    write_text_file(fs::path(o.output) / "graph.edges", edges.str());
    std::ostringstream lab;
    save_labels(labels, lab);
    write_text_file(fs::path(o.output) / "graph.labels", lab.str());

    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    json info;
    info["nodes"] = g.n();
    info["edges"] = g.edge_count();
    write_sidecar("gen", o, {"graph.edges", "graph.labels"}, secs, info);
    return 0;
}

int cmd_embed(const Opts& o) {
    auto t0 = std::chrono::steady_clock::now();
    ensure_output_dir(o);
    Graph g = load_input_graph(o);
    EmbedOutcome res = run_method(g, o);

    std::vector<std::string> outputs;
    {
        std::ostringstream s;
        save_embedding(res.embedding.Y, s);
        write_text_file(fs::path(o.output) / "embedding.txt", s.str());
        outputs.push_back("embedding.txt");
    }
    if (res.embedding.has_pair() && o.directed) {
        std::ostringstream s, t;
        save_embedding(res.embedding.Y, s);
        write_text_file(fs::path(o.output) / "embedding.src", s.str());
        save_embedding(*res.embedding.Yt, t);
        write_text_file(fs::path(o.output) / "embedding.tgt", t.str());
        outputs.push_back("embedding.src");
        outputs.push_back("embedding.tgt");
    }
    if (!res.embedding.loss_trace.empty()) {
        save_loss_trace_file(res.embedding.loss_trace, fs::path(o.output) / "trace.csv");
        outputs.push_back("trace.csv");
    }
    if (res.model) {
        res.model->save(fs::path(o.output) / "model.bin");
        outputs.push_back("model.bin");
    }

    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    json info;
    info["method_params"] = res.embedding.params;
    if (!res.embedding.warnings.empty()) info["warnings"] = res.embedding.warnings;
    write_sidecar("embed", o, outputs, secs, info);
    return 0;
}

ParamGrid parse_grid(const std::vector<std::string>& specs) {
    ParamGrid grid;
    for (const std::string& s : specs) {
        auto eq = s.find('=');
        if (eq == std::string::npos) throw config_error("grid axis must be name=v1,v2,...: " + s);
        grid.axes.push_back({s.substr(0, eq), parse_double_list(s.substr(eq + 1))});
    }
    return grid;
}

void apply_grid_params(Opts& o, const std::map<std::string, double>& params) {
    for (const auto& [name, value] : params) {
        if (name == "beta")
            o.beta = value;
        else if (name == "lambda")
            o.lambda = value;
        else if (name == "dim")
            o.dim = static_cast<int>(value);
        else if (name == "p")
            o.p = value;
        else if (name == "q")
            o.q = value;
        else if (name == "alpha")
            o.alpha = value;
        else if (name == "beta-penalty")
            o.beta_penalty = value;
        else if (name == "nu")
            o.nu = value;
        else if (name == "lr")
            o.lr = value;
        else if (name == "neg")
            o.neg = static_cast<int>(value);
        else if (name == "window")
            o.window = static_cast<int>(value);
        else
            throw config_error("unknown grid parameter: " + name);
    }
}

EvalReport eval_once(const Graph* g, const Opts& o) {
    RankedEvalConfig rcfg;
    rcfg.ks = parse_int_list(o.ks);
    rcfg.sample = o.sample;
    rcfg.trials = o.trials;
    rcfg.seed = o.seed;

    if (o.task == "reconstruct") {
        if (!g) throw io_error("--input graph is required for reconstruction");
        Embedding emb;
        std::optional<SdneModel> model;
        if (!o.embedding.empty()) {
            emb.Y = load_embedding_file(o.embedding);
            emb.d = emb.Y.cols();
            emb.method = "file";
            if (!o.model.empty()) model = SdneModel::load(o.model);
        } else if (!o.method.empty()) {
            EmbedOutcome res = run_method(*g, o);
            emb = std::move(res.embedding);
            model = std::move(res.model);
        } else {
            throw config_error("reconstruct needs --embedding or --method");
        }
        ScoreKind kind = score_kind_from_string(o.score);
        ScoreFn score;
        if (kind == ScoreKind::decoder) {
            if (!model) throw config_error("decoder score needs --method sdne or --model");
            score = make_decoder_score(*model, emb);
        } else {
            score = make_score(emb, kind);
        }
        EvalReport r = reconstruct_eval(*g, emb, score, rcfg);
        r.hyperparams["dim"] = emb.d;
        return r;
    }
    if (o.task == "linkpred") {
        if (!g) throw io_error("--input graph is required for link prediction");
        if (o.method.empty()) throw config_error("linkpred needs --method");
        Opts local = o;
        EmbedderFn embedder = [&local](const Graph& train) {
            return run_method(train, local).embedding;
        };
        ScoreKind kind = score_kind_from_string(o.score);
        if (kind == ScoreKind::decoder)
            throw config_error("linkpred with the decoder score is not supported; "
                               "use dot, cosine or euclidean");
        EvalReport r = link_predict_eval(*g, embedder, o.fraction, rcfg, kind);
        r.hyperparams["dim"] = o.dim;
        return r;
    }
    if (o.task == "nodeclass") {
        if (o.labels.empty()) throw config_error("nodeclass needs --labels");
        Embedding emb;
        if (!o.embedding.empty()) {
            emb.Y = load_embedding_file(o.embedding);
            emb.d = emb.Y.cols();
            emb.method = "file";
        } else if (!o.method.empty()) {
            if (!g) throw io_error("--input graph is required when training for nodeclass");
            emb = run_method(*g, o).embedding;
        } else {
            throw config_error("nodeclass needs --embedding or --method");
        }
        NodeLabels labels = load_labels_file(o.labels, emb.n());
        ClassifyEvalConfig ccfg;
        ccfg.ratios = parse_double_list(o.split_fractions);
        ccfg.trials = o.trials;
        ccfg.seed = o.seed;
        ccfg.logreg.l2 = o.l2;
        EvalReport r = node_classify_eval(emb, labels, ccfg);
        r.hyperparams["dim"] = emb.d;
        return r;
    }
    throw config_error("unknown task: " + o.task);
}

int cmd_eval(const Opts& o) {
    auto t0 = std::chrono::steady_clock::now();
    ensure_output_dir(o);
    std::optional<Graph> g;
    if (!o.input.empty()) g = load_input_graph(o);
    const Graph* gp = g ? &*g : nullptr;

    std::vector<std::string> outputs;
    if (!o.grid.empty()) {
        ParamGrid grid = parse_grid(o.grid);
        SweepResult sweep = run_sweep(grid, [&](const std::map<std::string, double>& params) {
            Opts cell = o;
            apply_grid_params(cell, params);
            // Optimal-hyperparameter reruns get a fresh split per cell.
            return eval_once(gp, cell);
        });
        write_text_file(fs::path(o.output) / "sweep.csv", sweep_to_csv(sweep));
        outputs.push_back("sweep.csv");
        if (sweep.best_index >= 0) {
            write_text_file(fs::path(o.output) / "report.json",
                            report_to_json(sweep.cells[sweep.best_index].report));
            outputs.push_back("report.json");
        }
    } else {
        EvalReport report = eval_once(gp, o);
        write_text_file(fs::path(o.output) / "report.json", report_to_json(report));
        write_text_file(fs::path(o.output) / "report.csv", report_to_csv(report));
        outputs.push_back("report.json");
        outputs.push_back("report.csv");
    }

    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_sidecar("eval", o, outputs, secs);
    return 0;
}

int cmd_viz(const Opts& o) {
    auto t0 = std::chrono::steady_clock::now();
    ensure_output_dir(o);
    if (o.embedding.empty()) throw config_error("viz needs --embedding");
    DenseMatrix Y = load_embedding_file(o.embedding);
    DenseMatrix proj = pca_project_2d(Y);

    std::optional<NodeLabels> labels;
    if (!o.labels.empty()) labels = load_labels_file(o.labels, Y.rows());

    std::ostringstream out;
    out << (labels ? "node_id,x,y,label\n" : "node_id,x,y\n");
    char buf[96];
    for (int i = 0; i < proj.rows(); ++i) {
        std::snprintf(buf, sizeof(buf), "%d,%.9g,%.9g", i, proj.at(i, 0), proj.at(i, 1));
        out << buf;
        if (labels) {
            out << ',';
            if (!labels->labels[i].empty()) out << labels->labels[i][0];
        }
        out << '\n';
    }
    write_text_file(fs::path(o.output) / "projection.csv", out.str());

    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_sidecar("viz", o, {"projection.csv"}, secs);
    return 0;
}

void register_common(CLI::App* cmd, Opts& o, ConfigMerge& merge) {
    cmd->add_option("--config", o.config_path, "JSON config file (flags override)");
    auto add_str = [&](const std::string& name, std::string& f, const std::string& help) {
        cmd->add_option("--" + name, f, help);
        merge.bind(cmd, name, &f);
    };
    auto add_int = [&](const std::string& name, int& f, const std::string& help) {
        cmd->add_option("--" + name, f, help);
        merge.bind(cmd, name, &f);
    };
    auto add_dbl = [&](const std::string& name, double& f, const std::string& help) {
        cmd->add_option("--" + name, f, help);
        merge.bind(cmd, name, &f);
    };

    add_str("input", o.input, "edge list file");
    add_str("labels", o.labels, "label file");
    add_str("output", o.output, "output directory");
    add_str("embedding", o.embedding, "embedding file");
    add_str("model", o.model, "sdne model file");
    add_str("method", o.method, "lle|le|gf|hope|line1|deepwalk|node2vec|sdne");
    add_str("task", o.task, "reconstruct|linkpred|nodeclass");
    add_str("score", o.score, "dot|cosine|euclidean|decoder");
    add_str("similarity", o.similarity, "hope similarity: katz|cn|aa");
    add_str("layers", o.layers, "sdne hidden widths, e.g. 64,16");
    add_str("ks", o.ks, "precision@k cutoffs, comma separated");
    add_str("split-fractions", o.split_fractions, "nodeclass train ratios");
    cmd->add_option("--grid", o.grid, "sweep axis name=v1,v2,... (repeatable)");
    merge.bind(cmd, "grid", &o.grid);

    add_int("dim", o.dim, "embedding dimensions");
    cmd->add_option("--seed", o.seed, "random seed");
    merge.bind(cmd, "seed", &o.seed);
    add_int("threads", o.threads, "worker threads (1 = exact reproducibility)");
    cmd->add_flag("--directed", o.directed, "treat input as directed");
    merge.bind(cmd, "directed", &o.directed);
    cmd->add_flag("--weighted", o.weighted, "parse a weight column");
    merge.bind(cmd, "weighted", &o.weighted);

    add_int("n", o.n, "sbm: node count");
    add_int("blocks", o.blocks, "sbm: block count");
    add_dbl("p-in", o.p_in, "sbm: within-block edge probability");
    add_dbl("p-out", o.p_out, "sbm: cross-block edge probability");

    add_dbl("beta", o.beta, "katz attenuation (0 = 0.5/rho)");
    add_dbl("lambda", o.lambda, "gf regularization");
    add_dbl("p", o.p, "node2vec return parameter");
    add_dbl("q", o.q, "node2vec in-out parameter");
    add_int("walk-length", o.walk_length, "walk length");
    add_int("num-walks", o.num_walks, "walks per node");
    add_int("window", o.window, "skip-gram context size");
    add_int("neg", o.neg, "negative samples");
    add_dbl("alpha", o.alpha, "sdne first-order weight");
    add_dbl("beta-penalty", o.beta_penalty, "sdne observed-entry reweight");
    add_dbl("nu", o.nu, "sdne weight decay");
    add_dbl("lr", o.lr, "learning rate (0 = method default)");
    add_int("epochs", o.epochs, "training epochs (0 = method default)");
    add_dbl("l2", o.l2, "logistic regression L2");

    add_dbl("fraction", o.fraction, "linkpred hidden edge fraction");
    add_int("sample", o.sample, "evaluation node sample size");
    add_int("trials", o.trials, "evaluation trials");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gembed: graph embedding toolkit"};
    app.require_subcommand(1);

    Opts o;
    ConfigMerge merge;
    CLI::App* gen = app.add_subcommand("gen", "generate an SBM dataset");
    CLI::App* embed = app.add_subcommand("embed", "learn a node embedding");
    CLI::App* eval = app.add_subcommand("eval", "evaluate an embedding method");
    CLI::App* viz = app.add_subcommand("viz", "export a PCA 2-D projection");
    for (CLI::App* cmd : {gen, embed, eval, viz}) register_common(cmd, o, merge);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 3;
    }

    try {
        CLI::App* cmd = app.get_subcommands().front();
        if (!o.config_path.empty()) merge.apply(cmd, load_config_json(o.config_path));
        if (cmd == gen) return cmd_gen(o);
        if (cmd == embed) return cmd_embed(o);
        if (cmd == eval) return cmd_eval(o);
        if (cmd == viz) return cmd_viz(o);
        throw config_error("no subcommand");
    } catch (const io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const numerical_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
