#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gembed/embedding.hpp"
#include "gembed/graph.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace gembed;

namespace {

int run_cli(const std::string& args) {
    std::string cmd = std::string(GEMBED_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / ("gembed_cli_" + name);
    fs::remove_all(dir);
    return dir;
}

}  // namespace

TEST_CASE("gen: default SBM round-trips and echoes its seed") {
    fs::path d1 = fresh_dir("gen1");
    REQUIRE(run_cli("gen --seed 5 --output " + d1.string()) == 0);
    Graph g = load_edge_list_file((d1 / "graph.edges").string(), false, false);
    CHECK(g.n() == 1024);
    NodeLabels labels = load_labels_file((d1 / "graph.labels").string(), g.n());
    CHECK(labels.histogram() == std::vector<int>{342, 341, 341});
    CHECK(slurp(d1 / "run.json").find("\"seed\": 5") != std::string::npos);

    fs::path d2 = fresh_dir("gen2");
    REQUIRE(run_cli("gen --seed 5 --output " + d2.string()) == 0);
    CHECK(slurp(d1 / "graph.edges") == slurp(d2 / "graph.edges"));
    CHECK(slurp(d1 / "graph.labels") == slurp(d2 / "graph.labels"));

    fs::path d3 = fresh_dir("gen3");
    REQUIRE(run_cli("gen --seed 6 --output " + d3.string()) == 0);
    CHECK(slurp(d1 / "graph.edges") != slurp(d3 / "graph.edges"));
}

TEST_CASE("embed: hope on karate with dim 128 writes the 34x128 header") {
    fs::path out = fresh_dir("hope128");
    REQUIRE(run_cli("embed --method hope --beta 0.0625 --dim 128 --input data/karate.edges "
                    "--output " + out.string()) == 0);
    std::ifstream in(out / "embedding.txt");
    std::string header;
    std::getline(in, header);
    CHECK(header == "34 128");
}

TEST_CASE("embed: deepwalk is node2vec with p = q = 1") {
    fs::path a = fresh_dir("dw");
    fs::path b = fresh_dir("n2v11");
    REQUIRE(run_cli("embed --method deepwalk --dim 8 --input data/karate.edges --seed 11 "
                    "--epochs 2 --output " + a.string()) == 0);
    REQUIRE(run_cli("embed --method node2vec --p 1 --q 1 --dim 8 --input data/karate.edges "
                    "--seed 11 --epochs 2 --output " + b.string()) == 0);
    CHECK(slurp(a / "embedding.txt") == slurp(b / "embedding.txt"));
}

TEST_CASE("embed: directed hope writes source and target factor files") {
    fs::path dir = fresh_dir("directed");
    fs::create_directories(dir);
    {
        std::ofstream edges(dir / "ring.edges");
        edges << "0 1\n1 2\n2 3\n3 0\n0 2\n";
    }
    REQUIRE(run_cli("embed --method hope --directed --dim 2 --beta 0.2 --input " +
                    (dir / "ring.edges").string() + " --output " + dir.string()) == 0);
    CHECK(fs::exists(dir / "embedding.txt"));
    CHECK(fs::exists(dir / "embedding.src"));
    CHECK(fs::exists(dir / "embedding.tgt"));
    CHECK(slurp(dir / "embedding.txt") == slurp(dir / "embedding.src"));
}

TEST_CASE("exit codes: io 2, config 3, numerical 4") {
    fs::path out = fresh_dir("codes");
    CHECK(run_cli("embed --method le --dim 4 --input /nonexistent.edges --output " +
                  out.string()) == 2);
    CHECK(run_cli("embed --method bogus --dim 4 --input data/karate.edges --output " +
                  out.string()) == 3);
    CHECK(run_cli("eval --task nodeclass --method le --dim 4 --input data/karate.edges "
                  "--output " + out.string()) == 3);  // no labels
    CHECK(run_cli("embed --method gf --dim 4 --lr 100 --epochs 40 --input data/karate.edges "
                  "--output " + out.string()) == 4);  // divergence
    CHECK(run_cli("embed --method le --dim 40 --input data/karate.edges --output " +
                  out.string()) == 3);  // dimension >= n
}

TEST_CASE("eval: identical config produces byte-identical reports") {
    fs::path a = fresh_dir("eval_a");
    fs::path b = fresh_dir("eval_b");
    std::string common = "eval --task reconstruct --method hope --dim 16 "
                         "--input data/karate.edges --ks 10,50 --sample 34 --trials 3 --seed 7 ";
    REQUIRE(run_cli(common + "--output " + a.string()) == 0);
    REQUIRE(run_cli(common + "--output " + b.string()) == 0);
    CHECK(slurp(a / "report.json") == slurp(b / "report.json"));
    CHECK(slurp(a / "report.csv") == slurp(b / "report.csv"));
}

TEST_CASE("eval: grid sweep writes one row per cell with a unique best flag") {
    fs::path out = fresh_dir("sweep");
    REQUIRE(run_cli("eval --task linkpred --method hope --input data/karate.edges "
                    "--ks 10 --sample 34 --trials 2 --seed 13 "
                    "--grid beta=0.03125,0.0625 --grid dim=4,8 --output " + out.string()) == 0);
    std::istringstream csv(slurp(out / "sweep.csv"));
    std::string line;
    std::getline(csv, line);
    CHECK(line.find("beta") != std::string::npos);
    CHECK(line.find("dim") != std::string::npos);
    // Locate the best-flag column from the header (the trailing error
    // column may be empty and dropped by naive splitting).
    std::vector<std::string> header_cells;
    {
        std::stringstream hs(line);
        std::string cell;
        while (std::getline(hs, cell, ',')) header_cells.push_back(cell);
    }
    std::size_t best_idx = 0;
    while (best_idx < header_cells.size() && header_cells[best_idx] != "best") ++best_idx;
    REQUIRE(best_idx < header_cells.size());
    int rows = 0, best = 0;
    while (std::getline(csv, line)) {
        if (line.empty()) continue;
        ++rows;
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        REQUIRE(cells.size() > best_idx);
        if (cells[best_idx] == "1") ++best;
    }
    CHECK(rows == 4);
    CHECK(best == 1);
}

TEST_CASE("viz: 2-D input is preserved up to rotation; columns orthogonal") {
    fs::path dir = fresh_dir("viz2d");
    fs::create_directories(dir);
    DenseMatrix Y(12, 2);
    Rng rng(15);
    for (double& v : Y.data()) v = rng.uniform(-0.5, 0.5);
    save_embedding_file(Y, (dir / "emb.txt").string());
    REQUIRE(run_cli("viz --embedding " + (dir / "emb.txt").string() + " --output " +
                    dir.string()) == 0);

    std::ifstream in(dir / "projection.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "node_id,x,y");
    DenseMatrix P(12, 2);
    for (int i = 0; i < 12; ++i) {
        std::string line;
        REQUIRE(std::getline(in, line));
        for (char& ch : line)
            if (ch == ',') ch = ' ';
        std::istringstream ls(line);
        int id;
        ls >> id >> P.at(i, 0) >> P.at(i, 1);
    }
    // Distance matrices agree: PCA of full-rank 2-D input is an isometry.
    for (int i = 0; i < 12; ++i)
        for (int j = i + 1; j < 12; ++j) {
            double dy = std::hypot(Y.at(i, 0) - Y.at(j, 0), Y.at(i, 1) - Y.at(j, 1));
            double dp = std::hypot(P.at(i, 0) - P.at(j, 0), P.at(i, 1) - P.at(j, 1));
            CHECK(std::fabs(dy - dp) <= 1e-8);
        }
    double dot = 0;
    for (int i = 0; i < 12; ++i) dot += P.at(i, 0) * P.at(i, 1);
    CHECK(std::fabs(dot) <= 1e-8);

    // d = 1 embedding is rejected with a config error.
    DenseMatrix Y1(5, 1);
    save_embedding_file(Y1, (dir / "emb1.txt").string());
    CHECK(run_cli("viz --embedding " + (dir / "emb1.txt").string() + " --output " +
                  dir.string()) == 3);
}

TEST_CASE("viz: HOPE d=128 projection of the SBM recovers blocks with 3-means") {
    fs::path gen = fresh_dir("viz_gen");
    REQUIRE(run_cli("gen --seed 19 --output " + gen.string()) == 0);
    fs::path emb = fresh_dir("viz_emb");
    REQUIRE(run_cli("embed --method hope --dim 128 --input " + (gen / "graph.edges").string() +
                    " --seed 19 --output " + emb.string()) == 0);
    fs::path out = fresh_dir("viz_out");
    REQUIRE(run_cli("viz --embedding " + (emb / "embedding.txt").string() + " --labels " +
                    (gen / "graph.labels").string() + " --output " + out.string()) == 0);

    std::ifstream in(out / "projection.csv");
    std::string line;
    std::getline(in, line);
    CHECK(line == "node_id,x,y,label");
    DenseMatrix P(1024, 2);
    std::vector<std::vector<int>> labels(1024);
    for (int i = 0; i < 1024; ++i) {
        REQUIRE(std::getline(in, line));
        for (char& ch : line)
            if (ch == ',') ch = ' ';
        std::istringstream ls(line);
        int id, lab;
        ls >> id >> P.at(i, 0) >> P.at(i, 1) >> lab;
        labels[i] = {lab};
    }
    std::vector<int> assign = oracles::kmeans_2d(P, 3, 23);
    CHECK(oracles::clustering_accuracy(assign, labels, 3) >= 0.9);
}

TEST_CASE("reproducibility: rerunning from the sidecar is byte-identical") {
    fs::path a = fresh_dir("rerun_a");
    REQUIRE(run_cli("embed --method node2vec --dim 8 --p 2 --q 0.5 --epochs 2 "
                    "--input data/karate.edges --seed 29 --output " + a.string()) == 0);
    fs::path b = fresh_dir("rerun_b");
    REQUIRE(run_cli("embed --config " + (a / "run.json").string() + " --output " +
                    b.string()) == 0);
    CHECK(slurp(a / "embedding.txt") == slurp(b / "embedding.txt"));
    CHECK(slurp(a / "trace.csv") == slurp(b / "trace.csv"));
}
