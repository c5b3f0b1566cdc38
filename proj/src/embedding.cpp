#include "gembed/embedding.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "gembed/errors.hpp"

namespace gembed {

void Embedding::validate() const {
    if (d <= 0 || Y.cols() != d) throw numerical_error("embedding: bad dimension");
    if (d >= Y.rows()) throw numerical_error("embedding: dimension must be < node count");
    if (!Y.all_finite()) throw numerical_error("embedding: non-finite entries");
    if (Yt && (!Yt->all_finite() || Yt->rows() != Y.rows() || Yt->cols() != d))
        throw numerical_error("embedding: malformed target-side matrix");
}

void save_embedding(const DenseMatrix& Y, std::ostream& out) {
    out << Y.rows() << ' ' << Y.cols() << '\n';
    char buf[40];
    for (int i = 0; i < Y.rows(); ++i) {
        out << i;
        for (int j = 0; j < Y.cols(); ++j) {
            std::snprintf(buf, sizeof(buf), " %.9g", Y.at(i, j));
            out << buf;
        }
        out << '\n';
    }
}

void save_embedding_file(const DenseMatrix& Y, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write embedding file: " + path);
    save_embedding(Y, out);
}

DenseMatrix load_embedding(std::istream& in) {
    int n = 0, d = 0;
    if (!(in >> n >> d) || n <= 0 || d <= 0)
        throw io_error("embedding file: malformed header, expected \"n d\"");
    DenseMatrix Y(n, d);
    std::vector<char> seen(n, 0);
    for (int r = 0; r < n; ++r) {
        int id;
        if (!(in >> id) || id < 0 || id >= n)
            throw io_error("embedding file: bad node id on row " + std::to_string(r + 2));
        if (seen[id]) throw io_error("embedding file: duplicate node id " + std::to_string(id));
        seen[id] = 1;
        for (int j = 0; j < d; ++j) {
            if (!(in >> Y.at(id, j)))
                throw io_error("embedding file: truncated row for node " + std::to_string(id));
        }
    }
    return Y;
}

DenseMatrix load_embedding_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open embedding file: " + path);
    return load_embedding(in);
}

void save_loss_trace_file(const std::vector<double>& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write loss trace: " + path);
    out << "epoch,loss\n";
    char buf[40];
    for (std::size_t e = 0; e < trace.size(); ++e) {
        std::snprintf(buf, sizeof(buf), "%zu,%.9g\n", e, trace[e]);
        out << buf;
    }
}

}  // namespace gembed
