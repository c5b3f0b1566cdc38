#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gembed/matrix.hpp"

namespace gembed {

/// A learned node embedding: Y is |V| x d. Directed proximity factorizations
/// carry a target-side matrix Yt, in which case Y holds the source side.
struct Embedding {
    int d = 0;
    DenseMatrix Y;
    std::optional<DenseMatrix> Yt;
    std::string method;
    std::map<std::string, double> params;
    std::vector<double> loss_trace;     // per-epoch full-batch loss, when trained
    std::vector<std::string> warnings;

    int n() const { return Y.rows(); }
    bool has_pair() const { return Yt.has_value(); }

    /// Enforces d < n and finiteness; throws numerical_error otherwise.
    void validate() const;
};

/// Text format: header "n d", then one line per node "id v1 ... vd",
/// values printed with 9 significant digits.
void save_embedding(const DenseMatrix& Y, std::ostream& out);
void save_embedding_file(const DenseMatrix& Y, const std::string& path);
DenseMatrix load_embedding(std::istream& in);
DenseMatrix load_embedding_file(const std::string& path);

/// Loss trace CSV: "epoch,loss" rows.
void save_loss_trace_file(const std::vector<double>& trace, const std::string& path);

}  // namespace gembed
