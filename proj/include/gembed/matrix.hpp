#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gembed {

/// Row-major dense matrix of doubles. Deliberately minimal: the toolkit only
/// needs storage, products and norms at desk scale.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& at(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
    double at(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

    std::span<double> row(int i) { return {data_.data() + static_cast<std::size_t>(i) * cols_, static_cast<std::size_t>(cols_)}; }
    std::span<const double> row(int i) const { return {data_.data() + static_cast<std::size_t>(i) * cols_, static_cast<std::size_t>(cols_)}; }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    double frobenius_sq() const;
    double max_abs() const;
    DenseMatrix transposed() const;

    /// this * B
    DenseMatrix multiply(const DenseMatrix& B) const;
    /// this^T * B
    DenseMatrix transpose_multiply(const DenseMatrix& B) const;

    void matvec(std::span<const double> x, std::span<double> y) const;
    void matvec_transpose(std::span<const double> x, std::span<double> y) const;

    bool all_finite() const;

private:
    int rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

/// Compressed sparse row matrix. Column indices are sorted within each row
/// and explicit zeros are dropped at construction.
class SparseMatrix {
public:
    SparseMatrix() = default;

    struct Triplet {
        int row, col;
        double value;
    };

    /// Duplicate (row, col) entries are summed; resulting exact zeros dropped.
    static SparseMatrix from_triplets(int rows, int cols, std::vector<Triplet> entries);
    static SparseMatrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::size_t nnz() const { return values_.size(); }

    const std::vector<std::size_t>& row_offsets() const { return offsets_; }
    const std::vector<int>& col_indices() const { return cols_idx_; }
    const std::vector<double>& values() const { return values_; }

    std::span<const int> row_cols(int i) const {
        return {cols_idx_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
    }
    std::span<const double> row_values(int i) const {
        return {values_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
    }

    /// Entry lookup by binary search; absent entries are 0.
    double coeff(int i, int j) const;

    SparseMatrix transposed() const;
    SparseMatrix multiply(const SparseMatrix& B) const;
    DenseMatrix multiply_dense(const DenseMatrix& B) const;
    DenseMatrix to_dense() const;

    /// Max absolute column sum.
    double norm_1() const;
    double max_abs() const;

    /// Spot-check A == A^T on up to `samples` stored entries.
    bool is_symmetric_sampled(int samples = 200, double tol = 1e-12) const;

private:
    int rows_ = 0, cols_ = 0;
    std::vector<std::size_t> offsets_;
    std::vector<int> cols_idx_;
    std::vector<double> values_;
};

/// y = A x. Throws std::invalid_argument on dimension mismatch.
std::vector<double> spmv(const SparseMatrix& A, std::span<const double> x);
void spmv(const SparseMatrix& A, std::span<const double> x, std::span<double> y);

}  // namespace gembed
