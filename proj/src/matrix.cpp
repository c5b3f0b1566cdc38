#include "gembed/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gembed/rng.hpp"

namespace gembed {

double DenseMatrix::frobenius_sq() const {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return s;
}

double DenseMatrix::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::fabs(v));
    return m;
}

DenseMatrix DenseMatrix::transposed() const {
    DenseMatrix T(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) T.at(j, i) = at(i, j);
    return T;
}

DenseMatrix DenseMatrix::multiply(const DenseMatrix& B) const {
    if (cols_ != B.rows_) throw std::invalid_argument("DenseMatrix::multiply: dimension mismatch");
    DenseMatrix C(rows_, B.cols_);
    for (int i = 0; i < rows_; ++i) {
        const double* a = data_.data() + static_cast<std::size_t>(i) * cols_;
        double* c = C.data_.data() + static_cast<std::size_t>(i) * B.cols_;
        for (int k = 0; k < cols_; ++k) {
            double aik = a[k];
            if (aik == 0.0) continue;
            const double* b = B.data_.data() + static_cast<std::size_t>(k) * B.cols_;
            for (int j = 0; j < B.cols_; ++j) c[j] += aik * b[j];
        }
    }
    return C;
}

DenseMatrix DenseMatrix::transpose_multiply(const DenseMatrix& B) const {
    if (rows_ != B.rows_) throw std::invalid_argument("DenseMatrix::transpose_multiply: dimension mismatch");
    DenseMatrix C(cols_, B.cols_);
    for (int k = 0; k < rows_; ++k) {
        const double* a = data_.data() + static_cast<std::size_t>(k) * cols_;
        const double* b = B.data_.data() + static_cast<std::size_t>(k) * B.cols_;
        for (int i = 0; i < cols_; ++i) {
            double aki = a[i];
            if (aki == 0.0) continue;
            double* c = C.data_.data() + static_cast<std::size_t>(i) * B.cols_;
            for (int j = 0; j < B.cols_; ++j) c[j] += aki * b[j];
        }
    }
    return C;
}

void DenseMatrix::matvec(std::span<const double> x, std::span<double> y) const {
    if (static_cast<int>(x.size()) != cols_ || static_cast<int>(y.size()) != rows_)
        throw std::invalid_argument("DenseMatrix::matvec: dimension mismatch");
    for (int i = 0; i < rows_; ++i) {
        const double* a = data_.data() + static_cast<std::size_t>(i) * cols_;
        double s = 0.0;
        for (int j = 0; j < cols_; ++j) s += a[j] * x[j];
        y[i] = s;
    }
}

void DenseMatrix::matvec_transpose(std::span<const double> x, std::span<double> y) const {
    if (static_cast<int>(x.size()) != rows_ || static_cast<int>(y.size()) != cols_)
        throw std::invalid_argument("DenseMatrix::matvec_transpose: dimension mismatch");
    std::fill(y.begin(), y.end(), 0.0);
    for (int i = 0; i < rows_; ++i) {
        const double* a = data_.data() + static_cast<std::size_t>(i) * cols_;
        double xi = x[i];
        if (xi == 0.0) continue;
        for (int j = 0; j < cols_; ++j) y[j] += a[j] * xi;
    }
}

bool DenseMatrix::all_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

SparseMatrix SparseMatrix::from_triplets(int rows, int cols, std::vector<Triplet> entries) {
    for (const auto& t : entries) {
        if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
            throw std::invalid_argument("SparseMatrix::from_triplets: index out of range");
    }
    std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    SparseMatrix A;
    A.rows_ = rows;
    A.cols_ = cols;
    A.offsets_.assign(static_cast<std::size_t>(rows) + 1, 0);
    A.cols_idx_.reserve(entries.size());
    A.values_.reserve(entries.size());

    std::size_t i = 0;
    for (int r = 0; r < rows; ++r) {
        while (i < entries.size() && entries[i].row == r) {
            int c = entries[i].col;
            double v = 0.0;
            while (i < entries.size() && entries[i].row == r && entries[i].col == c)
                v += entries[i++].value;
            if (v != 0.0) {
                A.cols_idx_.push_back(c);
                A.values_.push_back(v);
            }
        }
        A.offsets_[r + 1] = A.values_.size();
    }
    return A;
}

SparseMatrix SparseMatrix::identity(int n) {
    std::vector<Triplet> t;
    t.reserve(n);
    for (int i = 0; i < n; ++i) t.push_back({i, i, 1.0});
    return from_triplets(n, n, std::move(t));
}

double SparseMatrix::coeff(int i, int j) const {
    auto cols = row_cols(i);
    auto it = std::lower_bound(cols.begin(), cols.end(), j);
    if (it == cols.end() || *it != j) return 0.0;
    return values_[offsets_[i] + static_cast<std::size_t>(it - cols.begin())];
}

SparseMatrix SparseMatrix::transposed() const {
    std::vector<std::size_t> count(static_cast<std::size_t>(cols_) + 1, 0);
    for (int c : cols_idx_) ++count[c + 1];
    for (int c = 0; c < cols_; ++c) count[c + 1] += count[c];

    SparseMatrix T;
    T.rows_ = cols_;
    T.cols_ = rows_;
    T.offsets_ = count;
    T.cols_idx_.resize(nnz());
    T.values_.resize(nnz());
    std::vector<std::size_t> cursor(count.begin(), count.end() - 1);
    for (int r = 0; r < rows_; ++r) {
        for (std::size_t k = offsets_[r]; k < offsets_[r + 1]; ++k) {
            std::size_t pos = cursor[cols_idx_[k]]++;
            T.cols_idx_[pos] = r;
            T.values_[pos] = values_[k];
        }
    }
    return T;
}

SparseMatrix SparseMatrix::multiply(const SparseMatrix& B) const {
    if (cols_ != B.rows_) throw std::invalid_argument("SparseMatrix::multiply: dimension mismatch");
    // Row-by-row SpGEMM with a dense accumulator.
    std::vector<double> acc(B.cols_, 0.0);
    std::vector<int> touched;
    std::vector<Triplet> out;
    for (int i = 0; i < rows_; ++i) {
        touched.clear();
        for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) {
            int m = cols_idx_[k];
            double v = values_[k];
            for (std::size_t l = B.offsets_[m]; l < B.offsets_[m + 1]; ++l) {
                int j = B.cols_idx_[l];
                if (acc[j] == 0.0) touched.push_back(j);
                acc[j] += v * B.values_[l];
            }
        }
        for (int j : touched) {
            if (acc[j] != 0.0) out.push_back({i, j, acc[j]});
            acc[j] = 0.0;
        }
    }
    return from_triplets(rows_, B.cols_, std::move(out));
}

DenseMatrix SparseMatrix::multiply_dense(const DenseMatrix& B) const {
    if (cols_ != B.rows()) throw std::invalid_argument("SparseMatrix::multiply_dense: dimension mismatch");
    DenseMatrix C(rows_, B.cols());
    for (int i = 0; i < rows_; ++i) {
        auto c = C.row(i);
        for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) {
            double v = values_[k];
            auto b = B.row(cols_idx_[k]);
            for (int j = 0; j < B.cols(); ++j) c[j] += v * b[j];
        }
    }
    return C;
}

DenseMatrix SparseMatrix::to_dense() const {
    DenseMatrix D(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k)
            D.at(i, cols_idx_[k]) = values_[k];
    return D;
}

double SparseMatrix::norm_1() const {
    std::vector<double> colsum(cols_, 0.0);
    for (std::size_t k = 0; k < values_.size(); ++k)
        colsum[cols_idx_[k]] += std::fabs(values_[k]);
    double m = 0.0;
    for (double v : colsum) m = std::max(m, v);
    return m;
}

double SparseMatrix::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::fabs(v));
    return m;
}

bool SparseMatrix::is_symmetric_sampled(int samples, double tol) const {
    if (rows_ != cols_) return false;
    if (values_.empty()) return true;
    Rng rng(0x5eed5eedULL);
    int checks = std::min<std::size_t>(samples, values_.size());
    for (int s = 0; s < checks; ++s) {
        std::size_t k = static_cast<std::size_t>(rng.bounded(values_.size()));
        auto row_it = std::upper_bound(offsets_.begin(), offsets_.end(), k);
        int i = static_cast<int>(row_it - offsets_.begin()) - 1;
        int j = cols_idx_[k];
        double scale = std::max(1.0, std::fabs(values_[k]));
        if (std::fabs(values_[k] - coeff(j, i)) > tol * scale) return false;
    }
    return true;
}

void spmv(const SparseMatrix& A, std::span<const double> x, std::span<double> y) {
    if (static_cast<int>(x.size()) != A.cols() || static_cast<int>(y.size()) != A.rows())
        throw std::invalid_argument("spmv: dimension mismatch");
    const auto& off = A.row_offsets();
    const auto& idx = A.col_indices();
    const auto& val = A.values();
    for (int i = 0; i < A.rows(); ++i) {
        double s = 0.0;
        for (std::size_t k = off[i]; k < off[i + 1]; ++k) s += val[k] * x[idx[k]];
        y[i] = s;
    }
}

std::vector<double> spmv(const SparseMatrix& A, std::span<const double> x) {
    std::vector<double> y(A.rows());
    spmv(A, x, y);
    return y;
}

}  // namespace gembed
