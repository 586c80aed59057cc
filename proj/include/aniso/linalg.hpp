#pragma once

#include <optional>
#include <vector>

#include "aniso/kvector.hpp"

namespace aniso {

/// Dense row-major matrix over an exact or floating scalar. Used where the
/// computation must run generically over both modes (elimination, simplex,
/// wedge of columns); double-only paths use Eigen instead.
template <typename S>
class Mat {
public:
    Mat() = default;
    Mat(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, S(0)) {}

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = S(1);
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    S& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
    const S& operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

    std::vector<S> col(int j) const {
        std::vector<S> out(static_cast<std::size_t>(rows_));
        for (int i = 0; i < rows_; ++i) out[static_cast<std::size_t>(i)] = (*this)(i, j);
        return out;
    }

    void set_col(int j, const std::vector<S>& v) {
        for (int i = 0; i < rows_; ++i) (*this)(i, j) = v[static_cast<std::size_t>(i)];
    }

    Mat transposed() const {
        Mat t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    friend Mat operator*(const Mat& a, const Mat& b) {
        if (a.cols_ != b.rows_) throw Error("Mat: product shape mismatch");
        Mat c(a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int l = 0; l < a.cols_; ++l) {
                if (a(i, l) == S(0)) continue;
                for (int j = 0; j < b.cols_; ++j) c(i, j) += a(i, l) * b(l, j);
            }
        return c;
    }

    std::vector<S> apply(const std::vector<S>& x) const {
        if (static_cast<int>(x.size()) != cols_) throw Error("Mat: apply shape mismatch");
        std::vector<S> y(static_cast<std::size_t>(rows_), S(0));
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) y[static_cast<std::size_t>(i)] += (*this)(i, j) * x[static_cast<std::size_t>(j)];
        return y;
    }

    bool operator==(const Mat& o) const = default;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<S> data_;
};

using MatQ = Mat<Rational>;

/// Row-reduce A in place to row echelon form. For exact scalars any nonzero
/// pivot is taken; for doubles the largest-magnitude candidate. Returns the
/// rank; pivot column indices are appended to *pivots when given.
template <typename S>
int row_reduce(Mat<S>& a, std::vector<int>* pivots = nullptr, double tol = 0.0) {
    int rank = 0;
    const int rows = a.rows(), cols = a.cols();
    for (int col = 0; col < cols && rank < rows; ++col) {
        int best = -1;
        if constexpr (std::is_same_v<S, Rational>) {
            for (int i = rank; i < rows; ++i) {
                if (a(i, col) != S(0)) {
                    best = i;
                    break;
                }
            }
        } else {
            double best_mag = tol;
            for (int i = rank; i < rows; ++i) {
                double mag = std::fabs(a(i, col));
                if (mag > best_mag) {
                    best_mag = mag;
                    best = i;
                }
            }
        }
        if (best < 0) continue;
        if (best != rank) {
            for (int j = 0; j < cols; ++j) std::swap(a(best, j), a(rank, j));
        }
        S inv_pivot = S(1) / a(rank, col);
        for (int j = col; j < cols; ++j) a(rank, j) *= inv_pivot;
        for (int i = 0; i < rows; ++i) {
            if (i == rank) continue;
            S factor = a(i, col);
            if (factor == S(0)) continue;
            for (int j = col; j < cols; ++j) a(i, j) -= factor * a(rank, j);
        }
        if (pivots) pivots->push_back(col);
        ++rank;
    }
    return rank;
}

/// Basis of the null space of A, returned as columns. Exact for Rational;
/// for double the tolerance is an absolute pivot threshold.
template <typename S>
Mat<S> null_space_basis(const Mat<S>& a, double tol = 0.0) {
    Mat<S> r = a;
    std::vector<int> pivots;
    int rank = row_reduce(r, &pivots, tol);
    const int cols = a.cols();
    std::vector<bool> is_pivot(static_cast<std::size_t>(cols), false);
    for (int p : pivots) is_pivot[static_cast<std::size_t>(p)] = true;
    Mat<S> basis(cols, cols - rank);
    int out = 0;
    for (int freec = 0; freec < cols; ++freec) {
        if (is_pivot[static_cast<std::size_t>(freec)]) continue;
        basis(freec, out) = S(1);
        for (int prow = 0; prow < rank; ++prow) {
            basis(pivots[static_cast<std::size_t>(prow)], out) = -r(prow, freec);
        }
        ++out;
    }
    return basis;
}

/// Exact inverse via Gauss-Jordan; empty if singular.
template <typename S>
std::optional<Mat<S>> inverse(const Mat<S>& a, double tol = 0.0) {
    if (a.rows() != a.cols()) throw Error("inverse: matrix not square");
    const int n = a.rows();
    Mat<S> aug(n, 2 * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) aug(i, j) = a(i, j);
        aug(i, n + i) = S(1);
    }
    int rank = row_reduce(aug, nullptr, tol);
    if (rank < n) return std::nullopt;
    Mat<S> inv(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
    return inv;
}

/// Gram-Schmidt orthogonalization of the columns, without normalization, so
/// the result stays exact over Rational. Columns must be independent.
template <typename S>
Mat<S> orthogonalize_columns(const Mat<S>& a) {
    Mat<S> b = a;
    const int cols = a.cols(), rows = a.rows();
    for (int j = 0; j < cols; ++j) {
        for (int p = 0; p < j; ++p) {
            S dot(0), nsq(0);
            for (int i = 0; i < rows; ++i) {
                dot += b(i, j) * b(i, p);
                nsq += b(i, p) * b(i, p);
            }
            if (nsq == S(0)) throw Error("orthogonalize_columns: dependent columns");
            S factor = dot / nsq;
            for (int i = 0; i < rows; ++i) b(i, j) -= factor * b(i, p);
        }
    }
    return b;
}

MatQ to_rational(const Mat<double>& a);
Mat<double> to_float(const MatQ& a);

}  // namespace aniso
