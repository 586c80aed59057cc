#include "aniso/exterior.hpp"

#include <Eigen/SVD>

namespace aniso {

namespace {

Mat<double> from_eigen(const Eigen::MatrixXd& a) {
    Mat<double> m(static_cast<int>(a.rows()), static_cast<int>(a.cols()));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) m(i, j) = a(i, j);
    return m;
}

/// Matrix of the linear map v -> v ^ xi, with rows indexed by the grade-(k+1)
/// basis and columns by e_1..e_n. For k = n the target space is trivial.
template <typename S>
Mat<S> wedge_map_matrix(const KVec<S>& xi) {
    const int n = xi.n();
    const int k = xi.grade();
    Mat<S> a(static_cast<int>(binom(n, k + 1)), n);
    if (k + 1 > n) return a;  // zero rows: every vector annihilates xi
    const auto& rows_idx = multi_indices(n, k);
    for (int col = 0; col < n; ++col) {
        std::array<int, 1> e{col + 1};
        for (std::size_t p = 0; p < rows_idx.size(); ++p) {
            if (xi[p] == S(0)) continue;
            int sign = merge_sign(std::span<const int>(e), rows_idx[p]);
            if (sign == 0) continue;
            auto merged = merge_union(std::span<const int>(e), rows_idx[p]);
            int r = multi_index_rank(merged, n);
            if (sign > 0) {
                a(r, col) += xi[p];
            } else {
                a(r, col) -= xi[p];
            }
        }
    }
    return a;
}

}  // namespace

MatQ to_rational(const Mat<double>& a) {
    MatQ q(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) q(i, j) = rational_of(a(i, j));
    return q;
}

Mat<double> to_float(const MatQ& a) {
    Mat<double> m(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) m(i, j) = to_double(a(i, j));
    return m;
}

KVectorQ to_rational(const KVector& a) {
    std::vector<Rational> coeffs(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) coeffs[i] = rational_of(a[i]);
    return KVectorQ(a.n(), a.grade(), std::move(coeffs));
}

KVector to_float(const KVectorQ& a) {
    std::vector<double> coeffs(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) coeffs[i] = to_double(a[i]);
    return KVector(a.n(), a.grade(), std::move(coeffs));
}

KVector wedge_cols(const Eigen::MatrixXd& w) { return wedge_cols(from_eigen(w)); }

KVector wedge_M(const Eigen::MatrixXd& x) {
    const int k = static_cast<int>(x.cols());
    const int n = k + static_cast<int>(x.rows());
    Eigen::MatrixXd m(n, k);
    m.topRows(k) = Eigen::MatrixXd::Identity(k, k);
    m.bottomRows(x.rows()) = x;
    return wedge_cols(m);
}

KVectorQ wedge_M(const MatQ& x) {
    const int k = x.cols();
    const int n = k + x.rows();
    MatQ m(n, k);
    for (int j = 0; j < k; ++j) m(j, j) = Rational(1);
    for (int i = 0; i < x.rows(); ++i)
        for (int j = 0; j < k; ++j) m(k + i, j) = x(i, j);
    return wedge_cols(m);
}

Eigen::MatrixXd associated_space(const KVector& xi, double tol) {
    if (xi.is_zero()) throw Error("associated_space: zero k-vector");
    const int n = xi.n();
    if (xi.grade() == n) return Eigen::MatrixXd::Identity(n, n);
    Mat<double> a = wedge_map_matrix(xi);
    Eigen::MatrixXd ae(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) ae(i, j) = a(i, j);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(ae, Eigen::ComputeFullV);
    const auto& sigma = svd.singularValues();
    double cutoff = (sigma.size() > 0 ? sigma(0) : 0.0) * tol;
    int rank = 0;
    for (int i = 0; i < sigma.size(); ++i) {
        if (sigma(i) > cutoff) ++rank;
    }
    return svd.matrixV().rightCols(n - rank);
}

MatQ associated_space(const KVectorQ& xi) {
    if (xi.is_zero()) throw Error("associated_space: zero k-vector");
    const int n = xi.n();
    if (xi.grade() == n) return MatQ::identity(n);
    MatQ a = wedge_map_matrix(xi);
    return null_space_basis(a);
}

bool is_simple(const KVector& xi, double tol) {
    return associated_space(xi, tol).cols() == xi.grade();
}

bool is_simple(const KVectorQ& xi) { return associated_space(xi).cols() == xi.grade(); }

Eigen::MatrixXd factor_simple(const KVector& xi, double tol) {
    Eigen::MatrixXd basis = associated_space(xi, tol);
    if (basis.cols() != xi.grade()) throw Error("factor_simple: k-vector is not simple");
    KVector w = wedge_cols(basis);
    // Columns are orthonormal, so |w| = 1 and xi = inner(xi, w) * w.
    double c = inner(xi, w);
    double drift = norm(xi - c * w);
    if (drift > tol * std::max(1.0, norm(xi))) {
        throw Error("factor_simple: residual exceeds tolerance; input not simple enough");
    }
    basis.col(0) *= c;
    return basis;
}

MatQ factor_simple(const KVectorQ& xi) {
    MatQ basis = associated_space(xi);
    if (basis.cols() != xi.grade()) throw Error("factor_simple: k-vector is not simple");
    MatQ ortho = orthogonalize_columns(basis);
    KVectorQ w = wedge_cols(ortho);
    Rational wsq = norm_squared(w);
    if (wsq == Rational(0)) throw Error("factor_simple: degenerate basis");
    Rational c = inner(xi, w) / wsq;
    KVectorQ recheck = w * c;
    if (!(recheck == xi)) throw Error("factor_simple: exact factorization failed");
    for (int i = 0; i < ortho.rows(); ++i) ortho(i, 0) *= c;
    return ortho;
}

HomKVector xi_from_hom(const Eigen::MatrixXd& f) {
    const int n = static_cast<int>(f.cols());
    const int q = static_cast<int>(f.rows());
    Mat<double> rows_t(n, q);
    for (int i = 0; i < q; ++i)
        for (int j = 0; j < n; ++j) rows_t(j, i) = f(i, j);
    KVector z = wedge_cols(rows_t);
    bool deficient = norm(z) <= 1e-14 * std::max(1.0, f.norm());
    if (deficient) {
        return {KVector(n, n - q), true};
    }
    return {hodge_star(z), false};
}

HomKVectorQ xi_from_hom(const MatQ& f) {
    KVectorQ z = wedge_cols(f.transposed());
    if (z.is_zero()) {
        return {KVectorQ(f.cols(), f.cols() - f.rows()), true};
    }
    return {hodge_star(z), false};
}

OrientedPlane::OrientedPlane(KVector xi, Eigen::MatrixXd frame)
    : xi_(std::move(xi)), frame_(std::move(frame)) {
    double nrm = norm(xi_);
    if (std::fabs(nrm - 1.0) > 1e-10) throw Error("OrientedPlane: k-vector is not unit");
    KVector rewedge = wedge_cols(frame_);
    if (norm(rewedge - xi_) > 1e-10) throw Error("OrientedPlane: frame does not wedge to k-vector");
}

OrientedPlane OrientedPlane::from_kvector(const KVector& xi, double tol) {
    KVector unit = normalized(xi);
    Eigen::MatrixXd frame = factor_simple(unit, tol);
    return OrientedPlane(std::move(unit), std::move(frame));
}

OrientedPlane OrientedPlane::from_frame(const Eigen::MatrixXd& w) {
    KVector xi = wedge_cols(w);
    double t = norm(xi);
    if (t < 1e-14) throw Error("OrientedPlane: degenerate frame");
    Eigen::MatrixXd frame = w;
    frame.col(0) /= t;
    return OrientedPlane(xi * (1.0 / t), std::move(frame));
}

}  // namespace aniso
