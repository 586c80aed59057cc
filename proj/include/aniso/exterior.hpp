#pragma once

#include <Eigen/Dense>

#include "aniso/kvector.hpp"
#include "aniso/linalg.hpp"

namespace aniso {

/// Default relative rank tolerance for floating-point subspace extraction.
inline constexpr double kRankTol = 1e-8;

/// Wedge of the columns of W (n x k). The coefficient at multi-index I is
/// the k x k minor of rows I.
template <typename S>
KVec<S> wedge_cols(const Mat<S>& w) {
    const int n = w.rows();
    KVec<S> acc(n, 0);
    acc[0] = S(1);
    for (int j = 0; j < w.cols(); ++j) {
        KVec<S> column(n, 1, w.col(j));
        acc = wedge(acc, column);
    }
    return acc;
}

KVector wedge_cols(const Eigen::MatrixXd& w);

/// Stacks the k x k identity on top of X ((n-k) x k) and wedges the columns.
/// The coefficient at {1..k} is always 1.
KVector wedge_M(const Eigen::MatrixXd& x);
KVectorQ wedge_M(const MatQ& x);

/// Orthonormal basis (columns) of asssp(xi) = { v : v ^ xi = 0 }. In float
/// mode the null space is cut at singular values <= tol * sigma_max.
Eigen::MatrixXd associated_space(const KVector& xi, double tol = kRankTol);

/// Exact basis (columns, not orthonormal) of asssp(xi).
MatQ associated_space(const KVectorQ& xi);

/// A k-vector is simple precisely when its associated space has dimension k.
bool is_simple(const KVector& xi, double tol = kRankTol);
bool is_simple(const KVectorQ& xi);

/// Factorization of a simple k-vector as a wedge of k orthogonal columns,
/// with scale and orientation absorbed into the first column.
Eigen::MatrixXd factor_simple(const KVector& xi, double tol = kRankTol);
MatQ factor_simple(const KVectorQ& xi);

/// Hodge dual of the wedge of the rows of F ((n-k) x n). Rank-deficient F
/// yields the zero vector with the flag set rather than an error.
struct HomKVector {
    KVector xi;
    bool rank_deficient = false;
};
HomKVector xi_from_hom(const Eigen::MatrixXd& f);

struct HomKVectorQ {
    KVectorQ xi;
    bool rank_deficient = false;
};
HomKVectorQ xi_from_hom(const MatQ& f);

/// A unit simple k-vector together with a frame whose columns wedge to it.
class OrientedPlane {
public:
    OrientedPlane() = default;

    /// Normalizes xi and factors it; throws if xi is not simple.
    static OrientedPlane from_kvector(const KVector& xi, double tol = kRankTol);

    /// Wedges the columns of w and normalizes.
    static OrientedPlane from_frame(const Eigen::MatrixXd& w);

    const KVector& kvector() const { return xi_; }
    const Eigen::MatrixXd& frame() const { return frame_; }
    int n() const { return xi_.n(); }
    int k() const { return xi_.grade(); }

private:
    OrientedPlane(KVector xi, Eigen::MatrixXd frame);
    KVector xi_;
    Eigen::MatrixXd frame_;
};

}  // namespace aniso
