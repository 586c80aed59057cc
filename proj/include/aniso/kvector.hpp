#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "aniso/combinatorics.hpp"
#include "aniso/rational.hpp"

namespace aniso {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {
template <typename S>
inline S scalar_abs(const S& x) {
    if constexpr (std::is_same_v<S, Rational>) {
        return rat_abs(x);
    } else {
        return std::fabs(x);
    }
}
template <typename S>
inline double scalar_to_double(const S& x) {
    if constexpr (std::is_same_v<S, Rational>) {
        return to_double(x);
    } else {
        return x;
    }
}
}  // namespace detail

/// Element of the k-th exterior power of R^n, stored as the coefficient
/// vector over the lexicographically ordered multi-index basis. The scalar
/// type is either double or Rational; the two modes never mix.
template <typename S>
class KVec {
public:
    KVec() = default;

    KVec(int n, int k) : n_(n), k_(k), coeffs_(binom(n, k), S(0)) {
        if (n < 0 || k < 0 || k > n) throw Error("KVec: invalid (n,k)");
    }

    KVec(int n, int k, std::vector<S> coeffs) : n_(n), k_(k), coeffs_(std::move(coeffs)) {
        if (n < 0 || k < 0 || k > n) throw Error("KVec: invalid (n,k)");
        if (coeffs_.size() != binom(n, k)) throw Error("KVec: coefficient count mismatch");
    }

    /// Grade-1 basis vector e_i (1-based).
    static KVec basis_vector(int n, int i) {
        KVec v(n, 1);
        if (i < 1 || i > n) throw Error("KVec: basis index out of range");
        v.coeffs_[static_cast<std::size_t>(i - 1)] = S(1);
        return v;
    }

    /// Basis atom e_I for a sorted 1-based multi-index I.
    static KVec basis_atom(int n, std::span<const int> indices) {
        KVec v(n, static_cast<int>(indices.size()));
        v.coeffs_[static_cast<std::size_t>(multi_index_rank(indices, n))] = S(1);
        return v;
    }

    int n() const { return n_; }
    int grade() const { return k_; }
    std::size_t size() const { return coeffs_.size(); }
    const std::vector<S>& coeffs() const { return coeffs_; }
    std::vector<S>& coeffs() { return coeffs_; }
    const S& operator[](std::size_t i) const { return coeffs_[i]; }
    S& operator[](std::size_t i) { return coeffs_[i]; }

    bool is_zero() const {
        for (const S& c : coeffs_) {
            if (c != S(0)) return false;
        }
        return true;
    }

    KVec& operator+=(const KVec& o) {
        check_same_shape(o);
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
        return *this;
    }
    KVec& operator-=(const KVec& o) {
        check_same_shape(o);
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
        return *this;
    }
    KVec& operator*=(const S& s) {
        for (S& c : coeffs_) c *= s;
        return *this;
    }

    friend KVec operator+(KVec a, const KVec& b) { return a += b; }
    friend KVec operator-(KVec a, const KVec& b) { return a -= b; }
    friend KVec operator*(KVec a, const S& s) { return a *= s; }
    friend KVec operator*(const S& s, KVec a) { return a *= s; }
    friend KVec operator-(KVec a) {
        for (S& c : a.coeffs_) c = -c;
        return a;
    }

    bool operator==(const KVec& o) const {
        return n_ == o.n_ && k_ == o.k_ && coeffs_ == o.coeffs_;
    }

    void check_same_shape(const KVec& o) const {
        if (n_ != o.n_ || k_ != o.k_) throw Error("KVec: shape mismatch");
    }

private:
    int n_ = 0;
    int k_ = 0;
    std::vector<S> coeffs_;
};

using KVector = KVec<double>;
using KVectorQ = KVec<Rational>;

/// Exterior product. Bilinear, associative, graded-anticommutative.
template <typename S>
KVec<S> wedge(const KVec<S>& a, const KVec<S>& b) {
    if (a.n() != b.n()) throw Error("wedge: dimension mismatch");
    const int n = a.n();
    const int j = a.grade(), l = b.grade();
    if (j + l > n) throw Error("wedge: grade overflow (j+l > n)");
    KVec<S> out(n, j + l);
    const auto& ia = multi_indices(n, j);
    const auto& ib = multi_indices(n, l);
    for (std::size_t p = 0; p < ia.size(); ++p) {
        if (a[p] == S(0)) continue;
        for (std::size_t q = 0; q < ib.size(); ++q) {
            if (b[q] == S(0)) continue;
            int sign = merge_sign(ia[p], ib[q]);
            if (sign == 0) continue;
            auto merged = merge_union(ia[p], ib[q]);
            std::size_t r = static_cast<std::size_t>(multi_index_rank(merged, n));
            if (sign > 0) {
                out[r] += a[p] * b[q];
            } else {
                out[r] -= a[p] * b[q];
            }
        }
    }
    return out;
}

/// Euclidean pairing of coefficient vectors (the multi-index basis is
/// orthonormal).
template <typename S>
S inner(const KVec<S>& a, const KVec<S>& b) {
    if (a.n() != b.n() || a.grade() != b.grade()) throw Error("inner: shape mismatch");
    S acc(0);
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

template <typename S>
S norm_squared(const KVec<S>& a) {
    return inner(a, a);
}

inline double norm(const KVector& a) { return std::sqrt(norm_squared(a)); }

inline double norm(const KVectorQ& a) { return std::sqrt(to_double(norm_squared(a))); }

inline KVector normalized(const KVector& a) {
    double t = norm(a);
    if (t == 0.0) throw Error("normalized: zero vector");
    return a * (1.0 / t);
}

/// Hodge star on any grade, for the standard orientation e_1^...^e_n:
/// star(e_J) = sign(J, J^c) e_{J^c}. For grade-q input z this is the unique
/// linear map with inner(xi, star(z)) equal to the top coefficient of
/// z ^ xi over all grade-(n-q) xi, and star(star(z)) = (-1)^{q(n-q)} z.
template <typename S>
KVec<S> hodge_star(const KVec<S>& z) {
    const int n = z.n();
    const int q = z.grade();
    KVec<S> out(n, n - q);
    const auto& idx = multi_indices(n, q);
    for (std::size_t p = 0; p < idx.size(); ++p) {
        if (z[p] == S(0)) continue;
        auto comp = complement(idx[p], n);
        int sign = complement_sign(idx[p]);
        std::size_t r = static_cast<std::size_t>(multi_index_rank(comp, n));
        if (sign > 0) {
            out[r] += z[p];
        } else {
            out[r] -= z[p];
        }
    }
    return out;
}

/// Exact rational lift of a float k-vector (coefficients are dyadic).
KVectorQ to_rational(const KVector& a);

/// Nearest-double view of a rational k-vector.
KVector to_float(const KVectorQ& a);

}  // namespace aniso
