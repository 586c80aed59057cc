#pragma once

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "aniso/kvector.hpp"

namespace aniso {

/// Positively homogeneous, non-negative, continuous density on rays of the
/// Grassmannian. The stored evaluator sees unit vectors only; the call
/// operator applies the homogeneous extension Psi(xi) = |xi| Psi(xi/|xi|).
class GeometricIntegrand {
public:
    using UnitEval = std::function<double(const KVector&)>;

    GeometricIntegrand(int n, int k, std::string name, UnitEval unit_eval, bool is_even = true,
                       std::optional<double> claimed_lipschitz = std::nullopt)
        : n_(n),
          k_(k),
          name_(std::move(name)),
          unit_eval_(std::move(unit_eval)),
          is_even_(is_even),
          claimed_lipschitz_(claimed_lipschitz) {}

    int n() const { return n_; }
    int k() const { return k_; }
    const std::string& name() const { return name_; }
    bool is_even() const { return is_even_; }
    std::optional<double> claimed_lipschitz() const { return claimed_lipschitz_; }

    /// Homogeneous extension; 0 at the origin. Throws if the evaluator
    /// produces a negative value.
    double operator()(const KVector& xi) const;

    /// Copy with a user-supplied Lipschitz claim attached. Claims are
    /// validated by sampled difference quotients, never computed exactly.
    GeometricIntegrand with_claimed_lipschitz(double bound) const {
        GeometricIntegrand copy = *this;
        copy.claimed_lipschitz_ = bound;
        return copy;
    }

private:
    int n_;
    int k_;
    std::string name_;
    UnitEval unit_eval_;
    bool is_even_;
    std::optional<double> claimed_lipschitz_;
};

/// The area (mass) integrand Psi = |.|.
GeometricIntegrand make_area(int n, int k);

/// Psi_A(xi) = sqrt(xi' A xi) for symmetric positive definite A on the
/// C(n,k)-dimensional coefficient space. Throws if A is not SPD.
GeometricIntegrand make_ellipse_norm(int n, int k, const Eigen::MatrixXd& a);

/// Psi(xi) = |xi| (1 + eps * inner(xi/|xi|, eta_star)^2).
GeometricIntegrand make_perturbed_area(int n, int k, const KVector& eta_star, double eps);

/// Nearest-sample lookup with homogeneous extension. Samples are
/// (k-vector, value) pairs; each is normalized on ingestion.
GeometricIntegrand make_tabulated(int n, int k,
                                  const std::vector<std::pair<KVector, double>>& samples);

/// Classical integrand psi(X) = Psi(wedge_M(X)) for X in R^((n-k) x k).
class ClassicalIntegrand {
public:
    explicit ClassicalIntegrand(GeometricIntegrand psi) : psi_(std::move(psi)) {}

    const GeometricIntegrand& underlying() const { return psi_; }
    double operator()(const Eigen::MatrixXd& x) const;

private:
    GeometricIntegrand psi_;
};

/// Permutation-symmetric energy density on Q-tuples of gradients,
/// psi_bar_Q(X_1..X_Q) = sum_i psi(X_i).
class QIntegrand {
public:
    QIntegrand(int q, ClassicalIntegrand base) : q_(q), base_(std::move(base)) {
        if (q < 1) throw Error("QIntegrand: Q must be positive");
    }

    int q() const { return q_; }
    const ClassicalIntegrand& base() const { return base_; }
    double operator()(std::span<const Eigen::MatrixXd> sheets) const;

private:
    int q_;
    ClassicalIntegrand base_;
};

/// Validates a claimed Lipschitz bound by sampled difference quotients on
/// random unit pairs; returns the largest quotient observed.
double sampled_lipschitz_quotient(const GeometricIntegrand& psi, int pairs, std::uint64_t seed);

}  // namespace aniso
