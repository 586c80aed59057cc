// Test-only oracles, deliberately independent of the library code paths they
// cross-check: direct determinant expansions, factorial enumeration, and a
// brute-force support-enumeration LP.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "aniso/kvector.hpp"

namespace oracles {

/// Coefficients of a ^ b ^ c for grade-1 inputs, by direct 3x3 determinant
/// expansion over ordered index triples.
inline aniso::KVector triple_wedge(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                                   const Eigen::VectorXd& c) {
    const int n = static_cast<int>(a.size());
    aniso::KVector out(n, 3);
    const auto& idx = aniso::multi_indices(n, 3);
    for (std::size_t r = 0; r < idx.size(); ++r) {
        int i = idx[r][0] - 1, j = idx[r][1] - 1, l = idx[r][2] - 1;
        Eigen::Matrix3d m;
        m << a(i), b(i), c(i), a(j), b(j), c(j), a(l), b(l), c(l);
        out[r] = m.determinant();
    }
    return out;
}

/// Coefficients of the wedge of two columns by direct 2x2 minors.
inline aniso::KVector two_column_minors(const Eigen::MatrixXd& w) {
    const int n = static_cast<int>(w.rows());
    aniso::KVector out(n, 2);
    const auto& idx = aniso::multi_indices(n, 2);
    for (std::size_t r = 0; r < idx.size(); ++r) {
        int i = idx[r][0] - 1, j = idx[r][1] - 1;
        out[r] = w(i, 0) * w(j, 1) - w(j, 0) * w(i, 1);
    }
    return out;
}

/// Minimum of sum_i |p_i - s_perm(i)|^2 over all permutations.
inline double assignment_by_enumeration(const std::vector<Eigen::VectorXd>& p,
                                        const std::vector<Eigen::VectorXd>& s) {
    std::vector<int> perm(p.size());
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        double total = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            total += (p[i] - s[static_cast<std::size_t>(perm[i])]).squaredNorm();
        }
        best = std::min(best, total);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

/// Brute-force equality-constrained LP min c'x, Ax = b, x >= 0 for small atom
/// sets: enumerate supports up to size rank(A), solve least squares on each,
/// keep feasible solutions.
inline std::optional<double> lp_by_enumeration(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                                               const Eigen::VectorXd& cost) {
    const int cols = static_cast<int>(a.cols());
    const int max_support = static_cast<int>(a.rows());
    std::optional<double> best;
    std::vector<int> support;
    auto consider = [&]() {
        Eigen::MatrixXd sub(a.rows(), static_cast<Eigen::Index>(support.size()));
        for (std::size_t j = 0; j < support.size(); ++j) sub.col(static_cast<Eigen::Index>(j)) = a.col(support[j]);
        Eigen::VectorXd x = sub.colPivHouseholderQr().solve(b);
        if ((sub * x - b).norm() > 1e-9) return;
        for (int j = 0; j < x.size(); ++j) {
            if (x(j) < -1e-10) return;
        }
        double value = 0.0;
        for (std::size_t j = 0; j < support.size(); ++j) value += cost(support[j]) * x(static_cast<Eigen::Index>(j));
        if (!best || value < *best) best = value;
    };
    std::function<void(int)> recurse = [&](int start) {
        if (!support.empty()) consider();
        if (static_cast<int>(support.size()) == max_support) return;
        for (int j = start; j < cols; ++j) {
            support.push_back(j);
            recurse(j + 1);
            support.pop_back();
        }
    };
    recurse(0);
    return best;
}

}  // namespace oracles
