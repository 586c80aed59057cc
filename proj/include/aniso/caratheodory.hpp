#pragma once

#include <vector>

#include "aniso/linalg.hpp"

namespace aniso {

/// Positive combination of vectors in R^M: sum_i weights[i] * atoms[i].
template <typename S>
struct ConicCombination {
    std::vector<std::vector<S>> atoms;
    std::vector<S> weights;
};

/// Rewrites target = sum_i w_i x_i (w_i > 0) using at most M atoms, by
/// iterated null-space pivoting: find a null combination of the active
/// atoms, drive one weight to zero, drop it, repeat until the atoms are
/// linearly independent. Exact over Rational; tolerance-checked over double.
template <typename S>
ConicCombination<S> caratheodory_reduce(ConicCombination<S> comb, const std::vector<S>& target,
                                        double float_tol = 1e-10) {
    const std::size_t dim = target.size();
    if (comb.atoms.size() != comb.weights.size()) throw Error("caratheodory_reduce: size mismatch");
    for (const auto& atom : comb.atoms) {
        if (atom.size() != dim) throw Error("caratheodory_reduce: atom dimension mismatch");
    }

    auto residual_ok = [&]() {
        std::vector<S> acc(dim, S(0));
        for (std::size_t i = 0; i < comb.atoms.size(); ++i) {
            for (std::size_t j = 0; j < dim; ++j) acc[j] += comb.weights[i] * comb.atoms[i][j];
        }
        if constexpr (std::is_same_v<S, Rational>) {
            for (std::size_t j = 0; j < dim; ++j) {
                if (acc[j] != target[j]) return false;
            }
            return true;
        } else {
            S err(0), scale(1);
            for (std::size_t j = 0; j < dim; ++j) {
                err = std::max(err, detail::scalar_abs(acc[j] - target[j]));
                scale = std::max(scale, detail::scalar_abs(target[j]));
            }
            return err <= float_tol * scale;
        }
    };
    if (!residual_ok()) throw Error("caratheodory_reduce: weights do not reproduce the target");

    const double null_tol = std::is_same_v<S, Rational> ? 0.0 : 1e-12;
    while (true) {
        const int count = static_cast<int>(comb.atoms.size());
        if (count <= 1) break;
        Mat<S> a(static_cast<int>(dim), count);
        for (int j = 0; j < count; ++j) {
            for (std::size_t i = 0; i < dim; ++i) a(static_cast<int>(i), j) = comb.atoms[static_cast<std::size_t>(j)][i];
        }
        Mat<S> kernel = null_space_basis(a, null_tol);
        if (kernel.cols() == 0) break;  // atoms independent: at most M remain
        std::vector<S> null_comb = kernel.col(0);
        // Ensure some strictly positive coefficient so a weight can reach zero.
        bool has_positive = false;
        for (const S& v : null_comb) {
            if (v > S(0)) {
                has_positive = true;
                break;
            }
        }
        if (!has_positive) {
            for (S& v : null_comb) v = -v;
        }
        int drop = -1;
        S best_ratio(0);
        for (int j = 0; j < count; ++j) {
            const S& cj = null_comb[static_cast<std::size_t>(j)];
            if (cj > S(0)) {
                S ratio = comb.weights[static_cast<std::size_t>(j)] / cj;
                if (drop < 0 || ratio < best_ratio) {
                    drop = j;
                    best_ratio = ratio;
                }
            }
        }
        for (int j = 0; j < count; ++j) {
            comb.weights[static_cast<std::size_t>(j)] -= best_ratio * null_comb[static_cast<std::size_t>(j)];
        }
        comb.weights[static_cast<std::size_t>(drop)] = S(0);
        ConicCombination<S> kept;
        const S weight_floor = std::is_same_v<S, Rational> ? S(0) : S(1e-14);
        for (int j = 0; j < count; ++j) {
            if (comb.weights[static_cast<std::size_t>(j)] > weight_floor) {
                kept.atoms.push_back(std::move(comb.atoms[static_cast<std::size_t>(j)]));
                kept.weights.push_back(comb.weights[static_cast<std::size_t>(j)]);
            }
        }
        comb = std::move(kept);
    }
    if (!residual_ok()) throw Error("caratheodory_reduce: reduction lost the target");
    return comb;
}

}  // namespace aniso
