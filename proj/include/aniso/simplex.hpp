#pragma once

#include <vector>

#include "aniso/linalg.hpp"

namespace aniso {

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

template <typename S>
struct LpSolution {
    LpStatus status = LpStatus::iteration_limit;
    std::vector<S> x;       // basic feasible solution (the optimum when bounded)
    std::vector<S> ray;     // for unbounded: x + t * ray feasible with cost -> -inf
    S objective = S(0);
    long iterations = 0;
    int basis_size = 0;  // number of structural basic variables at the optimum
};

namespace detail {
template <typename S>
constexpr S lp_eps() {
    if constexpr (std::is_same_v<S, Rational>) {
        return S(0);
    } else {
        return S(1e-12);
    }
}
}  // namespace detail

/// Primal simplex with Bland's anti-cycling rule on a dense tableau:
/// minimize c'x subject to Ax = b, x >= 0. Two phases; deterministic.
/// Runs exactly over Rational and with absolute tolerances over double.
template <typename S>
LpSolution<S> simplex_min(const Mat<S>& a_in, std::vector<S> b, const std::vector<S>& c,
                          long max_iterations = 100000) {
    const int m = a_in.rows();
    const int n = a_in.cols();
    if (static_cast<int>(b.size()) != m || static_cast<int>(c.size()) != n) {
        throw Error("simplex_min: shape mismatch");
    }
    const S eps = detail::lp_eps<S>();

    // Tableau: m constraint rows over n structural + m artificial columns + rhs.
    Mat<S> t(m, n + m + 1);
    for (int i = 0; i < m; ++i) {
        bool flip = b[static_cast<std::size_t>(i)] < S(0);
        for (int j = 0; j < n; ++j) t(i, j) = flip ? -a_in(i, j) : a_in(i, j);
        t(i, n + i) = S(1);
        t(i, n + m) = flip ? -b[static_cast<std::size_t>(i)] : b[static_cast<std::size_t>(i)];
    }
    std::vector<int> basis(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = n + i;

    std::vector<S> obj(static_cast<std::size_t>(n + m + 1), S(0));
    long iterations = 0;

    auto price_out = [&](const std::vector<S>& cost) {
        for (int j = 0; j <= n + m; ++j) {
            obj[static_cast<std::size_t>(j)] = (j < static_cast<int>(cost.size())) ? cost[static_cast<std::size_t>(j)] : S(0);
        }
        for (int i = 0; i < m; ++i) {
            int bi = basis[static_cast<std::size_t>(i)];
            S cb = (bi < static_cast<int>(cost.size())) ? cost[static_cast<std::size_t>(bi)] : S(0);
            if (cb == S(0)) continue;
            for (int j = 0; j <= n + m; ++j) obj[static_cast<std::size_t>(j)] -= cb * t(i, j);
        }
    };

    auto pivot = [&](int row, int col) {
        S inv = S(1) / t(row, col);
        for (int j = 0; j <= n + m; ++j) t(row, j) *= inv;
        for (int i = 0; i < m; ++i) {
            if (i == row) continue;
            S factor = t(i, col);
            if (factor == S(0)) continue;
            for (int j = 0; j <= n + m; ++j) t(i, j) -= factor * t(row, j);
        }
        S factor = obj[static_cast<std::size_t>(col)];
        if (factor != S(0)) {
            for (int j = 0; j <= n + m; ++j) obj[static_cast<std::size_t>(j)] -= factor * t(row, j);
        }
        basis[static_cast<std::size_t>(row)] = col;
    };

    // Bland: entering = lowest eligible index; leaving = lowest basic index
    // among minimum ratios. Over doubles, a column whose reduced cost is only
    // noise-negative and which admits no pivot row is skipped rather than
    // reported unbounded; a decidedly negative one without a pivot row is a
    // genuine unbounded ray, recorded for the caller.
    const S enter_eps = std::is_same_v<S, Rational> ? S(0) : S(1e-10);
    const S strong_eps = std::is_same_v<S, Rational> ? S(0) : S(1e-7);
    int ray_column = -1;
    auto iterate = [&](int allowed_cols) -> LpStatus {
        while (true) {
            int entering = -1, leave_row = -1;
            for (int j = 0; j < allowed_cols && entering < 0; ++j) {
                if (!(obj[static_cast<std::size_t>(j)] < -enter_eps)) continue;
                int candidate_row = -1;
                S candidate_ratio(0);
                for (int i = 0; i < m; ++i) {
                    if (t(i, j) > eps) {
                        S ratio = t(i, n + m) / t(i, j);
                        if (candidate_row < 0 || ratio < candidate_ratio ||
                            (ratio == candidate_ratio &&
                             basis[static_cast<std::size_t>(i)] <
                                 basis[static_cast<std::size_t>(candidate_row)])) {
                            candidate_row = i;
                            candidate_ratio = ratio;
                        }
                    }
                }
                if (candidate_row < 0) {
                    if (obj[static_cast<std::size_t>(j)] < -strong_eps) {
                        ray_column = j;
                        return LpStatus::unbounded;
                    }
                    continue;
                }
                entering = j;
                leave_row = candidate_row;
            }
            if (entering < 0) return LpStatus::optimal;
            pivot(leave_row, entering);
            if (++iterations > max_iterations) return LpStatus::iteration_limit;
        }
    };

    // Phase 1: minimize the sum of artificials.
    {
        std::vector<S> phase1(static_cast<std::size_t>(n + m), S(0));
        for (int j = n; j < n + m; ++j) phase1[static_cast<std::size_t>(j)] = S(1);
        price_out(phase1);
        LpStatus st = iterate(n + m);
        if (st != LpStatus::optimal) return {st, {}, {}, S(0), iterations, 0};
        S infeas = -obj[static_cast<std::size_t>(n + m)];
        S feas_tol = std::is_same_v<S, Rational> ? S(0) : S(1e-9);
        if (infeas > feas_tol) return {LpStatus::infeasible, {}, {}, infeas, iterations, 0};
    }

    // Drive remaining artificials out of the basis; a row with no structural
    // entry is a redundant constraint pivoted to a harmless artificial stay.
    for (int i = 0; i < m; ++i) {
        if (basis[static_cast<std::size_t>(i)] < n) continue;
        int col = -1;
        for (int j = 0; j < n; ++j) {
            if (detail::scalar_abs(t(i, j)) > eps) {
                col = j;
                break;
            }
        }
        if (col >= 0) pivot(i, col);
    }

    // Phase 2 with the real objective; artificial columns are never eligible.
    LpStatus phase2_status;
    {
        std::vector<S> phase2(static_cast<std::size_t>(n + m), S(0));
        for (int j = 0; j < n; ++j) phase2[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j)];
        price_out(phase2);
        phase2_status = iterate(n);
        if (phase2_status == LpStatus::iteration_limit) {
            return {LpStatus::iteration_limit, {}, {}, S(0), iterations, 0};
        }
    }

    LpSolution<S> sol;
    sol.status = phase2_status;
    sol.iterations = iterations;
    sol.x.assign(static_cast<std::size_t>(n), S(0));
    for (int i = 0; i < m; ++i) {
        int bi = basis[static_cast<std::size_t>(i)];
        if (bi < n) {
            sol.x[static_cast<std::size_t>(bi)] = t(i, n + m);
            ++sol.basis_size;
        }
    }
    if (phase2_status == LpStatus::unbounded) {
        // Feasible ray: unit step on the offending column, compensated by the
        // basic variables; components clipped at zero against pivot noise.
        sol.ray.assign(static_cast<std::size_t>(n), S(0));
        sol.ray[static_cast<std::size_t>(ray_column)] = S(1);
        for (int i = 0; i < m; ++i) {
            int bi = basis[static_cast<std::size_t>(i)];
            if (bi < n) {
                S component = -t(i, ray_column);
                sol.ray[static_cast<std::size_t>(bi)] = component > S(0) ? component : S(0);
            }
        }
    }
    S objective(0);
    for (int j = 0; j < n; ++j) objective += c[static_cast<std::size_t>(j)] * sol.x[static_cast<std::size_t>(j)];
    sol.objective = objective;
    return sol;
}

}  // namespace aniso
