#include "aniso/polyconvexity.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

#include "aniso/parallel.hpp"

namespace aniso {

namespace {

double g_value(const GeometricIntegrand& psi, double c, const OrientedPlane& eta) {
    return psi(eta.kvector()) - c * norm(eta.kvector());
}

}  // namespace

LpDecomposition lp_min_decomposition(const GeometricIntegrand& psi, double c,
                                     const OrientedPlane& eta0,
                                     std::span<const OrientedPlane> atoms,
                                     OrientationMode mode) {
    const int n = eta0.n(), k = eta0.k();
    const int m_rows = static_cast<int>(binom(n, k));
    const int n_cols = static_cast<int>(atoms.size());
    bool contains_ref = false;
    for (const auto& atom : atoms) {
        if (atom.n() != n || atom.k() != k) throw Error("lp_min_decomposition: atom shape mismatch");
        if (mode == OrientationMode::positive &&
            !(inner(atom.kvector(), eta0.kvector()) > 0.0)) {
            throw Error("lp_min_decomposition: atom not positively oriented");
        }
        if (norm(atom.kvector() - eta0.kvector()) < 1e-12) contains_ref = true;
    }
    if (!contains_ref) throw Error("lp_min_decomposition: atom set must contain the reference plane");

    Mat<double> a(m_rows, n_cols);
    std::vector<double> cost(static_cast<std::size_t>(n_cols));
    for (int j = 0; j < n_cols; ++j) {
        const auto& xi = atoms[static_cast<std::size_t>(j)].kvector();
        for (int i = 0; i < m_rows; ++i) a(i, j) = xi[static_cast<std::size_t>(i)];
        cost[static_cast<std::size_t>(j)] = g_value(psi, c, atoms[static_cast<std::size_t>(j)]);
    }
    std::vector<double> b(eta0.kvector().coeffs());

    LpSolution<double> sol = simplex_min(a, std::move(b), cost);
    if (sol.status == LpStatus::iteration_limit) throw Error("lp_min_decomposition: LP iteration limit");
    if (sol.status == LpStatus::infeasible) {
        throw Error("lp_min_decomposition: infeasible (violated precondition)");
    }
    LpDecomposition out;
    out.weights = std::move(sol.x);
    out.iterations = sol.iterations;
    if (sol.status == LpStatus::unbounded) {
        // The cone of atoms contains a circuit of strictly negative cost, so
        // the objective has no minimum; any long enough step along the ray is
        // a violating decomposition. The step targets a unit of cost but is
        // capped so tableau noise in A * ray cannot outgrow the decomposition
        // identity tolerance.
        double ray_cost = 0.0;
        for (int j = 0; j < n_cols; ++j) ray_cost += cost[static_cast<std::size_t>(j)] * sol.ray[static_cast<std::size_t>(j)];
        if (!(ray_cost < 0.0)) throw Error("lp_min_decomposition: degenerate unbounded ray");
        double step = std::clamp(1.0 / -ray_cost, 1.0, 1e3);
        for (int j = 0; j < n_cols; ++j) {
            out.weights[static_cast<std::size_t>(j)] += step * sol.ray[static_cast<std::size_t>(j)];
        }
        double objective = 0.0;
        for (int j = 0; j < n_cols; ++j) objective += cost[static_cast<std::size_t>(j)] * out.weights[static_cast<std::size_t>(j)];
        out.lp_gap = objective - g_value(psi, c, eta0);
        out.unbounded = true;
    } else {
        out.lp_gap = sol.objective - g_value(psi, c, eta0);
    }
    for (double w : out.weights) {
        if (w > 1e-12) ++out.support;
    }
    return out;
}

Decomposition decomposition_from_weights(const OrientedPlane& eta0,
                                         std::span<const OrientedPlane> atoms,
                                         std::span<const double> weights) {
    if (atoms.size() != weights.size()) throw Error("decomposition_from_weights: size mismatch");
    Decomposition dec;
    dec.eta0 = eta0;
    for (std::size_t j = 0; j < atoms.size(); ++j) {
        if (weights[j] > 1e-12) dec.atoms.emplace_back(weights[j], atoms[j]);
    }
    validate(dec);
    return dec;
}

namespace {

/// Multiplicative weight perturbation that preserves validity: rescale the
/// weights, re-wedge the sum, and renormalize to a fresh reference plane.
std::optional<Decomposition> perturb_weights(const Decomposition& dec, Rng& rng, double scale,
                                             OrientationMode mode) {
    const int n = dec.n(), k = dec.k();
    KVector sigma(n, k);
    std::vector<double> weights;
    weights.reserve(dec.atoms.size());
    for (const auto& [m, eta] : dec.atoms) {
        double w = m * (1.0 + scale * (2.0 * rng.uniform() - 1.0));
        if (w <= 1e-12) return std::nullopt;
        weights.push_back(w);
        sigma += eta.kvector() * w;
    }
    double nrm = norm(sigma);
    if (nrm <= 0.1) return std::nullopt;
    if (k != 1 && k != n - 1 && !is_simple(sigma)) return std::nullopt;
    Decomposition out;
    out.eta0 = OrientedPlane::from_kvector(sigma);
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (mode == OrientationMode::positive &&
            !(inner(dec.atoms[i].second.kvector(), out.eta0.kvector()) > 0.0)) {
            return std::nullopt;
        }
        out.atoms.emplace_back(weights[i] / nrm, dec.atoms[i].second);
    }
    return out;
}

}  // namespace

SearchResult search_counterexample(const GeometricIntegrand& psi, double c, std::uint64_t budget,
                                   const SearchParams& params, std::uint64_t seed, int threads) {
    if (budget < 1) throw Error("search_counterexample: budget must be >= 1");

    // One independently seeded sample: draw, check, and refine locally by
    // weight perturbation when the gap is violating or near the boundary.
    auto probe = [&](std::uint64_t t) -> std::optional<std::pair<Decomposition, double>> {
        std::uint64_t sub = Rng::derive(seed, t);
        Rng rng(sub);
        int d = params.d_min + static_cast<int>(rng.next_u64() %
                                                static_cast<std::uint64_t>(params.d_max - params.d_min + 1));
        Decomposition dec = random_decomposition(params.n, params.k, d, Rng::derive(sub, 1), params.mode);
        double gap = check_instance(psi, c, dec, params.mode);
        double trigger = 0.05 * std::max(1.0, c) * (dec.weight_sum() - 1.0);
        if (gap >= trigger) return std::nullopt;
        Decomposition best = dec;
        double best_gap = gap;
        for (int step = 0; step < params.refine_steps; ++step) {
            double scale = params.refine_scale / (1.0 + 0.25 * step);
            auto candidate = perturb_weights(best, rng, scale, params.mode);
            if (!candidate) continue;
            double cand_gap = check_instance(psi, c, *candidate, params.mode);
            if (cand_gap < best_gap) {
                best_gap = cand_gap;
                best = *candidate;
            }
        }
        if (best_gap < kGapThreshold) return std::make_pair(std::move(best), best_gap);
        return std::nullopt;
    };

    // Samples are sharded across workers chunk by chunk; within a chunk the
    // lowest sample index wins, so the result matches a sequential scan of
    // the same seeds regardless of the thread count.
    SearchResult result;
    const std::uint64_t chunk = 256;
    for (std::uint64_t start = 0; start < budget; start += chunk) {
        const int count = static_cast<int>(std::min(chunk, budget - start));
        std::vector<std::optional<std::pair<Decomposition, double>>> hits(
            static_cast<std::size_t>(count));
        parallel_for(count, [&](int i) {
            hits[static_cast<std::size_t>(i)] = probe(start + static_cast<std::uint64_t>(i));
        }, threads);
        for (int i = 0; i < count; ++i) {
            if (hits[static_cast<std::size_t>(i)]) {
                result.samples_used = start + static_cast<std::uint64_t>(i) + 1;
                result.witness = std::move(hits[static_cast<std::size_t>(i)]->first);
                result.gap = hits[static_cast<std::size_t>(i)]->second;
                return result;
            }
        }
        result.samples_used = start + static_cast<std::uint64_t>(count);
    }
    return result;
}

UpcReport certify_sampled(const GeometricIntegrand& psi, double c, int n_dirs, int n_atoms,
                          std::uint64_t seed, OrientationMode mode, int threads) {
    if (n_dirs < 1 || n_atoms < 1) throw Error("certify_sampled: n_dirs and n_atoms must be >= 1");
    const int n = psi.n(), k = psi.k();

    struct DirOutcome {
        double gap = 0.0;
        int support = 0;
        long iterations = 0;
        std::optional<Decomposition> witness;
    };
    std::vector<DirOutcome> outcomes(static_cast<std::size_t>(n_dirs));

    parallel_for(n_dirs, [&](int dir) {
        Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(dir)));
        OrientedPlane eta0 = random_plane(n, k, rng);
        std::vector<OrientedPlane> atoms;
        atoms.reserve(static_cast<std::size_t>(n_atoms) + 1);
        atoms.push_back(eta0);
        while (static_cast<int>(atoms.size()) < n_atoms + 1) {
            OrientedPlane atom = random_plane(n, k, rng);
            double pairing = inner(atom.kvector(), eta0.kvector());
            if (mode == OrientationMode::positive) {
                if (std::fabs(pairing) < 1e-12) continue;
                if (pairing < 0.0) atom = OrientedPlane::from_kvector(-atom.kvector());
            }
            atoms.push_back(std::move(atom));
        }
        LpDecomposition lp = lp_min_decomposition(psi, c, eta0, atoms, mode);
        DirOutcome& out = outcomes[static_cast<std::size_t>(dir)];
        out.gap = lp.lp_gap;
        out.support = lp.unbounded ? 0 : lp.support;  // support bound applies to optima
        out.iterations = lp.iterations;
        if (lp.lp_gap < kGapThreshold) {
            out.witness = decomposition_from_weights(eta0, atoms, lp.weights);
        }
    }, threads);

    UpcReport report;
    report.c = c;
    report.stats = {n_dirs, n_atoms, seed, mode, 0, 0};
    report.worst_gap = 0.0;
    int worst_dir = -1;
    for (int dir = 0; dir < n_dirs; ++dir) {
        const auto& out = outcomes[static_cast<std::size_t>(dir)];
        report.stats.max_support = std::max(report.stats.max_support, out.support);
        report.stats.lp_iterations += out.iterations;
        if (worst_dir < 0 || out.gap < report.worst_gap) {
            report.worst_gap = out.gap;
            worst_dir = dir;
        }
    }
    if (report.worst_gap < kGapThreshold) {
        report.mode = UpcMode::counterexample;
        report.witness = outcomes[static_cast<std::size_t>(worst_dir)].witness;
    } else {
        report.mode = UpcMode::sampled_certificate;
    }
    report.caveat =
        "sampled certificate over finitely many reference planes and atoms; this is evidence, "
        "not a proof, and no sampling density sufficient for a true certificate is claimed";
    return report;
}

double locate_c_heuristic(const GeometricIntegrand& psi, int n_dirs, int n_atoms,
                          std::uint64_t seed, double c_hi, double tol, OrientationMode mode) {
    auto passes = [&](double c) {
        return certify_sampled(psi, c, n_dirs, n_atoms, seed, mode).mode ==
               UpcMode::sampled_certificate;
    };
    double lo = 0.0;
    if (!passes(lo)) return -1.0;  // not even convex on the sampled instances
    if (passes(c_hi)) return c_hi;
    double hi = c_hi;
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        if (passes(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

const char* to_string(UpcMode mode) {
    switch (mode) {
        case UpcMode::verified_instance: return "verified_instance";
        case UpcMode::counterexample: return "counterexample";
        case UpcMode::sampled_certificate: return "sampled_certificate";
    }
    return "unknown";
}

const char* to_string(OrientationMode mode) {
    return mode == OrientationMode::positive ? "positive" : "any";
}

}  // namespace aniso
