#include "aniso/rational_approx.hpp"

#include <algorithm>
#include <sstream>

#include "aniso/simplex.hpp"

namespace aniso {

namespace {

constexpr int kMaxDoublings = 60;

MatQ round_matrix(const Eigen::MatrixXd& a, const mpz_class& max_den) {
    MatQ out(static_cast<int>(a.rows()), static_cast<int>(a.cols()));
    for (int i = 0; i < out.rows(); ++i)
        for (int j = 0; j < out.cols(); ++j) out(i, j) = best_rational(rational_of(a(i, j)), max_den);
    return out;
}

RationalSimpleKVector wedge_of(MatQ frame) {
    RationalSimpleKVector rs;
    rs.kvector = wedge_cols(frame);
    rs.frame = std::move(frame);
    return rs;
}

/// Tightest frame rounding whose raw wedge lands within eps of the target
/// k-vector (float distance), doubling the denominator bound.
RationalSimpleKVector approx_frame_target(const Eigen::MatrixXd& frame, const KVector& target,
                                          double eps) {
    mpz_class den = 16;
    for (int round = 0; round < kMaxDoublings; ++round, den *= 2) {
        RationalSimpleKVector rs = wedge_of(round_matrix(frame, den));
        if (rs.kvector.is_zero()) continue;
        if (norm(rs.float_raw() - target) < eps) return rs;
    }
    throw Error("rational approximation: denominator budget exhausted");
}

}  // namespace

RationalSimpleKVector rational_simple_approx(const OrientedPlane& eta, double eps) {
    if (!(eps > 0.0)) throw Error("rational_simple_approx: eps must be positive");
    mpz_class den = 1;
    for (int round = 0; round < kMaxDoublings; ++round, den *= 2) {
        RationalSimpleKVector rs = wedge_of(round_matrix(eta.frame(), den));
        if (rs.kvector.is_zero()) continue;
        KVector unit = rs.float_unit();
        if (norm(unit - eta.kvector()) < eps && inner(unit, eta.kvector()) > 0.0) return rs;
    }
    throw Error("rational_simple_approx: denominator budget exhausted");
}

bool ApproximationCertificate::ok() const {
    if (!(eta0_raw_dist < eta0_bound) || !(eta0_unit_dist < eta0_bound)) return false;
    for (std::size_t i = 0; i < atom_dist.size(); ++i) {
        if (!(atom_dist[i] < atom_bound[i])) return false;
    }
    return extra_atoms <= max_extra && positivity_ok && exact_identity;
}

KVectorQ rational_residual(const RationalDecomposition& rd) {
    KVectorQ acc = rd.eta0.kvector;
    for (const auto& atom : rd.atoms) {
        acc -= atom.plane.kvector * atom.weight;
    }
    return acc;
}

MatQ rational_rotation(int n, std::uint64_t seed) {
    // Cayley transform of a rational skew matrix: R = (I - K)(I + K)^{-1}.
    Rng rng(seed);
    MatQ skew(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            Rational v(rng.uniform_int(-4, 4), 8);
            v.canonicalize();
            skew(i, j) = v;
            skew(j, i) = -v;
        }
    }
    MatQ plus = MatQ::identity(n);
    MatQ minus = MatQ::identity(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            plus(i, j) += skew(i, j);
            minus(i, j) -= skew(i, j);
        }
    auto inv = inverse(plus);
    if (!inv) throw Error("rational_rotation: Cayley transform degenerate");
    return minus * *inv;
}

namespace {

struct PoolAtom {
    KVectorQ kvector;   // exactly unit rational simple vector
    MatQ frame;
    Rational pairing;   // inner(kvector, xi0) > 0
};

/// Signed wedges of rational orthonormal bases, kept only when the pairing
/// with xi0 is strictly positive. The identity basis plus a few rational
/// rotations; the basis family whose least |pairing| is largest makes the
/// residual cone widest.
std::vector<PoolAtom> build_pool(int n, int k, const KVectorQ& xi0, int extra_rotations) {
    std::vector<PoolAtom> pool;
    const auto& idx = multi_indices(n, k);
    for (int rot = 0; rot <= extra_rotations; ++rot) {
        MatQ basis = (rot == 0) ? MatQ::identity(n) : rational_rotation(n, 0xA5150C0DEULL + rot);
        for (const auto& index_set : idx) {
            MatQ frame(n, k);
            for (int j = 0; j < k; ++j) {
                for (int i = 0; i < n; ++i) frame(i, j) = basis(i, index_set[static_cast<std::size_t>(j)] - 1);
            }
            PoolAtom atom;
            atom.kvector = wedge_cols(frame);
            atom.pairing = inner(atom.kvector, xi0);
            if (atom.pairing == Rational(0)) continue;
            if (atom.pairing < Rational(0)) {
                atom.kvector = -atom.kvector;
                atom.pairing = -atom.pairing;
                for (int i = 0; i < n; ++i) frame(i, 0) = -frame(i, 0);
            }
            atom.frame = std::move(frame);
            pool.push_back(std::move(atom));
        }
    }
    return pool;
}

}  // namespace

RationalDecomposition approximate_decomposition(const Decomposition& dec, double eps) {
    if (!(eps > 0.0)) throw Error("approximate_decomposition: eps must be positive");
    if (!(eps < 2.0)) throw Error("approximate_decomposition: eps too large; use eps < 2");
    validate(dec);
    if (!positively_oriented(dec)) {
        throw Error("approximate_decomposition: input must be positively oriented against eta0");
    }
    const int n = dec.n(), k = dec.k(), d = dec.d();
    const int m_dim = static_cast<int>(binom(n, k));
    const KVectorQ eta0_exact = to_rational(dec.eta0.kvector());
    const double h = eps / 8.0;

    std::string last_failure = "sign condition unreachable";
    for (int attempt = 0; attempt < kMaxDoublings; ++attempt) {
        const double shrink = std::pow(0.5, attempt);
        const double tau0 = h * shrink / 8.0;

        // Reference plane pushed slightly outside the unit sphere along eta0,
        // so the strict sign condition below is satisfiable at all.
        Eigen::MatrixXd inflated = dec.eta0.frame();
        inflated.col(0) *= (1.0 + h);
        RationalSimpleKVector xi0;
        try {
            xi0 = approx_frame_target(inflated, dec.eta0.kvector() * (1.0 + h), tau0);
        } catch (const Error&) {
            last_failure = "reference rounding budget exhausted";
            continue;
        }
        KVectorQ zeta = xi0.kvector - eta0_exact;
        Rational sign_check = inner(zeta, eta0_exact);
        if (!(sign_check > Rational(0))) {
            last_failure = "inner(eta0~ - eta0, eta0) > 0 unreachable";
            continue;
        }
        Rational zeta_dot = inner(zeta, xi0.kvector);
        if (!(zeta_dot > Rational(0))) {
            last_failure = "inner(eta0~ - eta0, eta0~) > 0 unreachable";
            continue;
        }
        double eta0_raw_dist = norm(xi0.float_raw() - dec.eta0.kvector());
        double eta0_unit_dist = norm(xi0.float_unit() - dec.eta0.kvector());
        if (eta0_raw_dist >= 0.5 * eps || eta0_unit_dist >= 0.5 * eps) {
            last_failure = "reference distance bound missed";
            continue;
        }

        // Atom approximations, tight enough that the residual keeps a
        // positive pairing: the stricter of the stated bound eps/(2 d m_i)
        // and the residual-control bound derived from zeta.
        const double xi0_norm = norm(xi0.float_raw());
        const double zeta_dot_f = to_double(zeta_dot);
        bool atoms_ok = true;
        std::vector<RationalSimpleKVector> approx_atoms(static_cast<std::size_t>(d));
        std::vector<double> atom_dist(static_cast<std::size_t>(d));
        std::vector<double> atom_bound(static_cast<std::size_t>(d));
        for (int i = 0; i < d && atoms_ok; ++i) {
            const double m_i = dec.atoms[static_cast<std::size_t>(i)].first;
            const auto& eta_i = dec.atoms[static_cast<std::size_t>(i)].second;
            atom_bound[static_cast<std::size_t>(i)] = eps / (2.0 * d * m_i);
            double target = std::min({atom_bound[static_cast<std::size_t>(i)],
                                      zeta_dot_f / (d * m_i * xi0_norm),
                                      h / (8.0 * d * m_i)}) *
                            0.45 * shrink;
            try {
                approx_atoms[static_cast<std::size_t>(i)] =
                    approx_frame_target(eta_i.frame(), eta_i.kvector(), target);
            } catch (const Error&) {
                atoms_ok = false;
                last_failure = "atom rounding budget exhausted";
                break;
            }
            atom_dist[static_cast<std::size_t>(i)] =
                norm(approx_atoms[static_cast<std::size_t>(i)].float_raw() - eta_i.kvector());
            Rational pairing = inner(approx_atoms[static_cast<std::size_t>(i)].kvector, xi0.kvector);
            if (!(pairing > Rational(0))) {
                atoms_ok = false;
                last_failure = "atom orientation sign unreachable";
            }
        }
        if (!atoms_ok) continue;

        // Exact residual of the original weights against the approximations.
        KVectorQ residual = xi0.kvector;
        std::vector<Rational> original_weights(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) {
            original_weights[static_cast<std::size_t>(i)] =
                rational_of(dec.atoms[static_cast<std::size_t>(i)].first);
            residual -= approx_atoms[static_cast<std::size_t>(i)].kvector *
                        original_weights[static_cast<std::size_t>(i)];
        }

        std::vector<RationalAtom> new_atoms;
        if (!residual.is_zero()) {
            Rational residual_pairing = inner(residual, xi0.kvector);
            if (!(residual_pairing > Rational(0))) {
                last_failure = "residual pairing sign unreachable";
                continue;
            }
            auto pool = build_pool(n, k, xi0.kvector, std::min(3 + attempt, 8));
            MatQ a(m_dim, static_cast<int>(pool.size()));
            for (int j = 0; j < static_cast<int>(pool.size()); ++j) {
                for (int i = 0; i < m_dim; ++i) {
                    a(i, j) = pool[static_cast<std::size_t>(j)].kvector[static_cast<std::size_t>(i)];
                }
            }
            std::vector<Rational> cost(pool.size(), Rational(1));
            LpSolution<Rational> sol = simplex_min(a, residual.coeffs(), cost);
            if (sol.status != LpStatus::optimal) {
                last_failure = "residual cone program infeasible at current tightness";
                continue;
            }
            // Carathéodory step: the basic solution already uses at most
            // C(n,k) atoms; the reduction also removes dependent leftovers.
            ConicCombination<Rational> comb;
            std::vector<const PoolAtom*> kept;
            for (std::size_t j = 0; j < pool.size(); ++j) {
                if (sol.x[j] > Rational(0)) {
                    comb.atoms.push_back(pool[j].kvector.coeffs());
                    comb.weights.push_back(sol.x[j]);
                    kept.push_back(&pool[j]);
                }
            }
            comb = caratheodory_reduce(std::move(comb), residual.coeffs());
            for (std::size_t j = 0; j < comb.atoms.size(); ++j) {
                // Identify which pool atom survived (reduction preserves atoms).
                const PoolAtom* source = nullptr;
                for (const PoolAtom* cand : kept) {
                    if (cand->kvector.coeffs() == comb.atoms[j]) {
                        source = cand;
                        break;
                    }
                }
                if (!source) throw Error("approximate_decomposition: reduced atom lost its frame");
                RationalAtom atom;
                atom.weight = comb.weights[j];
                atom.plane.kvector = source->kvector;
                atom.plane.frame = source->frame;
                new_atoms.push_back(std::move(atom));
            }
        }
        if (static_cast<int>(new_atoms.size()) > m_dim) {
            last_failure = "residual reduction kept too many atoms";
            continue;
        }

        RationalDecomposition out;
        out.eta0 = xi0;
        out.d_original = d;
        for (int i = 0; i < d; ++i) {
            out.atoms.push_back({original_weights[static_cast<std::size_t>(i)],
                                 approx_atoms[static_cast<std::size_t>(i)]});
        }
        for (auto& atom : new_atoms) out.atoms.push_back(std::move(atom));

        out.cert.eps = eps;
        out.cert.eta0_raw_dist = eta0_raw_dist;
        out.cert.eta0_unit_dist = eta0_unit_dist;
        out.cert.eta0_bound = 0.5 * eps;
        out.cert.atom_dist = std::move(atom_dist);
        out.cert.atom_bound = std::move(atom_bound);
        out.cert.d = d;
        out.cert.extra_atoms = out.count() - d;
        out.cert.max_extra = m_dim;
        out.cert.positivity_ok = true;
        for (const auto& atom : out.atoms) {
            if (!(inner(atom.plane.kvector, xi0.kvector) > Rational(0))) {
                out.cert.positivity_ok = false;
            }
            if (!(atom.weight > Rational(0))) out.cert.positivity_ok = false;
        }
        out.cert.exact_identity = rational_residual(out).is_zero();
        if (!out.cert.exact_identity) {
            throw Error("approximate_decomposition: internal error, identity not exact");
        }
        if (!out.cert.ok()) {
            last_failure = "certificate bound missed";
            continue;
        }
        return out;
    }
    std::ostringstream msg;
    msg << "approximate_decomposition: failed after " << kMaxDoublings
        << " tightenings (" << last_failure << "); try a smaller eps";
    throw Error(msg.str());
}

}  // namespace aniso
