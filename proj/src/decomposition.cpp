#include "aniso/decomposition.hpp"

#include <Eigen/QR>

#include <sstream>

namespace aniso {

void validate(const Decomposition& dec, double tol) {
    const int n = dec.n(), k = dec.k();
    if (dec.atoms.empty()) throw Error("Decomposition: at least one atom required");
    KVector acc(n, k);
    for (const auto& [m, eta] : dec.atoms) {
        if (!(m > 0.0)) throw Error("Decomposition: weights must be positive");
        if (eta.n() != n || eta.k() != k) throw Error("Decomposition: atom shape mismatch");
        acc += eta.kvector() * m;
    }
    double residual = norm(acc - dec.eta0.kvector());
    if (residual > tol) {
        std::ostringstream msg;
        msg << "Decomposition: identity residual " << residual << " exceeds " << tol;
        throw Error(msg.str());
    }
}

bool positively_oriented(const Decomposition& dec) {
    for (const auto& [m, eta] : dec.atoms) {
        if (!(inner(eta.kvector(), dec.eta0.kvector()) > 0.0)) return false;
    }
    return true;
}

double check_instance(const GeometricIntegrand& psi, double c, const Decomposition& dec,
                      OrientationMode mode) {
    validate(dec);
    if (mode == OrientationMode::positive && !positively_oriented(dec)) {
        throw Error("check_instance: atom not positively oriented against the reference plane");
    }
    double energy = -psi(dec.eta0.kvector());
    double bracket = -norm(dec.eta0.kvector());
    for (const auto& [m, eta] : dec.atoms) {
        energy += m * psi(eta.kvector());
        bracket += m * norm(eta.kvector());
    }
    return energy - c * bracket;
}

OrientedPlane random_plane(int n, int k, Rng& rng) {
    Eigen::MatrixXd g(n, k);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < k; ++j) g(i, j) = rng.gaussian();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, k);
    // Deterministic sign convention: positive R diagonal.
    Eigen::MatrixXd r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    for (int j = 0; j < k; ++j) {
        if (r(j, j) < 0.0) q.col(j) = -q.col(j);
    }
    return OrientedPlane::from_frame(q);
}

namespace {

/// Random unit vector orthogonal to the columns of v (v may have no columns).
Eigen::VectorXd random_orthogonal_unit(const Eigen::MatrixXd& v, int n, Rng& rng) {
    while (true) {
        Eigen::VectorXd g(n);
        for (int i = 0; i < n; ++i) g(i) = rng.gaussian();
        if (v.cols() > 0) g -= v * (v.transpose() * g);
        double len = g.norm();
        if (len > 1e-6) return g / len;
    }
}

}  // namespace

Decomposition random_decomposition(int n, int k, int d, std::uint64_t seed, OrientationMode mode,
                                   int retry_budget) {
    if (d < 2) throw Error("random_decomposition: d must be >= 2");
    if (k < 1 || k >= n) throw Error("random_decomposition: need 1 <= k < n");
    Rng rng(seed);
    // For grades 1 and n-1 every k-vector is simple, so fully random atoms
    // work. In between, a generic weighted sum of simple vectors leaves the
    // simple cone (a quadratic variety), so the atoms share a random
    // (k-1)-frame: their weighted sums then stay simple identically.
    const bool pencil = (k > 1 && k < n - 1);
    for (int attempt = 0; attempt < retry_budget; ++attempt) {
        Eigen::MatrixXd shared(n, pencil ? k - 1 : 0);
        if (pencil) {
            for (int j = 0; j < k - 1; ++j) {
                shared.col(j) = random_orthogonal_unit(shared.leftCols(j), n, rng);
            }
        }
        std::vector<OrientedPlane> etas;
        std::vector<double> weights;
        etas.reserve(static_cast<std::size_t>(d));
        weights.reserve(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) {
            if (pencil) {
                Eigen::MatrixXd frame(n, k);
                frame.leftCols(k - 1) = shared;
                frame.col(k - 1) = random_orthogonal_unit(shared, n, rng);
                etas.push_back(OrientedPlane::from_frame(frame));
            } else {
                etas.push_back(random_plane(n, k, rng));
            }
            weights.push_back(0.2 + rng.uniform());
        }
        KVector sigma(n, k);
        for (int i = 0; i < d; ++i) sigma += etas[static_cast<std::size_t>(i)].kvector() * weights[static_cast<std::size_t>(i)];

        if (mode == OrientationMode::positive) {
            double nrm = norm(sigma);
            if (nrm < 1e-9) continue;
            KVector ref = sigma * (1.0 / nrm);
            bool flipped = false;
            for (int i = 0; i < d; ++i) {
                if (inner(etas[static_cast<std::size_t>(i)].kvector(), ref) < 0.0) {
                    etas[static_cast<std::size_t>(i)] =
                        OrientedPlane::from_kvector(-etas[static_cast<std::size_t>(i)].kvector());
                    flipped = true;
                }
            }
            if (flipped) {
                sigma = KVector(n, k);
                for (int i = 0; i < d; ++i) sigma += etas[static_cast<std::size_t>(i)].kvector() * weights[static_cast<std::size_t>(i)];
            }
        }

        double nrm = norm(sigma);
        if (nrm <= 0.1) continue;
        if (!is_simple(sigma)) continue;

        Decomposition dec;
        dec.eta0 = OrientedPlane::from_kvector(sigma);
        bool oriented = true;
        for (int i = 0; i < d; ++i) {
            double m = weights[static_cast<std::size_t>(i)] / nrm;
            if (mode == OrientationMode::positive &&
                !(inner(etas[static_cast<std::size_t>(i)].kvector(), dec.eta0.kvector()) > 0.0)) {
                oriented = false;
                break;
            }
            dec.atoms.emplace_back(m, etas[static_cast<std::size_t>(i)]);
        }
        if (!oriented) continue;
        validate(dec);
        return dec;
    }
    std::ostringstream msg;
    msg << "random_decomposition: retry budget " << retry_budget << " exhausted for n=" << n
        << " k=" << k << " d=" << d << " seed=" << seed;
    throw Error(msg.str());
}

std::pair<double, double> gap_affinity_check(const GeometricIntegrand& psi,
                                             const Decomposition& dec,
                                             std::span<const double> c_list) {
    if (c_list.size() < 2) throw Error("gap_affinity_check: need at least two c values");
    // Least-squares fit of gap(c) = A - c B, then an exactness requirement.
    double sc = 0.0, scc = 0.0, sg = 0.0, scg = 0.0;
    std::vector<double> gaps(c_list.size());
    for (std::size_t i = 0; i < c_list.size(); ++i) {
        gaps[i] = check_instance(psi, c_list[i], dec);
        sc += c_list[i];
        scc += c_list[i] * c_list[i];
        sg += gaps[i];
        scg += c_list[i] * gaps[i];
    }
    const double count = static_cast<double>(c_list.size());
    double det = count * scc - sc * sc;
    if (std::fabs(det) < 1e-15) throw Error("gap_affinity_check: c values are degenerate");
    double b = -(count * scg - sc * sg) / det;
    double a = (sg + b * sc) / count;
    double residual = 0.0;
    for (std::size_t i = 0; i < c_list.size(); ++i) {
        residual = std::max(residual, std::fabs(gaps[i] - (a - c_list[i] * b)));
    }
    if (residual >= 1e-10) {
        std::ostringstream msg;
        msg << "gap_affinity_check: non-affine residual " << residual
            << " signals an implementation defect";
        throw Error(msg.str());
    }
    return {a, b};
}

}  // namespace aniso
