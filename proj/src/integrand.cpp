#include "aniso/integrand.hpp"

#include <Eigen/Cholesky>

#include "aniso/exterior.hpp"
#include "aniso/rng.hpp"

namespace aniso {

double GeometricIntegrand::operator()(const KVector& xi) const {
    if (xi.n() != n_ || xi.grade() != k_) throw Error("integrand: k-vector shape mismatch");
    double t = norm(xi);
    if (t == 0.0) return 0.0;
    double value = unit_eval_(xi * (1.0 / t));
    if (value < 0.0) throw Error("integrand '" + name_ + "': negative value on the unit sphere");
    return t * value;
}

GeometricIntegrand make_area(int n, int k) {
    return GeometricIntegrand(n, k, "area", [](const KVector&) { return 1.0; }, true,
                              std::optional<double>(1.0));
}

GeometricIntegrand make_ellipse_norm(int n, int k, const Eigen::MatrixXd& a) {
    const auto dim = static_cast<Eigen::Index>(binom(n, k));
    if (a.rows() != dim || a.cols() != dim) throw Error("ellipse_norm: A must be C(n,k) x C(n,k)");
    if (!a.isApprox(a.transpose(), 1e-12)) throw Error("ellipse_norm: A must be symmetric");
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success) throw Error("ellipse_norm: A must be positive definite");
    Eigen::MatrixXd mat = a;
    return GeometricIntegrand(n, k, "ellipse_norm", [mat](const KVector& u) {
        Eigen::Map<const Eigen::VectorXd> v(u.coeffs().data(), static_cast<Eigen::Index>(u.size()));
        return std::sqrt(v.dot(mat * v));
    });
}

GeometricIntegrand make_perturbed_area(int n, int k, const KVector& eta_star, double eps) {
    if (eta_star.n() != n || eta_star.grade() != k) throw Error("perturbed_area: eta_star shape mismatch");
    KVector star = eta_star;
    return GeometricIntegrand(n, k, "perturbed_area", [star, eps](const KVector& u) {
        double p = inner(u, star);
        return 1.0 + eps * p * p;
    });
}

GeometricIntegrand make_tabulated(int n, int k,
                                  const std::vector<std::pair<KVector, double>>& samples) {
    if (samples.empty()) throw Error("tabulated: no samples");
    std::vector<std::pair<KVector, double>> table;
    table.reserve(samples.size());
    for (const auto& [xi, value] : samples) {
        if (xi.n() != n || xi.grade() != k) throw Error("tabulated: sample shape mismatch");
        double t = norm(xi);
        if (t == 0.0) throw Error("tabulated: zero sample k-vector");
        table.emplace_back(xi * (1.0 / t), value / t);
    }
    return GeometricIntegrand(n, k, "tabulated", [table(std::move(table))](const KVector& u) {
        double best = -1.0, best_dist = 0.0;
        bool first = true;
        for (const auto& [sample, value] : table) {
            double d = norm(u - sample);
            if (first || d < best_dist) {
                best_dist = d;
                best = value;
                first = false;
            }
        }
        return best;
    });
}

double ClassicalIntegrand::operator()(const Eigen::MatrixXd& x) const {
    return psi_(wedge_M(x));
}

double QIntegrand::operator()(std::span<const Eigen::MatrixXd> sheets) const {
    if (static_cast<int>(sheets.size()) != q_) throw Error("QIntegrand: sheet count != Q");
    double acc = 0.0;
    for (const auto& x : sheets) acc += base_(x);
    return acc;
}

double sampled_lipschitz_quotient(const GeometricIntegrand& psi, int pairs, std::uint64_t seed) {
    Rng rng(seed);
    const auto dim = binom(psi.n(), psi.k());
    double worst = 0.0;
    for (int t = 0; t < pairs; ++t) {
        KVector a(psi.n(), psi.k()), b(psi.n(), psi.k());
        for (std::size_t i = 0; i < dim; ++i) {
            a[i] = rng.gaussian();
            b[i] = rng.gaussian();
        }
        double na = norm(a), nb = norm(b);
        if (na < 1e-12 || nb < 1e-12) continue;
        a *= 1.0 / na;
        b *= 1.0 / nb;
        double gap = norm(a - b);
        if (gap < 1e-9) continue;
        worst = std::max(worst, std::fabs(psi(a) - psi(b)) / gap);
    }
    return worst;
}

}  // namespace aniso
