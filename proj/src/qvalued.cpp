#include "aniso/qvalued.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

namespace aniso {

double assignment_min_cost(const std::vector<std::vector<double>>& cost) {
    const int n = static_cast<int>(cost.size());
    if (n == 0) return 0.0;
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0), v(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<int> match(static_cast<std::size_t>(n) + 1, 0), way(static_cast<std::size_t>(n) + 1, 0);
    for (int i = 1; i <= n; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<double> minv(static_cast<std::size_t>(n) + 1, inf);
        std::vector<bool> used(static_cast<std::size_t>(n) + 1, false);
        do {
            used[static_cast<std::size_t>(j0)] = true;
            int i0 = match[static_cast<std::size_t>(j0)], j1 = -1;
            double delta = inf;
            for (int j = 1; j <= n; ++j) {
                if (used[static_cast<std::size_t>(j)]) continue;
                double cur = cost[static_cast<std::size_t>(i0 - 1)][static_cast<std::size_t>(j - 1)] -
                             u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
                if (cur < minv[static_cast<std::size_t>(j)]) {
                    minv[static_cast<std::size_t>(j)] = cur;
                    way[static_cast<std::size_t>(j)] = j0;
                }
                if (minv[static_cast<std::size_t>(j)] < delta) {
                    delta = minv[static_cast<std::size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[static_cast<std::size_t>(j)]) {
                    u[static_cast<std::size_t>(match[static_cast<std::size_t>(j)])] += delta;
                    v[static_cast<std::size_t>(j)] -= delta;
                } else {
                    minv[static_cast<std::size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (match[static_cast<std::size_t>(j0)] != 0);
        do {
            int j1 = way[static_cast<std::size_t>(j0)];
            match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }
    double total = 0.0;
    for (int j = 1; j <= n; ++j) {
        total += cost[static_cast<std::size_t>(match[static_cast<std::size_t>(j)] - 1)][static_cast<std::size_t>(j - 1)];
    }
    return total;
}

double metric_G(const QPoint& a, const QPoint& b) {
    if (a.q() != b.q()) throw Error("metric_G: tuple sizes differ");
    if (a.q() == 0) return 0.0;
    if (a.m() != b.m()) throw Error("metric_G: ambient dimensions differ");
    const int q = a.q();
    std::vector<std::vector<double>> cost(static_cast<std::size_t>(q),
                                          std::vector<double>(static_cast<std::size_t>(q)));
    for (int i = 0; i < q; ++i)
        for (int j = 0; j < q; ++j) {
            cost[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                (a.points[static_cast<std::size_t>(i)] - b.points[static_cast<std::size_t>(j)]).squaredNorm();
        }
    return std::sqrt(std::max(0.0, assignment_min_cost(cost)));
}

CubeComplex::CubeComplex(int k, int level)
    : k_(k), level_(level), cells_(cube_triangulation(k, level)) {}

int CubeComplex::find_cell(const Eigen::VectorXd& x) const {
    if (x.size() != k_) throw Error("find_cell: dimension mismatch");
    for (int i = 0; i < k_; ++i) {
        if (x(i) < -1e-12 || x(i) > 1.0 + 1e-12) throw Error("find_cell: point outside the unit cube");
    }
    std::vector<int> base(static_cast<std::size_t>(k_));
    Eigen::VectorXd local(k_);
    for (int i = 0; i < k_; ++i) {
        double scaled = std::clamp(x(i), 0.0, 1.0) * level_;
        int b = std::min(static_cast<int>(std::floor(scaled)), level_ - 1);
        base[static_cast<std::size_t>(i)] = b;
        local(i) = scaled - b;
    }
    // Kuhn cell = descending order of local coordinates; stable tie-break.
    std::vector<int> perm(static_cast<std::size_t>(k_));
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) { return local(a) > local(b); });
    // Cell index = base cell (lexicographic) * k! + rank of the permutation.
    long base_index = 0;
    for (int i = 0; i < k_; ++i) base_index = base_index * level_ + base[static_cast<std::size_t>(i)];
    long fact = 1;
    for (int i = 2; i <= k_; ++i) fact *= i;
    // Lexicographic rank of perm.
    long rank = 0;
    std::vector<int> pool(static_cast<std::size_t>(k_));
    std::iota(pool.begin(), pool.end(), 0);
    long f = fact;
    for (int i = 0; i < k_; ++i) {
        f /= (k_ - i);
        auto it = std::find(pool.begin(), pool.end(), perm[static_cast<std::size_t>(i)]);
        rank += static_cast<long>(it - pool.begin()) * f;
        pool.erase(it);
    }
    return static_cast<int>(base_index * fact + rank);
}

bool CubeComplex::facet_on_boundary(const std::vector<Eigen::VectorXd>& facet) const {
    for (int axis = 0; axis < k_; ++axis) {
        for (double value : {0.0, 1.0}) {
            bool all = true;
            for (const auto& v : facet) {
                if (v(axis) != value) {
                    all = false;
                    break;
                }
            }
            if (all) return true;
        }
    }
    return false;
}

namespace {

const CubeComplex& complex_for(int k, int level) {
    static std::mutex mtx;
    static std::map<std::pair<int, int>, std::unique_ptr<CubeComplex>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find({k, level});
    if (it == cache.end()) {
        it = cache.emplace(std::make_pair(k, level), std::make_unique<CubeComplex>(k, level)).first;
    }
    return *it->second;
}

void check_shape(const QFunction& f) {
    const auto& cx = f.complex();
    if (f.sheets.size() != cx.cell_count()) throw Error("QFunction: cell count mismatch");
    for (const auto& cell_sheets : f.sheets) {
        if (static_cast<int>(cell_sheets.size()) != f.q) throw Error("QFunction: sheet count != Q");
        for (const auto& sheet : cell_sheets) {
            if (sheet.a.size() != f.m || sheet.l.rows() != f.m || sheet.l.cols() != f.k) {
                throw Error("QFunction: sheet shape mismatch");
            }
        }
    }
}

QPoint values_from_cell(const QFunction& f, int cell, const Eigen::VectorXd& x) {
    QPoint out;
    out.points.reserve(static_cast<std::size_t>(f.q));
    for (const auto& sheet : f.sheets[static_cast<std::size_t>(cell)]) out.points.push_back(sheet.at(x));
    return out;
}

}  // namespace

const CubeComplex& QFunction::complex() const { return complex_for(k, level); }

int AffineMultigraph::q() const {
    int total = 0;
    for (const auto& g : groups) total += g.count;
    return total;
}

void AffineMultigraph::validate() const {
    if (groups.empty()) throw Error("AffineMultigraph: no groups");
    for (const auto& g : groups) {
        if (g.count < 1) throw Error("AffineMultigraph: group count must be positive");
        if (g.a.size() != m || g.l.rows() != m || g.l.cols() != k) {
            throw Error("AffineMultigraph: group shape mismatch");
        }
    }
    for (std::size_t i = 0; i < groups.size(); ++i) {
        for (std::size_t j = i + 1; j < groups.size(); ++j) {
            if ((groups[i].a - groups[j].a).norm() == 0.0) {
                throw Error("AffineMultigraph: group offsets a_j must be pairwise distinct");
            }
        }
    }
}

QPoint AffineMultigraph::eval(const Eigen::VectorXd& x) const {
    QPoint out;
    out.points.reserve(static_cast<std::size_t>(q()));
    for (const auto& g : groups) {
        Eigen::VectorXd value = g.a + g.l * x;
        for (int c = 0; c < g.count; ++c) out.points.push_back(value);
    }
    return out;
}

QPoint eval_q(const QFunction& f, const Eigen::VectorXd& x) {
    check_shape(f);
    return values_from_cell(f, f.complex().find_cell(x), x);
}

std::vector<Eigen::MatrixXd> differential_q(const QFunction& f, int cell) {
    if (cell < 0 || cell >= static_cast<int>(f.sheets.size())) throw Error("differential_q: bad cell index");
    std::vector<Eigen::MatrixXd> out;
    out.reserve(static_cast<std::size_t>(f.q));
    for (const auto& sheet : f.sheets[static_cast<std::size_t>(cell)]) out.push_back(sheet.l);
    return out;
}

double continuity_residual(const QFunction& f) {
    check_shape(f);
    const auto& cx = f.complex();
    // Facet key -> list of incident cells; shared facets are compared at
    // their vertices and barycenter.
    std::map<std::vector<std::vector<double>>, std::vector<int>> facets;
    for (std::size_t ci = 0; ci < cx.cells().size(); ++ci) {
        const auto& verts = cx.cells()[ci];
        for (std::size_t drop = 0; drop < verts.size(); ++drop) {
            std::vector<std::vector<double>> key;
            for (std::size_t j = 0; j < verts.size(); ++j) {
                if (j == drop) continue;
                std::vector<double> coords(static_cast<std::size_t>(f.k));
                for (int i = 0; i < f.k; ++i) coords[static_cast<std::size_t>(i)] = verts[j](i);
                key.push_back(std::move(coords));
            }
            std::sort(key.begin(), key.end());
            facets[key].push_back(static_cast<int>(ci));
        }
    }
    double worst = 0.0;
    for (const auto& [key, incident] : facets) {
        if (incident.size() < 2) continue;
        std::vector<Eigen::VectorXd> probes;
        Eigen::VectorXd barycenter = Eigen::VectorXd::Zero(f.k);
        for (const auto& coords : key) {
            Eigen::VectorXd v(f.k);
            for (int i = 0; i < f.k; ++i) v(i) = coords[static_cast<std::size_t>(i)];
            barycenter += v;
            probes.push_back(std::move(v));
        }
        barycenter /= static_cast<double>(key.size());
        probes.push_back(barycenter);
        for (const auto& x : probes) {
            QPoint ref = values_from_cell(f, incident.front(), x);
            for (std::size_t t = 1; t < incident.size(); ++t) {
                worst = std::max(worst, metric_G(ref, values_from_cell(f, incident[t], x)));
            }
        }
    }
    return worst;
}

namespace {

/// Registry snapping lifted vertex values so that coincident sheet values
/// from adjacent cells map to one representative; shared lifted faces then
/// cancel exactly under canonical merge.
class LiftRegistry {
public:
    explicit LiftRegistry(double tol) : tol_(tol) {}

    Eigen::VectorXd snap(const std::vector<double>& base_key, const Eigen::VectorXd& value) {
        auto& reps = reps_[base_key];
        for (const auto& rep : reps) {
            if ((rep - value).norm() <= tol_) return rep;
        }
        reps.push_back(value);
        return value;
    }

private:
    double tol_;
    std::map<std::vector<double>, std::vector<Eigen::VectorXd>> reps_;
};

std::vector<double> vertex_key(const Eigen::VectorXd& v) {
    std::vector<double> key(static_cast<std::size_t>(v.size()));
    for (int i = 0; i < v.size(); ++i) key[static_cast<std::size_t>(i)] = v(i);
    return key;
}

PolyhedralChain lift_graph(const QFunction& f, LiftRegistry& registry) {
    check_shape(f);
    double residual = continuity_residual(f);
    if (residual > 1e-10) {
        std::ostringstream msg;
        msg << "graph_current: continuity invariant violated (residual " << residual << ")";
        throw Error(msg.str());
    }
    const auto& cx = f.complex();
    PolyhedralChain out(f.k + f.m, f.k);
    for (std::size_t ci = 0; ci < cx.cells().size(); ++ci) {
        const auto& verts = cx.cells()[ci];
        for (const auto& sheet : f.sheets[ci]) {
            Cell lifted;
            lifted.vertices.reserve(verts.size());
            for (const auto& v : verts) {
                Eigen::VectorXd value = registry.snap(vertex_key(v), sheet.at(v));
                Eigen::VectorXd point(f.k + f.m);
                point.head(f.k) = v;
                point.tail(f.m) = value;
                lifted.vertices.push_back(std::move(point));
            }
            out.add(std::move(lifted), 1.0);
        }
    }
    return out;
}

}  // namespace

PolyhedralChain graph_current(const QFunction& f) {
    LiftRegistry registry(1e-9);
    return lift_graph(f, registry);
}

double area_formula_mass(const QFunction& f) {
    check_shape(f);
    const auto& cx = f.complex();
    double acc = 0.0;
    for (std::size_t ci = 0; ci < cx.cells().size(); ++ci) {
        Cell domain;
        domain.vertices = cx.cells()[ci];
        double vol = cell_volume(domain);
        for (const auto& sheet : f.sheets[ci]) {
            Eigen::MatrixXd gram =
                Eigen::MatrixXd::Identity(f.k, f.k) + sheet.l.transpose() * sheet.l;
            acc += vol * std::sqrt(gram.determinant());
        }
    }
    return acc;
}

double q_energy(const QIntegrand& f_q, const QFunction& f) {
    check_shape(f);
    if (f_q.q() != f.q) throw Error("q_energy: integrand Q mismatch");
    const auto& base = f_q.base().underlying();
    if (base.n() != f.k + f.m || base.k() != f.k) throw Error("q_energy: integrand shape mismatch");
    const auto& cx = f.complex();
    double acc = 0.0;
    for (std::size_t ci = 0; ci < cx.cells().size(); ++ci) {
        Cell domain;
        domain.vertices = cx.cells()[ci];
        double vol = cell_volume(domain);
        for (const auto& sheet : f.sheets[ci]) {
            acc += vol * f_q.base()(sheet.l);
        }
    }
    return acc;
}

QFunction expand_multigraph(const AffineMultigraph& h, int level) {
    h.validate();
    QFunction f;
    f.k = h.k;
    f.m = h.m;
    f.q = h.q();
    f.level = level;
    const auto& cx = f.complex();
    f.sheets.assign(cx.cell_count(), {});
    for (auto& cell_sheets : f.sheets) {
        cell_sheets.reserve(static_cast<std::size_t>(f.q));
        for (const auto& g : h.groups) {
            for (int c = 0; c < g.count; ++c) cell_sheets.push_back({g.a, g.l});
        }
    }
    return f;
}

namespace {

/// Perfect matching on the threshold graph { (i,j) : deviation(i,j) < tol }
/// by augmenting paths; exact for the per-sheet strict boundary check.
bool has_perfect_matching(const std::vector<std::vector<bool>>& compatible) {
    const int q = static_cast<int>(compatible.size());
    std::vector<int> match_of(static_cast<std::size_t>(q), -1);
    std::function<bool(int, std::vector<bool>&)> augment = [&](int i, std::vector<bool>& seen) {
        for (int j = 0; j < q; ++j) {
            if (!compatible[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] ||
                seen[static_cast<std::size_t>(j)]) {
                continue;
            }
            seen[static_cast<std::size_t>(j)] = true;
            if (match_of[static_cast<std::size_t>(j)] < 0 ||
                augment(match_of[static_cast<std::size_t>(j)], seen)) {
                match_of[static_cast<std::size_t>(j)] = i;
                return true;
            }
        }
        return false;
    };
    for (int i = 0; i < q; ++i) {
        std::vector<bool> seen(static_cast<std::size_t>(q), false);
        if (!augment(i, seen)) return false;
    }
    return true;
}

}  // namespace

GraphTestPair make_graph_test_pair(const QFunction& f, const AffineMultigraph& h, bool strict) {
    check_shape(f);
    h.validate();
    if (f.k != h.k || f.m != h.m || f.q != h.q()) {
        throw Error("make_graph_test_pair: (k, m, Q) mismatch between f and h");
    }
    const auto& cx = f.complex();
    double worst = 0.0;
    Eigen::VectorXd worst_point;
    // The h-sheets in expansion order, for the strict per-sheet matching.
    std::vector<AffineSheet> h_sheets;
    for (const auto& g : h.groups) {
        for (int c = 0; c < g.count; ++c) h_sheets.push_back({g.a, g.l});
    }
    for (std::size_t ci = 0; ci < cx.cells().size(); ++ci) {
        const auto& verts = cx.cells()[ci];
        for (std::size_t drop = 0; drop < verts.size(); ++drop) {
            std::vector<Eigen::VectorXd> facet;
            for (std::size_t j = 0; j < verts.size(); ++j) {
                if (j != drop) facet.push_back(verts[j]);
            }
            if (!cx.facet_on_boundary(facet)) continue;
            Eigen::VectorXd barycenter = Eigen::VectorXd::Zero(f.k);
            for (const auto& v : facet) barycenter += v;
            barycenter /= static_cast<double>(facet.size());
            facet.push_back(barycenter);
            for (const auto& x : facet) {
                double gap = metric_G(values_from_cell(f, static_cast<int>(ci), x), h.eval(x));
                if (gap > worst) {
                    worst = gap;
                    worst_point = x;
                }
            }
            if (strict) {
                // Sheet i of f matches sheet j of h when they agree at every
                // probe point of this facet.
                const auto& cell_sheets = f.sheets[ci];
                std::vector<std::vector<bool>> compatible(
                    static_cast<std::size_t>(f.q), std::vector<bool>(static_cast<std::size_t>(f.q), true));
                for (int i = 0; i < f.q; ++i) {
                    for (int j = 0; j < f.q; ++j) {
                        for (const auto& x : facet) {
                            if ((cell_sheets[static_cast<std::size_t>(i)].at(x) -
                                 h_sheets[static_cast<std::size_t>(j)].at(x))
                                    .norm() >= 1e-9) {
                                compatible[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = false;
                                break;
                            }
                        }
                    }
                }
                if (!has_perfect_matching(compatible)) {
                    throw Error(
                        "make_graph_test_pair: strict mode found no per-sheet boundary matching");
                }
            }
        }
    }
    if (worst >= 1e-9) {
        std::ostringstream msg;
        msg << "make_graph_test_pair: boundary values disagree by " << worst << " at (";
        for (int i = 0; i < worst_point.size(); ++i) {
            msg << (i ? ", " : "") << worst_point(i);
        }
        msg << ")";
        throw Error(msg.str());
    }
    GraphTestPair pair{f, expand_multigraph(h, f.level), h};
    // Shared vertex registry: agreeing boundary values from f and h snap to
    // one representative, so the lifted boundaries cancel in canonical form.
    LiftRegistry registry(1e-9);
    PolyhedralChain lifted_f = lift_graph(pair.f, registry);
    PolyhedralChain lifted_h = lift_graph(pair.h_expanded, registry);
    if (!chains_equal(boundary(lifted_f), boundary(lifted_h), 1e-9)) {
        throw Error("make_graph_test_pair: graph current boundaries differ");
    }
    return pair;
}

double verify_uqc(const QIntegrand& f_q, double c, const GraphTestPair& pair) {
    return q_energy(f_q, pair.f) - q_energy(f_q, pair.h_expanded) -
           c * (area_formula_mass(pair.f) - area_formula_mass(pair.h_expanded));
}

AffineMultigraph random_multigraph(int k, int m, int q, Rng& rng) {
    AffineMultigraph h;
    h.k = k;
    h.m = m;
    int remaining = q;
    while (remaining > 0) {
        AffineMultigraph::Group g;
        g.count = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(remaining));
        remaining -= g.count;
        g.a = Eigen::VectorXd(m);
        g.l = Eigen::MatrixXd(m, k);
        for (int i = 0; i < m; ++i) g.a(i) = rng.gaussian();
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < k; ++j) g.l(i, j) = 0.5 * rng.gaussian();
        h.groups.push_back(std::move(g));
    }
    // Separate the offsets so the distinctness invariant holds robustly.
    for (std::size_t i = 0; i < h.groups.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if ((h.groups[i].a - h.groups[j].a).norm() < 0.5) {
                h.groups[i].a(0) += 1.0 + static_cast<double>(i);
            }
        }
    }
    h.validate();
    return h;
}

QFunction random_q_function(int k, int m, int q, int level, double lipschitz_bound,
                            const AffineMultigraph& h, std::uint64_t seed) {
    h.validate();
    if (h.k != k || h.m != m || h.q() != q) throw Error("random_q_function: (k, m, Q) mismatch");
    if (level < 1) throw Error("random_q_function: level must be >= 1");
    Rng rng(seed);
    const CubeComplex& cx = complex_for(k, level);

    // Lattice vertices in lexicographic order.
    std::vector<Eigen::VectorXd> grid;
    {
        std::vector<int> g(static_cast<std::size_t>(k), 0);
        while (true) {
            Eigen::VectorXd v(k);
            for (int i = 0; i < k; ++i) v(i) = static_cast<double>(g[static_cast<std::size_t>(i)]) / level;
            grid.push_back(std::move(v));
            int i = k - 1;
            while (i >= 0 && g[static_cast<std::size_t>(i)] == level) {
                g[static_cast<std::size_t>(i)] = 0;
                --i;
            }
            if (i < 0) break;
            ++g[static_cast<std::size_t>(i)];
        }
    }
    auto vertex_id = [&](const Eigen::VectorXd& v) {
        long id = 0;
        for (int i = 0; i < k; ++i) {
            id = id * (level + 1) + static_cast<long>(std::lround(v(i) * level));
        }
        return id;
    };
    auto on_boundary = [&](const Eigen::VectorXd& v) {
        for (int i = 0; i < k; ++i) {
            if (v(i) == 0.0 || v(i) == 1.0) return true;
        }
        return false;
    };

    // Offset radius: respects the requested Lipschitz scale and keeps sheets
    // of distinct groups separated everywhere on the grid.
    double separation = std::numeric_limits<double>::infinity();
    for (const auto& v : grid) {
        for (std::size_t i = 0; i < h.groups.size(); ++i) {
            for (std::size_t j = i + 1; j < h.groups.size(); ++j) {
                double gap = ((h.groups[i].a + h.groups[i].l * v) -
                              (h.groups[j].a + h.groups[j].l * v))
                                 .norm();
                separation = std::min(separation, gap);
            }
        }
    }
    double radius = lipschitz_bound / (2.0 * level * std::sqrt(static_cast<double>(k)));
    if (std::isfinite(separation)) radius = std::min(radius, 0.25 * separation);
    if (radius <= 0.0) radius = 0.0;

    // Per-sheet vertex values: group map plus bounded interior offsets.
    // Sheets inside a group sit at distinct radial levels of a common random
    // direction, so they stay separated (no branching).
    std::vector<std::vector<Eigen::VectorXd>> values(static_cast<std::size_t>(q));
    int sheet_index = 0;
    for (const auto& g : h.groups) {
        Eigen::VectorXd direction(m);
        for (int i = 0; i < m; ++i) direction(i) = rng.gaussian();
        double len = direction.norm();
        direction = (len > 1e-12) ? Eigen::VectorXd(direction / len) : Eigen::VectorXd::Unit(m, 0);
        for (int s = 0; s < g.count; ++s, ++sheet_index) {
            double level_fraction = static_cast<double>(s + 1) / (g.count + 1);
            auto& sheet_values = values[static_cast<std::size_t>(sheet_index)];
            sheet_values.reserve(grid.size());
            for (const auto& v : grid) {
                Eigen::VectorXd value = g.a + g.l * v;
                if (!on_boundary(v) && radius > 0.0) {
                    Eigen::VectorXd jitter(m);
                    for (int i = 0; i < m; ++i) jitter(i) = 2.0 * rng.uniform() - 1.0;
                    double jl = jitter.norm();
                    if (jl > 1.0) jitter /= jl;
                    value += radius * level_fraction * direction +
                             (radius / (4.0 * (g.count + 1))) * jitter;
                }
                sheet_values.push_back(std::move(value));
            }
        }
    }

    // Per-cell affine sheets through the vertex values.
    QFunction f;
    f.k = k;
    f.m = m;
    f.q = q;
    f.level = level;
    f.sheets.assign(cx.cell_count(), {});
    for (std::size_t ci = 0; ci < cx.cells().size(); ++ci) {
        const auto& verts = cx.cells()[ci];
        Eigen::MatrixXd edges(k, k);
        for (int j = 0; j < k; ++j) edges.col(j) = verts[static_cast<std::size_t>(j + 1)] - verts[0];
        Eigen::MatrixXd edges_inv = edges.inverse();
        auto& cell_sheets = f.sheets[ci];
        cell_sheets.reserve(static_cast<std::size_t>(q));
        for (int s = 0; s < q; ++s) {
            const auto& sheet_values = values[static_cast<std::size_t>(s)];
            Eigen::MatrixXd deltas(m, k);
            long v0 = vertex_id(verts[0]);
            for (int j = 0; j < k; ++j) {
                deltas.col(j) = sheet_values[static_cast<std::size_t>(vertex_id(verts[static_cast<std::size_t>(j + 1)]))] -
                                sheet_values[static_cast<std::size_t>(v0)];
            }
            AffineSheet sheet;
            sheet.l = deltas * edges_inv;
            sheet.a = sheet_values[static_cast<std::size_t>(v0)] - sheet.l * verts[0];
            cell_sheets.push_back(std::move(sheet));
        }
    }
    // The construction pins boundary vertices to h, so this validates.
    make_graph_test_pair(f, h);
    return f;
}

}  // namespace aniso
