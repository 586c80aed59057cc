#include "aniso/currents.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace aniso {

void PolyhedralChain::add(Cell cell, double multiplicity) {
    if (multiplicity == 0.0) throw Error("PolyhedralChain: zero multiplicity");
    if (cell.k() != k_ || cell.n() != n_) throw Error("PolyhedralChain: cell shape mismatch");
    for (const auto& v : cell.vertices) {
        if (v.size() != n_) throw Error("PolyhedralChain: vertex dimension mismatch");
    }
    if (k_ > 0 && cell_volume(cell) <= 1e-12) {
        throw Error("PolyhedralChain: degenerate cell (affinely dependent vertices)");
    }
    cells_.emplace_back(std::move(cell), multiplicity);
}

Eigen::MatrixXd edge_matrix(const Cell& cell) {
    const int k = cell.k(), n = cell.n();
    Eigen::MatrixXd e(n, k);
    for (int j = 0; j < k; ++j) e.col(j) = cell.vertices[static_cast<std::size_t>(j + 1)] - cell.vertices[0];
    return e;
}

double cell_volume(const Cell& cell) {
    const int k = cell.k();
    if (k == 0) return 1.0;
    Eigen::MatrixXd e = edge_matrix(cell);
    double gram = (e.transpose() * e).determinant();
    if (gram < 0.0) gram = 0.0;
    double factorial = 1.0;
    for (int i = 2; i <= k; ++i) factorial *= i;
    return std::sqrt(gram) / factorial;
}

OrientedPlane tangent(const Cell& cell) {
    KVector xi = wedge_cols(edge_matrix(cell));
    double t = norm(xi);
    if (t <= 1e-12) throw Error("tangent: degenerate cell");
    return OrientedPlane::from_kvector(xi);
}

namespace {

// Canonical key of a cell: vertices sorted lexicographically on exact
// coordinates; the sorting permutation's parity is absorbed into the sign.
struct CanonicalCell {
    std::vector<std::vector<double>> verts;
    int sign = 1;

    bool operator<(const CanonicalCell& o) const { return verts < o.verts; }
};

CanonicalCell canonicalize(const Cell& cell) {
    CanonicalCell out;
    out.verts.reserve(cell.vertices.size());
    for (const auto& v : cell.vertices) {
        std::vector<double> coords(static_cast<std::size_t>(v.size()));
        for (int i = 0; i < v.size(); ++i) coords[static_cast<std::size_t>(i)] = v(i) == 0.0 ? 0.0 : v(i);
        out.verts.push_back(std::move(coords));
    }
    // Insertion sort, counting swaps for the permutation parity.
    int swaps = 0;
    for (std::size_t i = 1; i < out.verts.size(); ++i) {
        for (std::size_t j = i; j > 0 && out.verts[j] < out.verts[j - 1]; --j) {
            std::swap(out.verts[j], out.verts[j - 1]);
            ++swaps;
        }
    }
    out.sign = (swaps % 2 == 0) ? 1 : -1;
    return out;
}

std::map<CanonicalCell, double> canonical_map(const PolyhedralChain& t) {
    std::map<CanonicalCell, double> merged;
    for (const auto& [cell, mult] : t.cells()) {
        CanonicalCell canon = canonicalize(cell);
        double signed_mult = mult * canon.sign;
        canon.sign = 1;
        merged[canon] += signed_mult;
    }
    for (auto it = merged.begin(); it != merged.end();) {
        if (it->second == 0.0) {
            it = merged.erase(it);
        } else {
            ++it;
        }
    }
    return merged;
}

}  // namespace

PolyhedralChain boundary(const PolyhedralChain& t) {
    if (t.k() < 1) throw Error("boundary: grade must be at least 1");
    std::map<CanonicalCell, double> merged;
    for (const auto& [cell, mult] : t.cells()) {
        for (int drop = 0; drop <= t.k(); ++drop) {
            Cell face;
            face.vertices.reserve(cell.vertices.size() - 1);
            for (int j = 0; j <= t.k(); ++j) {
                if (j != drop) face.vertices.push_back(cell.vertices[static_cast<std::size_t>(j)]);
            }
            CanonicalCell canon = canonicalize(face);
            double face_mult = mult * canon.sign * ((drop % 2 == 0) ? 1.0 : -1.0);
            canon.sign = 1;
            merged[canon] += face_mult;
        }
    }
    PolyhedralChain out(t.n(), t.k() - 1);
    for (const auto& [canon, mult] : merged) {
        if (mult == 0.0) continue;
        Cell cell;
        for (const auto& coords : canon.verts) {
            Eigen::VectorXd v(static_cast<Eigen::Index>(coords.size()));
            for (std::size_t i = 0; i < coords.size(); ++i) v(static_cast<Eigen::Index>(i)) = coords[i];
            cell.vertices.push_back(std::move(v));
        }
        out.add(std::move(cell), mult);
    }
    return out;
}

bool chains_equal(const PolyhedralChain& a, const PolyhedralChain& b, double tol) {
    if (a.n() != b.n() || a.k() != b.k()) return false;
    auto ma = canonical_map(a);
    auto mb = canonical_map(b);
    for (const auto& [key, mult] : ma) {
        auto it = mb.find(key);
        double other = (it == mb.end()) ? 0.0 : it->second;
        if (std::fabs(mult - other) > tol) return false;
    }
    for (const auto& [key, mult] : mb) {
        if (ma.find(key) == ma.end() && std::fabs(mult) > tol) return false;
    }
    return true;
}

double mass(const PolyhedralChain& t) {
    double acc = 0.0;
    for (const auto& [cell, mult] : t.cells()) acc += std::fabs(mult) * cell_volume(cell);
    return acc;
}

DiscreteGrassMeasure::DiscreteGrassMeasure(std::vector<std::pair<OrientedPlane, double>> atoms) {
    // Deterministic canonical merge: sort by coefficients, then cluster
    // within the merge tolerance.
    std::sort(atoms.begin(), atoms.end(), [](const auto& a, const auto& b) {
        return a.first.kvector().coeffs() < b.first.kvector().coeffs();
    });
    for (auto& [plane, weight] : atoms) {
        bool merged = false;
        for (auto& [existing, total] : atoms_) {
            if (norm(existing.kvector() - plane.kvector()) < kMergeTol) {
                total += weight;
                merged = true;
                break;
            }
        }
        if (!merged) atoms_.emplace_back(std::move(plane), weight);
    }
    std::erase_if(atoms_, [](const auto& atom) { return atom.second == 0.0; });
}

double DiscreteGrassMeasure::total_weight() const {
    double acc = 0.0;
    for (const auto& [plane, weight] : atoms_) acc += weight;
    return acc;
}

DiscreteGrassMeasure operator-(const DiscreteGrassMeasure& a, const DiscreteGrassMeasure& b) {
    std::vector<std::pair<OrientedPlane, double>> atoms = a.atoms_;
    for (const auto& [plane, weight] : b.atoms_) atoms.emplace_back(plane, -weight);
    return DiscreteGrassMeasure(std::move(atoms));
}

DiscreteGrassMeasure gaussian_image(const PolyhedralChain& t) {
    std::vector<std::pair<OrientedPlane, double>> atoms;
    atoms.reserve(t.size());
    for (const auto& [cell, mult] : t.cells()) {
        atoms.emplace_back(tangent(cell), mult * cell_volume(cell));
    }
    return DiscreteGrassMeasure(std::move(atoms));
}

double tv_distance(const DiscreteGrassMeasure& mu, const DiscreteGrassMeasure& nu) {
    DiscreteGrassMeasure diff = mu - nu;
    double acc = 0.0;
    for (const auto& [plane, weight] : diff.atoms()) acc += std::fabs(weight);
    return acc;
}

double energy(const GeometricIntegrand& psi, const PolyhedralChain& t) {
    if (psi.n() != t.n() || psi.k() != t.k()) throw Error("energy: integrand shape mismatch");
    double acc = 0.0;
    for (const auto& [cell, mult] : t.cells()) {
        acc += mult * cell_volume(cell) * psi(tangent(cell).kvector());
    }
    return acc;
}

double energy_via_gaussian(const GeometricIntegrand& psi, const PolyhedralChain& t) {
    if (psi.n() != t.n() || psi.k() != t.k()) throw Error("energy: integrand shape mismatch");
    DiscreteGrassMeasure image = gaussian_image(t);
    double acc = 0.0;
    for (const auto& [plane, weight] : image.atoms()) {
        acc += weight * psi(plane.kvector());
    }
    return acc;
}

std::vector<std::vector<Eigen::VectorXd>> cube_triangulation(int k, int level) {
    if (k < 1 || level < 1) throw Error("cube_triangulation: need k >= 1 and level >= 1");
    std::vector<std::vector<Eigen::VectorXd>> cells;
    std::vector<int> base(static_cast<std::size_t>(k), 0);
    std::vector<int> perm(static_cast<std::size_t>(k));
    // Vertices are built as integer lattice points divided once by the level,
    // so shared vertices of adjacent cells are bit-identical doubles.
    auto lattice_vertex = [&](const std::vector<int>& g) {
        Eigen::VectorXd v(k);
        for (int i = 0; i < k; ++i) v(i) = static_cast<double>(g[static_cast<std::size_t>(i)]) / level;
        return v;
    };
    while (true) {
        std::iota(perm.begin(), perm.end(), 0);
        do {
            std::vector<Eigen::VectorXd> verts;
            verts.reserve(static_cast<std::size_t>(k) + 1);
            std::vector<int> g = base;
            verts.push_back(lattice_vertex(g));
            for (int j = 0; j < k; ++j) {
                ++g[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])];
                verts.push_back(lattice_vertex(g));
            }
            // Positive orientation: the edge determinant has the parity of
            // the permutation, fixed by swapping the last two vertices.
            int inversions = 0;
            for (int i = 0; i < k; ++i)
                for (int j = i + 1; j < k; ++j)
                    if (perm[static_cast<std::size_t>(i)] > perm[static_cast<std::size_t>(j)]) ++inversions;
            if (inversions % 2 == 1 && k >= 2) {
                std::swap(verts[static_cast<std::size_t>(k)], verts[static_cast<std::size_t>(k - 1)]);
            }
            cells.push_back(std::move(verts));
        } while (std::next_permutation(perm.begin(), perm.end()));
        int i = k - 1;
        while (i >= 0 && base[static_cast<std::size_t>(i)] == level - 1) {
            base[static_cast<std::size_t>(i)] = 0;
            --i;
        }
        if (i < 0) break;
        ++base[static_cast<std::size_t>(i)];
    }
    return cells;
}

PolyhedralChain unit_cube_current(const OrientedPlane& eta0) {
    const int n = eta0.n(), k = eta0.k();
    // Exactly orthonormal frame aligned with the plane's orientation.
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(eta0.frame());
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, k);
    KVector rewedge = wedge_cols(q);
    if (inner(rewedge, eta0.kvector()) < 0.0) q.col(0) = -q.col(0);

    PolyhedralChain out(n, k);
    for (const auto& verts : cube_triangulation(k, 1)) {
        Cell cell;
        cell.vertices.reserve(verts.size());
        for (const auto& v : verts) cell.vertices.push_back(q * v);
        out.add(std::move(cell), 1.0);
    }
    return out;
}

std::pair<PolyhedralChain, PolyhedralChain> make_test_pair_k1(const Decomposition& dec) {
    if (dec.k() != 1) {
        throw Error(
            "make_test_pair_k1: only grade-1 decompositions are realized exactly; higher grades "
            "have no constructive counterpart here");
    }
    validate(dec);
    const int n = dec.n();
    PolyhedralChain d_chain(n, 1);
    Cell segment;
    segment.vertices.push_back(Eigen::VectorXd::Zero(n));
    Eigen::VectorXd eta0_vec(n);
    for (int i = 0; i < n; ++i) eta0_vec(i) = dec.eta0.kvector()[static_cast<std::size_t>(i)];
    segment.vertices.push_back(eta0_vec);
    d_chain.add(std::move(segment), 1.0);

    PolyhedralChain s_chain(n, 1);
    Eigen::VectorXd position = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < dec.d(); ++i) {
        const auto& [m, eta] = dec.atoms[static_cast<std::size_t>(i)];
        Eigen::VectorXd next = position;
        for (int j = 0; j < n; ++j) next(j) += m * eta.kvector()[static_cast<std::size_t>(j)];
        // The decomposition identity puts the final vertex at eta0; snap it
        // exactly so the boundaries cancel in canonical form.
        if (i == dec.d() - 1) next = eta0_vec;
        Cell piece;
        piece.vertices.push_back(position);
        piece.vertices.push_back(next);
        s_chain.add(std::move(piece), 1.0);
        position = next;
    }
    return {std::move(s_chain), std::move(d_chain)};
}

double verify_aue(const GeometricIntegrand& psi, double c, const PolyhedralChain& s,
                  const PolyhedralChain& d) {
    if (!chains_equal(boundary(s), boundary(d), 1e-9)) {
        throw Error("verify_aue: boundaries of the test pair differ");
    }
    return energy(psi, s) - energy(psi, d) - c * (mass(s) - mass(d));
}

}  // namespace aniso
