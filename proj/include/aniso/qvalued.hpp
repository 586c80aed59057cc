#pragma once

#include "aniso/currents.hpp"

namespace aniso {

/// Unordered Q-tuple of points in R^m, counted with multiplicity.
struct QPoint {
    std::vector<Eigen::VectorXd> points;

    int q() const { return static_cast<int>(points.size()); }
    int m() const { return points.empty() ? 0 : static_cast<int>(points.front().size()); }
};

/// Minimum total cost of a perfect matching on a square cost matrix, by the
/// shortest-augmenting-path method with potentials (O(Q^3)); ties resolve to
/// the lowest index, so results are deterministic.
double assignment_min_cost(const std::vector<std::vector<double>>& cost);

/// Optimal-matching metric on unordered tuples:
/// min over pairings of sqrt(sum of squared distances).
double metric_G(const QPoint& a, const QPoint& b);

/// An affine sheet x -> a + L x with a in R^m and L in R^(m x k).
struct AffineSheet {
    Eigen::VectorXd a;
    Eigen::MatrixXd l;

    Eigen::VectorXd at(const Eigen::VectorXd& x) const { return a + l * x; }
};

/// Shared simplicial structure of [0,1]^k at a subdivision level.
class CubeComplex {
public:
    CubeComplex(int k, int level);

    int k() const { return k_; }
    int level() const { return level_; }
    const std::vector<std::vector<Eigen::VectorXd>>& cells() const { return cells_; }
    std::size_t cell_count() const { return cells_.size(); }

    /// Index of a cell containing x (deterministic on faces).
    int find_cell(const Eigen::VectorXd& x) const;

    /// True when all vertices of the given facet of a cell lie on the cube
    /// boundary.
    bool facet_on_boundary(const std::vector<Eigen::VectorXd>& facet) const;

private:
    int k_;
    int level_;
    std::vector<std::vector<Eigen::VectorXd>> cells_;
};

/// Piecewise-affine Q-valued function on the subdivided unit cube: per cell,
/// Q affine sheets. Continuity asks the multisets of sheet values from
/// adjacent cells to agree on shared faces.
struct QFunction {
    int k = 0;
    int m = 0;
    int q = 0;
    int level = 1;
    std::vector<std::vector<AffineSheet>> sheets;  // per cell, q entries

    const CubeComplex& complex() const;
};

/// Affine Q-multigraph h(x) = sum_j Q_j [a_j + L_j x] with distinct a_j.
struct AffineMultigraph {
    int k = 0;
    int m = 0;
    struct Group {
        int count = 0;  // Q_j
        Eigen::VectorXd a;
        Eigen::MatrixXd l;
    };
    std::vector<Group> groups;

    int q() const;
    void validate() const;
    QPoint eval(const Eigen::VectorXd& x) const;
};

/// Multiset of sheet values at x, taken from the cell containing x. On faces
/// every containing cell yields the same multiset when the continuity
/// invariant holds.
QPoint eval_q(const QFunction& f, const Eigen::VectorXd& x);

/// Multiset of the sheet gradients of a cell; constant per cell.
std::vector<Eigen::MatrixXd> differential_q(const QFunction& f, int cell);

/// Worst face-agreement residual of the continuity invariant, measured by
/// metric_G at shared-face vertices and barycenters.
double continuity_residual(const QFunction& f);

/// Lifted current of the graph of f in R^(k+m): one positively oriented cell
/// per (cell, sheet), multiplicity +1. Lifted vertices are clustered per
/// lattice vertex so shared faces cancel exactly in canonical form.
/// Throws when the continuity invariant fails.
PolyhedralChain graph_current(const QFunction& f);

/// Mass of the graph current computed without lifting:
/// sum over cells of vol * sum over sheets of sqrt(det(I + L'L)).
double area_formula_mass(const QFunction& f);

/// Q-energy sum over cells of vol * sum over sheets of psi(L); equals the
/// anisotropic energy of the graph current.
double q_energy(const QIntegrand& f_q, const QFunction& f);

/// Expansion of a multigraph into a Q-function on the given subdivision.
QFunction expand_multigraph(const AffineMultigraph& h, int level);

/// Boundary-validated pair (f, h): f agrees with h on the cube boundary,
/// checked by metric_G at boundary-face vertices and barycenters; on success
/// the graph currents have equal boundaries under the shared triangulation.
/// Strict mode additionally requires a per-sheet matching on every boundary
/// facet: each sheet of f must coincide with a distinct sheet of h across the
/// whole facet, which pins down branching configurations the multiset check
/// cannot see.
struct GraphTestPair {
    QFunction f;
    QFunction h_expanded;
    AffineMultigraph h;
};
GraphTestPair make_graph_test_pair(const QFunction& f, const AffineMultigraph& h,
                                   bool strict = false);

/// Energy-gap of a graph test pair:
///   gap = E(f) - E(h) - c (M(G_f) - M(G_h)).
double verify_uqc(const QIntegrand& f_q, double c, const GraphTestPair& pair);

/// Random competitor pinned to h on the boundary: per group, sheets are
/// vertex-interpolated perturbations of the group's affine map, kept
/// separated so no branching occurs; always validates as a test pair.
QFunction random_q_function(int k, int m, int q, int level, double lipschitz_bound,
                            const AffineMultigraph& h, std::uint64_t seed);

/// Random multigraph with the requested number of sheets.
AffineMultigraph random_multigraph(int k, int m, int q, Rng& rng);

}  // namespace aniso
