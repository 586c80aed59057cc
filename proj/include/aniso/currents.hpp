#pragma once

#include <utility>
#include <vector>

#include "aniso/decomposition.hpp"

namespace aniso {

/// Oriented k-simplex in R^n: k+1 affinely independent vertices, orientation
/// given by the vertex order.
struct Cell {
    std::vector<Eigen::VectorXd> vertices;

    int k() const { return static_cast<int>(vertices.size()) - 1; }
    int n() const { return vertices.empty() ? 0 : static_cast<int>(vertices.front().size()); }
};

/// Weighted sum of oriented simplices: the computational stand-in for a
/// polyhedral k-current. Chains built by this library share triangulations,
/// so canonical comparison is exact on vertex data.
class PolyhedralChain {
public:
    PolyhedralChain() = default;
    PolyhedralChain(int n, int k) : n_(n), k_(k) {}

    int n() const { return n_; }
    int k() const { return k_; }
    bool empty() const { return cells_.empty(); }
    std::size_t size() const { return cells_.size(); }

    void add(Cell cell, double multiplicity);
    const std::vector<std::pair<Cell, double>>& cells() const { return cells_; }

private:
    int n_ = 0;
    int k_ = 0;
    std::vector<std::pair<Cell, double>> cells_;
};

/// Edge-vector matrix (v_1 - v_0, ..., v_k - v_0) of a cell.
Eigen::MatrixXd edge_matrix(const Cell& cell);

/// k-volume via the Gram determinant of the edge vectors, divided by k!.
double cell_volume(const Cell& cell);

/// Unit tangent plane of a cell: normalized wedge of the edge vectors.
OrientedPlane tangent(const Cell& cell);

/// Alternating-sign face sum. Faces are canonicalized (vertices sorted, sign
/// from permutation parity) and merged, so the chain-complex identity
/// boundary(boundary(T)) = 0 holds exactly.
PolyhedralChain boundary(const PolyhedralChain& t);

/// Canonicalized comparison: merged coincident cells with multiplicity
/// difference at most tol. Compares triangulations, not geometric supports;
/// a refined and an unrefined copy of the same polytope differ.
bool chains_equal(const PolyhedralChain& a, const PolyhedralChain& b, double tol);

/// Sum of |multiplicity| * volume over the cells.
double mass(const PolyhedralChain& t);

/// Finite signed atomic measure on the oriented Grassmannian. Atoms whose
/// planes coincide within the merge tolerance are summed; zero atoms drop.
class DiscreteGrassMeasure {
public:
    static constexpr double kMergeTol = 1e-9;

    DiscreteGrassMeasure() = default;
    explicit DiscreteGrassMeasure(std::vector<std::pair<OrientedPlane, double>> atoms);

    const std::vector<std::pair<OrientedPlane, double>>& atoms() const { return atoms_; }
    double total_weight() const;

    friend DiscreteGrassMeasure operator-(const DiscreteGrassMeasure& a,
                                          const DiscreteGrassMeasure& b);

private:
    std::vector<std::pair<OrientedPlane, double>> atoms_;
};

/// Push-forward of the weighted area measure to the Grassmannian: one atom
/// (tangent, multiplicity * volume) per cell, canonically merged.
DiscreteGrassMeasure gaussian_image(const PolyhedralChain& t);

/// Total-variation distance of two discrete measures: sum of |weights| of
/// the canonical difference. Purely atomic; no transport metric.
double tv_distance(const DiscreteGrassMeasure& mu, const DiscreteGrassMeasure& nu);

/// Anisotropic energy, cellwise: sum multiplicity * volume * Psi(tangent).
double energy(const GeometricIntegrand& psi, const PolyhedralChain& t);

/// The same energy as the pairing of Psi with the Gaussian image; agrees
/// with the cellwise sum and is cross-checked in tests.
double energy_via_gaussian(const GeometricIntegrand& psi, const PolyhedralChain& t);

/// Flat unit k-cube current in the plane of eta0: the standard simplicial
/// subdivision (k! simplices), every tangent equal to eta0, mass 1.
PolyhedralChain unit_cube_current(const OrientedPlane& eta0);

/// For a grade-1 decomposition, the segment pair realizing it exactly:
/// D = [0, eta0], S the polyline through the partial sums of m_i eta_i.
/// boundary(S) = boundary(D) exactly and gaussian_image(S) = sum m_i at eta_i.
std::pair<PolyhedralChain, PolyhedralChain> make_test_pair_k1(const Decomposition& dec);

/// Energy-gap of a test pair:
///   gap = E(S) - E(D) - c (M(S) - M(D)),
/// after verifying boundary(S) = boundary(D). For k=1 pairs built from a
/// decomposition this equals the check_instance gap of that decomposition.
double verify_aue(const GeometricIntegrand& psi, double c, const PolyhedralChain& s,
                  const PolyhedralChain& d);

/// Simplicial subdivision of [0,1]^k at level L into L^k * k! positively
/// oriented simplices, listed deterministically. Vertices of each simplex
/// are ordered so the edge determinant is positive.
std::vector<std::vector<Eigen::VectorXd>> cube_triangulation(int k, int level);

}  // namespace aniso
