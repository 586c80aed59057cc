#pragma once

#include "aniso/caratheodory.hpp"
#include "aniso/decomposition.hpp"

namespace aniso {

/// A simple k-vector with exact rational frame and coefficients, carried at
/// its natural rational scale (unit only after float normalization).
struct RationalSimpleKVector {
    MatQ frame;        // n x k rational frame
    KVectorQ kvector;  // wedge of the frame columns, nonzero

    KVector float_raw() const { return to_float(kvector); }
    KVector float_unit() const { return normalized(to_float(kvector)); }
};

/// Rational simple approximation of a plane: continued-fraction rounding of
/// the plane's frame, with the denominator bound doubled until the wedge
/// lands within eps of the target and pairs positively with it.
RationalSimpleKVector rational_simple_approx(const OrientedPlane& eta, double eps);

/// Per-output record of every bound the approximation promises: distance
/// bounds, atom-count bound, orientation positivity, and the exact identity.
struct ApproximationCertificate {
    double eps = 0.0;
    double eta0_raw_dist = 0.0;   // |raw rational eta0 - eta0|
    double eta0_unit_dist = 0.0;  // |normalized rational eta0 - eta0|
    double eta0_bound = 0.0;      // eps / 2
    std::vector<double> atom_dist;     // |raw rational eta_i - eta_i|, i < d
    std::vector<double> atom_bound;    // eps / (2 d m_i), i < d
    int d = 0;
    int extra_atoms = 0;      // N - d
    int max_extra = 0;        // C(n,k)
    bool positivity_ok = false;   // inner(eta_i~, eta0~) > 0 exactly, all i
    bool exact_identity = false;  // rational residual identically zero

    bool ok() const;
};

struct RationalAtom {
    Rational weight;  // exact; the first d_original entries carry the input weights
    RationalSimpleKVector plane;
};

/// Rational-slope decomposition eta0~ = sum_i m_i eta_i~ holding exactly in
/// rational arithmetic at the stored scale. The first d_original atoms
/// approximate the input atoms with their original weights; at most C(n,k)
/// further atoms absorb the residual.
struct RationalDecomposition {
    RationalSimpleKVector eta0;
    std::vector<RationalAtom> atoms;
    int d_original = 0;
    ApproximationCertificate cert;

    int count() const { return static_cast<int>(atoms.size()); }
};

/// Constructive rational approximation of a positively oriented
/// decomposition:
///   1. pick a rational eta0~ just outside the unit sphere along eta0, so
///      inner(eta0~ - eta0, eta0) > 0 holds exactly;
///   2. approximate each atom tightly enough that the residual keeps a
///      positive pairing with eta0~;
///   3. express the exact rational residual as a positive rational
///      combination of exactly-unit rational simple vectors (signed wedges
///      of rational orthogonal bases), found by an exact-arithmetic LP;
///   4. Caratheodory-reduce the new atoms to at most C(n,k).
/// All promised bounds are evaluated into the certificate; the defining
/// identity is exact in rational arithmetic.
RationalDecomposition approximate_decomposition(const Decomposition& dec, double eps);

/// Exact residual eta0~ - sum m_i eta_i~ of a rational decomposition.
KVectorQ rational_residual(const RationalDecomposition& rd);

/// Rational orthogonal matrix from the Cayley transform of a seeded rational
/// skew matrix; columns are exactly orthonormal.
MatQ rational_rotation(int n, std::uint64_t seed);

}  // namespace aniso
