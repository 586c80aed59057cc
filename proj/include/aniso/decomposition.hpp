#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "aniso/exterior.hpp"
#include "aniso/integrand.hpp"
#include "aniso/rng.hpp"

namespace aniso {

enum class OrientationMode { any, positive };

/// A decomposition eta_0 = sum_i m_i eta_i of a unit simple k-vector into
/// positively weighted unit simple k-vectors; the unit of UPC testing.
struct Decomposition {
    OrientedPlane eta0;
    std::vector<std::pair<double, OrientedPlane>> atoms;  // (m_i, eta_i), m_i > 0

    int n() const { return eta0.n(); }
    int k() const { return eta0.k(); }
    int d() const { return static_cast<int>(atoms.size()); }

    double weight_sum() const {
        double s = 0.0;
        for (const auto& [m, eta] : atoms) s += m;
        return s;
    }
};

/// Checks the defining identity sum m_i eta_i = eta_0 within tol, positive
/// weights, and unit simple atoms. Throws on violation.
void validate(const Decomposition& dec, double tol = 1e-9);

/// Positive orientation of every atom against the reference plane; throws in
/// positive mode when violated.
bool positively_oriented(const Decomposition& dec);

/// UPC instance gap:
///   gap = sum_i m_i Psi(eta_i) - Psi(eta_0) - c (sum_i m_i |eta_i| - |eta_0|).
/// gap >= 0 means the instance is consistent with UPC(c). The bracket equals
/// sum_i m_i - 1 and is never negative.
double check_instance(const GeometricIntegrand& psi, double c, const Decomposition& dec,
                      OrientationMode mode = OrientationMode::any);

/// Uniform random unit simple k-vector: wedge of a QR-orthonormalized
/// Gaussian n x k frame (rotation invariant).
OrientedPlane random_plane(int n, int k, Rng& rng);

/// Random valid decomposition with d atoms. Draws atoms and weights, retries
/// until the weighted sum is simple with norm > 0.1, then rescales so the
/// normalized sum is the reference plane. Positive mode reflects atoms
/// against the tentative reference before the simplicity retry.
Decomposition random_decomposition(int n, int k, int d, std::uint64_t seed,
                                   OrientationMode mode = OrientationMode::any,
                                   int retry_budget = 10000);

/// Fits gap(c) = A - c * B through check_instance values at the given c's and
/// requires an exact affine fit (residual < 1e-10); B = sum m_i - 1 >= 0.
/// This makes the closure property testable: gap >= 0 for all c < c0 extends
/// to c0 by continuity of an affine function.
std::pair<double, double> gap_affinity_check(const GeometricIntegrand& psi,
                                             const Decomposition& dec,
                                             std::span<const double> c_list);

}  // namespace aniso
