#pragma once

#include <optional>
#include <string>

#include "aniso/decomposition.hpp"
#include "aniso/simplex.hpp"

namespace aniso {

/// Gap threshold separating genuine UPC violations from float noise at
/// unit-scale data.
inline constexpr double kGapThreshold = -1e-9;

struct LpDecomposition {
    double lp_gap = 0.0;            // optimum - G(eta0), always <= 0
    std::vector<double> weights;    // aligned with the atom set
    int support = 0;                // nonzero weights at the basic optimum
    long iterations = 0;
    bool unbounded = false;         // cost cone held a negative circuit; the
                                    // weights then hold a finite violating step
};

/// Minimizes sum_i m_i G(eta_i) over m >= 0 subject to sum_i m_i eta_i = eta0,
/// where G(eta) = Psi(eta) - c |eta|. The atom set must contain eta0, which
/// makes the program feasible; a basic optimum uses at most C(n,k) atoms.
/// lp_gap < kGapThreshold yields a genuine counterexample decomposition.
LpDecomposition lp_min_decomposition(const GeometricIntegrand& psi, double c,
                                     const OrientedPlane& eta0,
                                     std::span<const OrientedPlane> atoms,
                                     OrientationMode mode = OrientationMode::any);

/// Decomposition read off an LP weight vector (zero weights dropped).
Decomposition decomposition_from_weights(const OrientedPlane& eta0,
                                         std::span<const OrientedPlane> atoms,
                                         std::span<const double> weights);

struct SearchParams {
    int n = 3;
    int k = 1;
    int d_min = 2;
    int d_max = 4;
    OrientationMode mode = OrientationMode::any;
    int refine_steps = 40;
    double refine_scale = 0.25;
};

struct SearchResult {
    std::optional<Decomposition> witness;
    double gap = 0.0;
    std::uint64_t samples_used = 0;
};

/// Randomized search for a violating decomposition: samples decompositions,
/// then runs a local weight-perturbation descent on each candidate. Returns
/// the first witness with gap < kGapThreshold, or an empty result after the
/// budget. Samples shard across workers in chunks with lowest-index merge,
/// so the result is deterministic for a fixed seed at any thread count.
SearchResult search_counterexample(const GeometricIntegrand& psi, double c, std::uint64_t budget,
                                   const SearchParams& params, std::uint64_t seed,
                                   int threads = 0);

enum class UpcMode { verified_instance, counterexample, sampled_certificate };

struct SampleStats {
    int n_dirs = 0;
    int n_atoms = 0;
    std::uint64_t seed = 0;
    OrientationMode mode = OrientationMode::any;
    int max_support = 0;
    long lp_iterations = 0;
};

struct UpcReport {
    UpcMode mode = UpcMode::sampled_certificate;
    double c = 0.0;
    double worst_gap = 0.0;
    std::optional<Decomposition> witness;
    SampleStats stats;
    std::string caveat;
};

/// LP certification over sampled reference planes and sampled atom sets.
/// A sampled certificate is evidence, not a proof; the report says so.
UpcReport certify_sampled(const GeometricIntegrand& psi, double c, int n_dirs, int n_atoms,
                          std::uint64_t seed, OrientationMode mode = OrientationMode::any,
                          int threads = 0);

/// Heuristic location of the largest c passing certify_sampled, by bisection.
/// Labelled heuristic: inherits the sampled certificate's caveat.
double locate_c_heuristic(const GeometricIntegrand& psi, int n_dirs, int n_atoms,
                          std::uint64_t seed, double c_hi = 4.0, double tol = 1e-3,
                          OrientationMode mode = OrientationMode::any);

const char* to_string(UpcMode mode);
const char* to_string(OrientationMode mode);

}  // namespace aniso
