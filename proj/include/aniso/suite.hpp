#pragma once

#include "aniso/serialization.hpp"

namespace aniso {

/// Cross-module consistency runner. Per trial it draws one decomposition and
/// one graph test pair, then checks
///   (a) the UPC instance gap,
///   (b) for grade 1, the polyhedral test-pair gap of the same decomposition
///       (the two must agree to 1e-10),
///   (c) the Q-graph energy gap of the sampled pair.
/// A negative (a) gap is a counterexample to UPC(c). A certified-claim
/// integrand passing (a) on every trial but failing (b) or (c) is reported
/// as a library defect, since the gap identities forbid it.
struct SuiteConfig {
    double c = 1.0;
    std::uint64_t seed = 0;
    int trials = 200;
    int threads = 0;
    int max_q = 3;
    int max_level = 2;
};

struct SuiteOutcome {
    bool pass = false;             // no violations of any kind
    bool defect = false;           // internal inconsistency between checks
    int upc_violations = 0;
    int aue_violations = 0;
    int uqc_violations = 0;
    double worst_upc_gap = 0.0;
    double worst_aue_gap = 0.0;
    double worst_uqc_gap = 0.0;
    double max_identity_error = 0.0;  // |(a) - (b)| over grade-1 trials
    Json report;                      // full machine-readable report
};

SuiteOutcome equivalence_suite(const GeometricIntegrand& psi, const SuiteConfig& config);

/// One-line CSV summary (with header) for a suite outcome.
std::string suite_csv(const SuiteOutcome& outcome, const std::string& integrand_name,
                      const SuiteConfig& config);

}  // namespace aniso
