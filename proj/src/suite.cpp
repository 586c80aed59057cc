#include "aniso/suite.hpp"

#include <sstream>

#include "aniso/parallel.hpp"

namespace aniso {

namespace {

struct TrialOutcome {
    double upc_gap = 0.0;
    double aue_gap = 0.0;
    bool aue_ran = false;
    double uqc_gap = 0.0;
    double identity_error = 0.0;
    Json witness;  // set when the trial violates
};

}  // namespace

SuiteOutcome equivalence_suite(const GeometricIntegrand& psi, const SuiteConfig& config) {
    const int n = psi.n(), k = psi.k();
    if (config.trials < 1) throw Error("equivalence_suite: trials must be >= 1");
    std::vector<TrialOutcome> trials(static_cast<std::size_t>(config.trials));

    parallel_for(config.trials, [&](int t) {
        TrialOutcome& out = trials[static_cast<std::size_t>(t)];
        std::uint64_t sub = Rng::derive(config.seed, static_cast<std::uint64_t>(t));
        Rng rng(sub);

        // (a) UPC instance gap on a random decomposition.
        int d = 2 + static_cast<int>(rng.next_u64() % 3);
        Decomposition dec = random_decomposition(n, k, d, Rng::derive(sub, 1));
        out.upc_gap = check_instance(psi, config.c, dec);

        // (b) The polyhedral pair built from that decomposition (grade 1).
        if (k == 1) {
            auto [s, flat] = make_test_pair_k1(dec);
            out.aue_gap = verify_aue(psi, config.c, s, flat);
            out.aue_ran = true;
            out.identity_error = std::fabs(out.aue_gap - out.upc_gap);
        }

        // (c) Q-graph gap on an independently sampled test pair.
        int q = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(config.max_q));
        int level = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(config.max_level));
        AffineMultigraph h = random_multigraph(k, n - k, q, rng);
        QFunction f = random_q_function(k, n - k, q, level, 1.0, h, Rng::derive(sub, 2));
        GraphTestPair pair = make_graph_test_pair(f, h);
        QIntegrand q_integrand(q, ClassicalIntegrand(psi));
        out.uqc_gap = verify_uqc(q_integrand, config.c, pair);

        if (out.upc_gap < kGapThreshold) {
            out.witness = Json{{"trial", t}, {"decomposition", to_json(dec)}};
        }
    }, config.threads);

    SuiteOutcome outcome;
    Json rows = Json::array();
    Json first_witness = nullptr;
    for (int t = 0; t < config.trials; ++t) {
        const TrialOutcome& out = trials[static_cast<std::size_t>(t)];
        outcome.worst_upc_gap = std::min(outcome.worst_upc_gap, out.upc_gap);
        outcome.worst_uqc_gap = std::min(outcome.worst_uqc_gap, out.uqc_gap);
        outcome.max_identity_error = std::max(outcome.max_identity_error, out.identity_error);
        if (out.upc_gap < kGapThreshold) ++outcome.upc_violations;
        if (out.uqc_gap < kGapThreshold) ++outcome.uqc_violations;
        if (out.aue_ran) {
            outcome.worst_aue_gap = std::min(outcome.worst_aue_gap, out.aue_gap);
            if (out.aue_gap < kGapThreshold) ++outcome.aue_violations;
        }
        if (!out.witness.is_null() && first_witness.is_null()) first_witness = out.witness;
        rows.push_back(Json{{"trial", t},
                            {"upc_gap", out.upc_gap},
                            {"aue_gap", out.aue_ran ? Json(out.aue_gap) : Json(nullptr)},
                            {"uqc_gap", out.uqc_gap},
                            {"identity_error", out.aue_ran ? Json(out.identity_error) : Json(nullptr)}});
    }

    // A violation of (b) or (c) without a matching violation of (a) breaks
    // the gap identities the library is built on.
    bool upc_clean = outcome.upc_violations == 0;
    outcome.defect = upc_clean && (outcome.aue_violations > 0 || outcome.uqc_violations > 0);
    outcome.defect = outcome.defect || outcome.max_identity_error > 1e-10;
    outcome.pass = upc_clean && outcome.aue_violations == 0 && outcome.uqc_violations == 0 &&
                   !outcome.defect;

    outcome.report = Json{
        {"command", "suite equivalence"},
        {"integrand", psi.name()},
        {"c", config.c},
        {"seed", config.seed},
        {"trials", config.trials},
        {"checks",
         Json{{"upc_instance",
               Json{{"inequality",
                     "sum_i m_i Psi(eta_i) - Psi(eta_0) >= c (sum_i m_i |eta_i| - |eta_0|)"},
                    {"worst_gap", outcome.worst_upc_gap},
                    {"violations", outcome.upc_violations}}},
              {"polyhedral_pair",
               Json{{"inequality", "E(S) - E(D) >= c (M(S) - M(D))"},
                    {"worst_gap", outcome.worst_aue_gap},
                    {"violations", outcome.aue_violations},
                    {"max_identity_error", outcome.max_identity_error}}},
              {"q_graph_pair",
               Json{{"inequality", "E(f) - E(h) >= c (M(G_f) - M(G_h))"},
                    {"worst_gap", outcome.worst_uqc_gap},
                    {"violations", outcome.uqc_violations}}}}},
        {"pass", outcome.pass},
        {"library_defect", outcome.defect},
        {"witness", first_witness},
        {"trials_detail", std::move(rows)}};
    return outcome;
}

std::string suite_csv(const SuiteOutcome& outcome, const std::string& integrand_name,
                      const SuiteConfig& config) {
    std::ostringstream out;
    out << "command,integrand,c,seed,trials,worst_upc_gap,worst_aue_gap,worst_uqc_gap,"
           "max_identity_error,violations,status\n";
    out.precision(17);
    int violations = outcome.upc_violations + outcome.aue_violations + outcome.uqc_violations;
    out << "suite_equivalence," << integrand_name << "," << config.c << "," << config.seed << ","
        << config.trials << "," << outcome.worst_upc_gap << "," << outcome.worst_aue_gap << ","
        << outcome.worst_uqc_gap << "," << outcome.max_identity_error << "," << violations << ","
        << (outcome.pass ? "pass" : (outcome.defect ? "defect" : "counterexample")) << "\n";
    return out.str();
}

}  // namespace aniso
