// Batch front-end: anisotropic energies, polyconvexity certification,
// rational-slope approximation, and Q-graph gap checks, wired into
// reproducible experiments with machine-readable reports.
//
// Exit codes: 0 = property/certificate holds; 1 = counterexample or
// violation found (report carries the witness); 2 = usage or input error.

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

#include "aniso/parallel.hpp"
#include "aniso/suite.hpp"

namespace {

using aniso::Json;

struct OutputOptions {
    std::string out_path;
    std::string format = "json";
};

void add_output_flags(CLI::App* cmd, OutputOptions& opts) {
    cmd->add_option("--out", opts.out_path, "write the report to this path instead of stdout");
    cmd->add_option("--format", opts.format, "report format on stdout")
        ->check(CLI::IsMember({"json", "csv"}));
}

std::string csv_escape(const Json& v) {
    std::ostringstream out;
    out.precision(17);
    if (v.is_number_float()) {
        out << v.get<double>();
    } else if (v.is_string()) {
        out << v.get<std::string>();
    } else {
        out << v.dump();
    }
    std::string s = out.str();
    if (s.find_first_of(",\"\n") != std::string::npos) {
        std::string quoted = "\"";
        for (char c : s) {
            if (c == '"') quoted += '"';
            quoted += c;
        }
        quoted += '"';
        return quoted;
    }
    return s;
}

/// CSV summary: the scalar report fields become one header and one value
/// row. Nested values and nulls are dropped, so a command's column set does
/// not depend on the outcome.
std::string csv_summary(const Json& report) {
    std::string header, row;
    for (auto it = report.begin(); it != report.end(); ++it) {
        if (it.value().is_object() || it.value().is_array() || it.value().is_null()) continue;
        if (!header.empty()) {
            header += ",";
            row += ",";
        }
        header += it.key();
        row += csv_escape(it.value());
    }
    return header + "\n" + row + "\n";
}

void emit(const Json& report, const OutputOptions& opts) {
    if (!opts.out_path.empty()) {
        aniso::write_json_file(opts.out_path, report);
    }
    if (opts.format == "csv") {
        std::cout << csv_summary(report);
    } else if (opts.out_path.empty()) {
        std::cout << report.dump(2) << "\n";
    }
}

aniso::GeometricIntegrand load_integrand(const std::string& path) {
    return aniso::integrand_from_json(aniso::load_json_file(path));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"anisotropic variational toolkit"};
    app.require_subcommand(1);

    int threads = 0;
    app.add_option("--threads", threads, "worker threads (env ANISO_THREADS, default: hardware)");

    int exit_code = 0;

    // ---- upc {verify, search, certify} ------------------------------------
    auto* upc = app.add_subcommand("upc", "uniform polyconvexity checks");
    upc->require_subcommand(1);

    struct {
        std::string integrand, decomposition;
        double c = 1.0;
        bool positive = false;
        OutputOptions out;
    } verify_opts;
    auto* upc_verify = upc->add_subcommand("verify", "gap of one decomposition instance");
    upc_verify->add_option("--integrand", verify_opts.integrand)->required();
    upc_verify->add_option("--decomposition", verify_opts.decomposition)->required();
    upc_verify->add_option("--c", verify_opts.c)->required();
    upc_verify->add_flag("--positive", verify_opts.positive, "require positive orientation");
    add_output_flags(upc_verify, verify_opts.out);
    upc_verify->callback([&]() {
        auto psi = load_integrand(verify_opts.integrand);
        auto dec = aniso::decomposition_from_json(aniso::load_json_file(verify_opts.decomposition));
        auto mode = verify_opts.positive ? aniso::OrientationMode::positive
                                         : aniso::OrientationMode::any;
        double gap = aniso::check_instance(psi, verify_opts.c, dec, mode);
        bool holds = gap >= aniso::kGapThreshold;
        Json report{{"command", "upc verify"},
                    {"mode", holds ? "verified_instance" : "counterexample"},
                    {"integrand", psi.name()},
                    {"c", verify_opts.c},
                    {"gap", gap},
                    {"inequality",
                     "sum_i m_i Psi(eta_i) - Psi(eta_0) >= c (sum_i m_i |eta_i| - |eta_0|)"},
                    {"holds", holds}};
        emit(report, verify_opts.out);
        exit_code = holds ? 0 : 1;
    });

    struct {
        std::string integrand;
        double c = 1.0;
        std::uint64_t budget = 10000;
        std::uint64_t seed = 0;
        int n = 0, k = 0, d_min = 2, d_max = 4;
        bool positive = false;
        OutputOptions out;
    } search_opts;
    auto* upc_search = upc->add_subcommand("search", "randomized counterexample search");
    upc_search->add_option("--integrand", search_opts.integrand)->required();
    upc_search->add_option("--c", search_opts.c)->required();
    upc_search->add_option("--budget", search_opts.budget);
    upc_search->add_option("--seed", search_opts.seed);
    upc_search->add_option("--n", search_opts.n, "ambient dimension (default: integrand's)");
    upc_search->add_option("--k", search_opts.k, "grade (default: integrand's)");
    upc_search->add_option("--d-min", search_opts.d_min);
    upc_search->add_option("--d-max", search_opts.d_max);
    upc_search->add_flag("--positive", search_opts.positive);
    add_output_flags(upc_search, search_opts.out);
    upc_search->callback([&]() {
        auto psi = load_integrand(search_opts.integrand);
        aniso::SearchParams params;
        params.n = search_opts.n > 0 ? search_opts.n : psi.n();
        params.k = search_opts.k > 0 ? search_opts.k : psi.k();
        params.d_min = search_opts.d_min;
        params.d_max = search_opts.d_max;
        params.mode = search_opts.positive ? aniso::OrientationMode::positive
                                           : aniso::OrientationMode::any;
        auto result = aniso::search_counterexample(psi, search_opts.c, search_opts.budget, params,
                                                   search_opts.seed, threads);
        Json report{{"command", "upc search"},
                    {"integrand", psi.name()},
                    {"c", search_opts.c},
                    {"seed", search_opts.seed},
                    {"budget", search_opts.budget},
                    {"samples_used", result.samples_used},
                    {"found", result.witness.has_value()},
                    {"gap", result.witness ? Json(result.gap) : Json(nullptr)},
                    {"witness", result.witness ? aniso::to_json(*result.witness) : Json(nullptr)}};
        emit(report, search_opts.out);
        exit_code = result.witness ? 1 : 0;
    });

    struct {
        std::string integrand;
        double c = 1.0;
        int dirs = 50, atoms = 200;
        std::uint64_t seed = 0;
        bool positive = false;
        OutputOptions out;
    } certify_opts;
    auto* upc_certify = upc->add_subcommand("certify", "LP certificate over sampled instances");
    upc_certify->add_option("--integrand", certify_opts.integrand)->required();
    upc_certify->add_option("--c", certify_opts.c)->required();
    upc_certify->add_option("--dirs", certify_opts.dirs);
    upc_certify->add_option("--atoms", certify_opts.atoms);
    upc_certify->add_option("--seed", certify_opts.seed);
    upc_certify->add_flag("--positive", certify_opts.positive);
    add_output_flags(upc_certify, certify_opts.out);
    upc_certify->callback([&]() {
        auto psi = load_integrand(certify_opts.integrand);
        auto mode = certify_opts.positive ? aniso::OrientationMode::positive
                                          : aniso::OrientationMode::any;
        auto report = aniso::certify_sampled(psi, certify_opts.c, certify_opts.dirs,
                                             certify_opts.atoms, certify_opts.seed, mode, threads);
        Json j = aniso::to_json(report);
        j["command"] = "upc certify";
        j["integrand"] = psi.name();
        emit(j, certify_opts.out);
        exit_code = report.mode == aniso::UpcMode::counterexample ? 1 : 0;
    });

    // ---- approx rational ---------------------------------------------------
    auto* approx = app.add_subcommand("approx", "rational-slope approximation");
    approx->require_subcommand(1);
    struct {
        std::string decomposition;
        double eps = 1e-3;
        OutputOptions out;
    } approx_opts;
    auto* approx_rational =
        approx->add_subcommand("rational", "approximate a decomposition by rational planes");
    approx_rational->add_option("--decomposition", approx_opts.decomposition)->required();
    approx_rational->add_option("--eps", approx_opts.eps)->required();
    add_output_flags(approx_rational, approx_opts.out);
    approx_rational->callback([&]() {
        auto dec = aniso::decomposition_from_json(aniso::load_json_file(approx_opts.decomposition));
        auto rd = aniso::approximate_decomposition(dec, approx_opts.eps);
        Json j = aniso::to_json(rd);
        j["command"] = "approx rational";
        emit(j, approx_opts.out);
        exit_code = rd.cert.ok() ? 0 : 1;
    });

    // ---- energy polyhedral ---------------------------------------------------
    auto* energy_cmd = app.add_subcommand("energy", "anisotropic energies");
    energy_cmd->require_subcommand(1);
    struct {
        std::string chain, integrand;
        OutputOptions out;
    } energy_opts;
    auto* energy_poly = energy_cmd->add_subcommand("polyhedral", "energy of a polyhedral chain");
    energy_poly->add_option("--chain", energy_opts.chain)->required();
    energy_poly->add_option("--integrand", energy_opts.integrand)->required();
    add_output_flags(energy_poly, energy_opts.out);
    energy_poly->callback([&]() {
        auto chain = aniso::chain_from_json(aniso::load_json_file(energy_opts.chain));
        auto psi = load_integrand(energy_opts.integrand);
        double cellwise = aniso::energy(psi, chain);
        double paired = aniso::energy_via_gaussian(psi, chain);
        Json report{{"command", "energy polyhedral"},
                    {"integrand", psi.name()},
                    {"energy", cellwise},
                    {"energy_via_gaussian_image", paired},
                    {"mass", aniso::mass(chain)},
                    {"cells", chain.size()}};
        emit(report, energy_opts.out);
    });

    // ---- testpair check ------------------------------------------------------
    auto* testpair = app.add_subcommand("testpair", "polyhedral test pairs");
    testpair->require_subcommand(1);
    struct {
        std::string s_path, d_path, integrand;
        double c = 1.0;
        OutputOptions out;
    } pair_opts;
    auto* pair_check = testpair->add_subcommand("check", "energy gap of a test pair");
    pair_check->add_option("--S", pair_opts.s_path)->required();
    pair_check->add_option("--D", pair_opts.d_path)->required();
    pair_check->add_option("--integrand", pair_opts.integrand)->required();
    pair_check->add_option("--c", pair_opts.c)->required();
    add_output_flags(pair_check, pair_opts.out);
    pair_check->callback([&]() {
        auto s = aniso::chain_from_json(aniso::load_json_file(pair_opts.s_path));
        auto d = aniso::chain_from_json(aniso::load_json_file(pair_opts.d_path));
        auto psi = load_integrand(pair_opts.integrand);
        double gap = aniso::verify_aue(psi, pair_opts.c, s, d);
        bool holds = gap >= aniso::kGapThreshold;
        Json report{{"command", "testpair check"},
                    {"integrand", psi.name()},
                    {"c", pair_opts.c},
                    {"gap", gap},
                    {"inequality", "E(S) - E(D) >= c (M(S) - M(D))"},
                    {"mass_S", aniso::mass(s)},
                    {"mass_D", aniso::mass(d)},
                    {"holds", holds}};
        emit(report, pair_opts.out);
        exit_code = holds ? 0 : 1;
    });

    // ---- qgraph energy ---------------------------------------------------------
    auto* qgraph = app.add_subcommand("qgraph", "Q-valued graph computations");
    qgraph->require_subcommand(1);
    struct {
        std::string f_path, integrand;
        OutputOptions out;
    } qgraph_opts;
    auto* qgraph_energy = qgraph->add_subcommand("energy", "Q-energy and graph mass");
    qgraph_energy->add_option("--f", qgraph_opts.f_path)->required();
    qgraph_energy->add_option("--integrand", qgraph_opts.integrand)->required();
    add_output_flags(qgraph_energy, qgraph_opts.out);
    qgraph_energy->callback([&]() {
        auto f = aniso::qfunction_from_json(aniso::load_json_file(qgraph_opts.f_path));
        auto psi = load_integrand(qgraph_opts.integrand);
        aniso::QIntegrand q_integrand(f.q, aniso::ClassicalIntegrand(psi));
        double e = aniso::q_energy(q_integrand, f);
        double m_graph = aniso::mass(aniso::graph_current(f));
        Json report{{"command", "qgraph energy"},
                    {"integrand", psi.name()},
                    {"Q", f.q},
                    {"q_energy", e},
                    {"graph_mass", m_graph},
                    {"area_formula_mass", aniso::area_formula_mass(f)}};
        emit(report, qgraph_opts.out);
    });

    // ---- uqc {verify, sample} -----------------------------------------------
    auto* uqc = app.add_subcommand("uqc", "uniform quasiconvexity checks");
    uqc->require_subcommand(1);
    struct {
        std::string f_path, h_path, integrand;
        double c = 1.0;
        bool strict = false;
        OutputOptions out;
    } uqcv_opts;
    auto* uqc_verify = uqc->add_subcommand("verify", "gap of one graph test pair");
    uqc_verify->set_help_flag("--help", "print help");  // frees --h for the multigraph file
    uqc_verify->add_option("--f", uqcv_opts.f_path)->required();
    uqc_verify->add_option("--h", uqcv_opts.h_path)->required();
    uqc_verify->add_option("--integrand", uqcv_opts.integrand)->required();
    uqc_verify->add_option("--c", uqcv_opts.c)->required();
    uqc_verify->add_flag("--strict", uqcv_opts.strict,
                         "require a per-sheet boundary matching, not just multiset agreement");
    add_output_flags(uqc_verify, uqcv_opts.out);
    uqc_verify->callback([&]() {
        auto f = aniso::qfunction_from_json(aniso::load_json_file(uqcv_opts.f_path));
        auto h = aniso::multigraph_from_json(aniso::load_json_file(uqcv_opts.h_path));
        auto psi = load_integrand(uqcv_opts.integrand);
        auto pair = aniso::make_graph_test_pair(f, h, uqcv_opts.strict);
        aniso::QIntegrand q_integrand(f.q, aniso::ClassicalIntegrand(psi));
        double gap = aniso::verify_uqc(q_integrand, uqcv_opts.c, pair);
        bool holds = gap >= aniso::kGapThreshold;
        Json report{{"command", "uqc verify"},
                    {"integrand", psi.name()},
                    {"c", uqcv_opts.c},
                    {"gap", gap},
                    {"inequality", "E(f) - E(h) >= c (M(G_f) - M(G_h))"},
                    {"holds", holds}};
        emit(report, uqcv_opts.out);
        exit_code = holds ? 0 : 1;
    });

    struct {
        std::string integrand;
        double c = 1.0;
        int q = 3, level = 2, trials = 500;
        std::uint64_t seed = 0;
        OutputOptions out;
    } uqcs_opts;
    auto* uqc_sample = uqc->add_subcommand("sample", "gap statistics over sampled test pairs");
    uqc_sample->add_option("--integrand", uqcs_opts.integrand)->required();
    uqc_sample->add_option("--c", uqcs_opts.c)->required();
    uqc_sample->add_option("--Q", uqcs_opts.q, "maximum sheet count");
    uqc_sample->add_option("--level", uqcs_opts.level, "maximum subdivision level");
    uqc_sample->add_option("--trials", uqcs_opts.trials);
    uqc_sample->add_option("--seed", uqcs_opts.seed);
    add_output_flags(uqc_sample, uqcs_opts.out);
    uqc_sample->callback([&]() {
        auto psi = load_integrand(uqcs_opts.integrand);
        const int k = psi.k(), m = psi.n() - psi.k();
        std::vector<double> gaps(static_cast<std::size_t>(uqcs_opts.trials));
        aniso::parallel_for(
            uqcs_opts.trials,
            [&](int t) {
                std::uint64_t sub =
                    aniso::Rng::derive(uqcs_opts.seed, static_cast<std::uint64_t>(t));
                aniso::Rng rng(sub);
                int q =
                    1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(uqcs_opts.q));
                int level = 1 + static_cast<int>(rng.next_u64() %
                                                 static_cast<std::uint64_t>(uqcs_opts.level));
                auto h = aniso::random_multigraph(k, m, q, rng);
                auto f =
                    aniso::random_q_function(k, m, q, level, 1.0, h, aniso::Rng::derive(sub, 2));
                auto pair = aniso::make_graph_test_pair(f, h);
                aniso::QIntegrand q_integrand(q, aniso::ClassicalIntegrand(psi));
                gaps[static_cast<std::size_t>(t)] = aniso::verify_uqc(q_integrand, uqcs_opts.c, pair);
            },
            threads);
        double worst = 0.0;
        int violations = 0, worst_trial = -1;
        for (int t = 0; t < uqcs_opts.trials; ++t) {
            double gap = gaps[static_cast<std::size_t>(t)];
            if (gap < worst) {
                worst = gap;
                worst_trial = t;
            }
            if (gap < aniso::kGapThreshold) ++violations;
        }
        Json report{{"command", "uqc sample"},
                    {"integrand", psi.name()},
                    {"c", uqcs_opts.c},
                    {"seed", uqcs_opts.seed},
                    {"trials", uqcs_opts.trials},
                    {"worst_gap", worst},
                    {"worst_trial", worst_trial},
                    {"violations", violations}};
        emit(report, uqcs_opts.out);
        exit_code = violations > 0 ? 1 : 0;
    });

    // ---- suite equivalence ----------------------------------------------------
    auto* suite = app.add_subcommand("suite", "cross-module consistency suites");
    suite->require_subcommand(1);
    struct {
        std::string integrand;
        double c = 1.0;
        std::uint64_t seed = 0;
        int trials = 200;
        OutputOptions out;
    } suite_opts;
    auto* suite_eq = suite->add_subcommand(
        "equivalence", "per-trial agreement of the instance, polyhedral, and Q-graph gaps");
    suite_eq->add_option("--integrand", suite_opts.integrand)->required();
    suite_eq->add_option("--c", suite_opts.c)->required();
    suite_eq->add_option("--seed", suite_opts.seed);
    suite_eq->add_option("--trials", suite_opts.trials);
    add_output_flags(suite_eq, suite_opts.out);
    suite_eq->callback([&]() {
        auto psi = load_integrand(suite_opts.integrand);
        aniso::SuiteConfig config;
        config.c = suite_opts.c;
        config.seed = suite_opts.seed;
        config.trials = suite_opts.trials;
        config.threads = threads;
        auto outcome = aniso::equivalence_suite(psi, config);
        if (suite_opts.out.format == "csv") {
            if (!suite_opts.out.out_path.empty()) {
                aniso::write_json_file(suite_opts.out.out_path, outcome.report);
            }
            std::cout << aniso::suite_csv(outcome, psi.name(), config);
        } else {
            emit(outcome.report, suite_opts.out);
        }
        exit_code = outcome.pass ? 0 : 1;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return 0;  // --help and friends
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const aniso::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return exit_code;
}
