// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Everything runs at desk scale (n <= 6, k <= 3, Q <= 6) in a few minutes.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "aniso/suite.hpp"
#include "oracles.hpp"

using namespace aniso;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& what) {
    std::printf("criterion %2d [%s] %s\n", criterion, pass ? "PASS" : "FAIL", what.c_str());
    if (!pass) ++failures;
}

KVector random_kvector(int n, int k, Rng& rng) {
    KVector v(n, k);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = rng.gaussian();
    return v;
}

// --- criterion 1: exterior algebra identities over all (n,k), n <= 6 -------
void criterion_exterior() {
    Rng rng(101);
    bool ok = true;
    std::ostringstream detail;
    {
        // n = 1: only the scalar and top grades exist.
        KVectorQ v(1, 1, {Rational(3, 7)});
        ok = hodge_star(hodge_star(v)) == v && is_simple(to_float(v));
        if (!ok) detail << "n=1 cases failed";
    }
    for (int n = 2; n <= 6 && ok; ++n) {
        for (int j = 1; j < n && ok; ++j) {
            for (int l = 1; j + l <= n && ok; ++l) {
                auto a = random_kvector(n, j, rng);
                auto b = random_kvector(n, l, rng);
                auto ab = wedge(a, b);
                double sign = (j * l) % 2 == 0 ? 1.0 : -1.0;
                if (norm(ab - sign * wedge(b, a)) > 1e-10 * (1.0 + norm(ab))) {
                    ok = false;
                    detail << "anticommutativity failed at n=" << n;
                }
                for (int p = 1; j + l + p <= n && ok; ++p) {
                    auto c = random_kvector(n, p, rng);
                    auto left = wedge(ab, c);
                    auto right = wedge(a, wedge(b, c));
                    if (norm(left - right) > 1e-10 * (1.0 + norm(left))) {
                        ok = false;
                        detail << "associativity failed at n=" << n;
                    }
                }
            }
        }
        // Double Hodge star, exact in rational arithmetic.
        for (int q = 0; q <= n && ok; ++q) {
            KVectorQ z(n, q);
            for (std::size_t i = 0; i < z.size(); ++i) {
                z[i] = Rational(static_cast<long>(2 * i) + 1, static_cast<long>(n) + 3);
            }
            KVectorQ expected = (q * (n - q)) % 2 == 0 ? z : -z;
            if (!(hodge_star(hodge_star(z)) == expected)) {
                ok = false;
                detail << "double star sign failed at n=" << n << " q=" << q;
            }
        }
        // Simplicity classification and factor-rewedge round trips.
        for (int k = 1; k < n && ok; ++k) {
            Eigen::MatrixXd w(n, k);
            for (int i = 0; i < n; ++i)
                for (int j2 = 0; j2 < k; ++j2) w(i, j2) = rng.gaussian();
            auto xi = wedge_cols(w);
            if (!is_simple(xi)) {
                ok = false;
                detail << "frame wedge not simple at n=" << n << " k=" << k;
                break;
            }
            auto frame = factor_simple(xi);
            if (norm(wedge_cols(frame) - xi) > 1e-10 * norm(xi)) {
                ok = false;
                detail << "factor round trip failed at n=" << n << " k=" << k;
            }
        }
        if (n >= 4 && ok) {
            KVector nonsimple(n, 2);
            nonsimple[multi_index_rank(std::vector<int>{1, 2}, n)] = 1.0;
            nonsimple[multi_index_rank(std::vector<int>{3, 4}, n)] = 1.0;
            KVector pencil(n, 2);
            pencil[multi_index_rank(std::vector<int>{1, 2}, n)] = 1.0;
            pencil[multi_index_rank(std::vector<int>{1, 3}, n)] = 1.0;
            if (is_simple(nonsimple) || !is_simple(pencil)) {
                ok = false;
                detail << "canonical simplicity cases failed at n=" << n;
            }
        }
    }
    report(1, ok,
           ok ? "exterior algebra: wedge laws, double star sign, simplicity, factorization"
              : detail.str());
}

// --- criterion 2: assignment metric vs factorial enumeration ---------------
void criterion_metric() {
    Rng rng(202);
    double worst = 0.0;
    for (int q = 2; q <= 6; ++q) {
        for (int trial = 0; trial < 1000; ++trial) {
            int m = 1 + trial % 3;
            std::vector<Eigen::VectorXd> p, s;
            for (int i = 0; i < q; ++i) {
                Eigen::VectorXd a(m), b(m);
                for (int j = 0; j < m; ++j) {
                    a(j) = rng.gaussian();
                    b(j) = rng.gaussian();
                }
                p.push_back(std::move(a));
                s.push_back(std::move(b));
            }
            QPoint pa, pb;
            pa.points = p;
            pb.points = s;
            double fast = metric_G(pa, pb);
            double brute = std::sqrt(oracles::assignment_by_enumeration(p, s));
            worst = std::max(worst, std::fabs(fast - brute));
        }
    }
    std::ostringstream what;
    what << "assignment metric equals Q! enumeration, Q in 2..6, worst |diff| = " << worst;
    report(2, worst <= 1e-12, what.str());
}

// --- criterion 3: area formula and energy identities on random graphs ------
void criterion_area_formula() {
    Rng rng(303);
    double worst_mass = 0.0, worst_energy = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        int k = 1 + trial % 3;
        int m = 1 + trial % 3;
        int q = 1 + trial % 3;
        int level = 1 + trial % 2;
        auto h = random_multigraph(k, m, q, rng);
        auto f = random_q_function(k, m, q, level, 1.0, h,
                                   Rng::derive(303, static_cast<std::uint64_t>(trial)));
        auto lifted = graph_current(f);
        double m_formula = area_formula_mass(f);
        double m_lifted = mass(lifted);
        worst_mass = std::max(worst_mass, std::fabs(m_formula - m_lifted) / m_formula);

        const int n = k + m;
        Eigen::VectorXd diag(static_cast<Eigen::Index>(binom(n, k)));
        for (int i = 0; i < diag.size(); ++i) diag(i) = 1.0 + 0.25 * (i % 4);
        auto psi = make_ellipse_norm(n, k, Eigen::MatrixXd(diag.asDiagonal()));
        QIntegrand fq(q, ClassicalIntegrand(psi));
        double e_q = q_energy(fq, f);
        double e_current = energy(psi, lifted);
        worst_energy = std::max(worst_energy, std::fabs(e_q - e_current) / std::fabs(e_q));
    }
    std::ostringstream what;
    what << "area-formula mass and energy agree with the lifted current on 200 graphs "
            "(worst rel: "
         << worst_mass << ", " << worst_energy << ")";
    report(3, worst_mass < 1e-9 && worst_energy < 1e-9, what.str());
}

// Shared state between criteria 4, 5, and 7.
struct GroundTruth {
    std::vector<Decomposition> k1_decs;
    std::vector<std::pair<double, Decomposition>> k1_witnesses;  // (c, witness)
    int max_lp_support = 0;
    int max_lp_bound = 0;
    bool pass4 = true;
    std::string detail4;
};

// --- criterion 4: area integrand ground truth -------------------------------
GroundTruth criterion_area_ground_truth() {
    GroundTruth gt;
    std::ostringstream detail;
    const std::vector<std::pair<int, int>> shapes{{2, 1}, {3, 1}, {4, 1}, {3, 2}, {4, 2}, {5, 2}};
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        auto [n, k] = shapes[static_cast<std::size_t>(trial) % shapes.size()];
        Rng rng(Rng::derive(404, static_cast<std::uint64_t>(trial)));
        int d = 2 + static_cast<int>(rng.next_u64() % 3);
        double c = 2.0 * rng.uniform();
        auto dec = random_decomposition(n, k, d, Rng::derive(405, static_cast<std::uint64_t>(trial)));
        auto area = make_area(n, k);
        double gap = check_instance(area, c, dec);
        double predicted = (1.0 - c) * (dec.weight_sum() - 1.0);
        worst = std::max(worst, std::fabs(gap - predicted));
        if (k == 1) gt.k1_decs.push_back(dec);
    }
    if (worst > 1e-12) {
        gt.pass4 = false;
        detail << "instance gap deviated from (1-c)(sum m - 1) by " << worst << "; ";
    }

    for (auto [n, k] : {std::pair{3, 1}, {4, 2}}) {
        auto area = make_area(n, k);
        auto rep = certify_sampled(area, 1.0, 50, 200, 406);
        gt.max_lp_support = std::max(gt.max_lp_support, rep.stats.max_support);
        gt.max_lp_bound = std::max(gt.max_lp_bound, static_cast<int>(binom(n, k)));
        if (rep.mode != UpcMode::sampled_certificate || rep.worst_gap < -1e-9) {
            gt.pass4 = false;
            detail << "certify failed at c=1 for (" << n << "," << k << "); ";
        }
    }

    for (auto [n, k] : {std::pair{2, 1}, {3, 1}, {3, 2}, {4, 2}}) {
        auto area = make_area(n, k);
        SearchParams params;
        params.n = n;
        params.k = k;
        auto hit = search_counterexample(area, 1.1, 10000, params, 407);
        if (!hit.witness) {
            gt.pass4 = false;
            detail << "no witness at c=1.1 for (" << n << "," << k << "); ";
        } else if (k == 1) {
            gt.k1_witnesses.emplace_back(1.1, *hit.witness);
        }
    }
    gt.detail4 = detail.str();
    report(4, gt.pass4,
           gt.pass4 ? "area ground truth: gap formula, certificate at c=1, witnesses at c=1.1"
                    : gt.detail4);
    return gt;
}

// --- criterion 5: instance gap equals the polyhedral pair gap (grade 1) ----
void criterion_pair_identity(const GroundTruth& gt) {
    double worst = 0.0;
    std::size_t checked = 0;
    for (std::size_t i = 0; i < gt.k1_decs.size(); ++i) {
        const auto& dec = gt.k1_decs[i];
        auto area = make_area(dec.n(), 1);
        Rng rng(Rng::derive(505, i));
        double c = 2.0 * rng.uniform();
        auto [s, d] = make_test_pair_k1(dec);
        worst = std::max(worst,
                         std::fabs(verify_aue(area, c, s, d) - check_instance(area, c, dec)));
        ++checked;
    }
    bool signs_ok = true;
    for (const auto& [c, witness] : gt.k1_witnesses) {
        auto area = make_area(witness.n(), 1);
        auto [s, d] = make_test_pair_k1(witness);
        double pair_gap = verify_aue(area, c, s, d);
        double instance_gap = check_instance(area, c, witness);
        worst = std::max(worst, std::fabs(pair_gap - instance_gap));
        if (!(pair_gap < 0.0 && instance_gap < 0.0)) signs_ok = false;
        ++checked;
    }
    std::ostringstream what;
    what << "grade-1 pair gap equals instance gap on " << checked
         << " decompositions incl. counterexamples (worst |diff| = " << worst << ")";
    report(5, worst < 1e-10 && signs_ok, what.str());
}

// --- criterion 6: rational approximation postconditions ---------------------
void criterion_rational() {
    const std::vector<std::pair<int, int>> shapes{{2, 1}, {3, 1}, {4, 1}, {5, 1},
                                                  {3, 2}, {4, 2}, {5, 2}, {4, 3}};
    int failures_here = 0;
    for (int trial = 0; trial < 100; ++trial) {
        auto [n, k] = shapes[static_cast<std::size_t>(trial) % shapes.size()];
        Rng rng(Rng::derive(606, static_cast<std::uint64_t>(trial)));
        int d = 2 + static_cast<int>(rng.next_u64() % 3);
        auto dec = random_decomposition(n, k, d, Rng::derive(607, static_cast<std::uint64_t>(trial)),
                                        OrientationMode::positive);
        try {
            auto rd = approximate_decomposition(dec, 1e-2);
            if (!rd.cert.ok() || !rd.cert.exact_identity ||
                rd.count() - rd.d_original > static_cast<int>(binom(n, k)) ||
                !rational_residual(rd).is_zero()) {
                ++failures_here;
            }
        } catch (const Error&) {
            ++failures_here;
        }
    }
    std::ostringstream what;
    what << "rational approximation: exact identity, distance bounds, atom bound, positivity on "
            "100 decompositions ("
         << failures_here << " failures)";
    report(6, failures_here == 0, what.str());
}

// --- criterion 7: Caratheodory atom bounds ----------------------------------
void criterion_caratheodory(const GroundTruth& gt) {
    bool ok = gt.max_lp_support <= gt.max_lp_bound;
    std::ostringstream detail;
    if (!ok) detail << "LP optimum used " << gt.max_lp_support << " atoms; ";

    Rng rng(707);
    for (int trial = 0; trial < 50; ++trial) {
        int dim = 2 + trial % 4;
        int count = dim + 1 + trial % 5;
        ConicCombination<double> comb;
        std::vector<double> target(static_cast<std::size_t>(dim), 0.0);
        for (int j = 0; j < count; ++j) {
            std::vector<double> atom(static_cast<std::size_t>(dim));
            for (int i = 0; i < dim; ++i) atom[static_cast<std::size_t>(i)] = rng.gaussian();
            double w = 0.1 + rng.uniform();
            for (int i = 0; i < dim; ++i) target[static_cast<std::size_t>(i)] += w * atom[static_cast<std::size_t>(i)];
            comb.atoms.push_back(std::move(atom));
            comb.weights.push_back(w);
        }
        auto reduced = caratheodory_reduce(comb, target);
        if (static_cast<int>(reduced.atoms.size()) > dim ||
            reduced.atoms.size() > comb.atoms.size()) {
            ok = false;
            detail << "float reduction kept " << reduced.atoms.size() << " atoms in R^" << dim
                   << "; ";
            break;
        }
    }
    std::ostringstream what;
    what << "atom bounds: LP optima used <= C(n,k) atoms (max " << gt.max_lp_support
         << "), reductions stay within the ambient dimension";
    report(7, ok, ok ? what.str() : detail.str());
}

// --- criterion 8: Q-graph gaps for the area integrand ------------------------
void criterion_uqc() {
    double worst_at_one = 0.0;
    bool positive_ok = true;
    int violations = 0;
    for (int trial = 0; trial < 500; ++trial) {
        Rng rng(Rng::derive(808, static_cast<std::uint64_t>(trial)));
        int k = 1 + static_cast<int>(rng.next_u64() % 2);
        int m = 1 + static_cast<int>(rng.next_u64() % 2);
        int q = 1 + static_cast<int>(rng.next_u64() % 3);
        int level = 1 + static_cast<int>(rng.next_u64() % 2);
        auto h = random_multigraph(k, m, q, rng);
        auto f = random_q_function(k, m, q, level, 1.0, h,
                                   Rng::derive(809, static_cast<std::uint64_t>(trial)));
        auto pair = make_graph_test_pair(f, h);
        QIntegrand fq(q, ClassicalIntegrand(make_area(k + m, k)));
        double gap_one = verify_uqc(fq, 1.0, pair);
        worst_at_one = std::min(worst_at_one, gap_one);
        if (gap_one < -1e-9) ++violations;

        double gap_half = verify_uqc(fq, 0.5, pair);
        double excess = area_formula_mass(pair.f) - area_formula_mass(pair.h_expanded);
        // For the area integrand the gap at c = 1/2 is exactly half the mass
        // excess, so nonnegativity holds up to float noise and strict
        // positivity follows on any genuine excess.
        if (gap_half < -1e-12) positive_ok = false;
        if (std::fabs(gap_half - 0.5 * excess) > 1e-12) positive_ok = false;
        if (excess > 1e-6 && !(gap_half > 0.0)) positive_ok = false;
    }
    std::ostringstream what;
    what << "Q-graph gaps on 500 pairs: c=1 worst gap " << worst_at_one << " (" << violations
         << " violations), c=0.5 strictly positive on mass excess: " << (positive_ok ? "yes" : "no");
    report(8, violations == 0 && positive_ok, what.str());
}

// --- criterion 9: gap affinity and certificate monotonicity -----------------
void criterion_affinity() {
    bool ok = true;
    std::ostringstream detail;
    std::vector<double> cs{0.0, 0.3, 0.7, 1.0};
    for (int trial = 0; trial < 60 && ok; ++trial) {
        Rng rng(Rng::derive(909, static_cast<std::uint64_t>(trial)));
        int n = 2 + trial % 3;
        int k = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(n - 1));
        auto dec = random_decomposition(n, k, 2 + trial % 3,
                                        Rng::derive(910, static_cast<std::uint64_t>(trial)));
        Eigen::VectorXd diag(static_cast<Eigen::Index>(binom(n, k)));
        for (int i = 0; i < diag.size(); ++i) diag(i) = 1.0 + 0.5 * (i % 3);
        auto psi = (trial % 2 == 0)
                       ? make_area(n, k)
                       : make_ellipse_norm(n, k, Eigen::MatrixXd(diag.asDiagonal()));
        try {
            gap_affinity_check(psi, dec, cs);  // throws above 1e-10 residual
        } catch (const Error& e) {
            ok = false;
            detail << e.what();
        }
    }

    // Certificates are monotone: passing at c implies passing at c' < c with
    // the same seed.
    auto area = make_area(3, 1);
    auto ell = make_ellipse_norm(3, 1, Eigen::Vector3d(1.0, 1.0, 4.0).asDiagonal());
    struct Case {
        const GeometricIntegrand* psi;
        double c;
    };
    double ell_c = locate_c_heuristic(ell, 10, 60, 911, 2.0, 0.02);
    for (const Case& probe : {Case{&area, 1.0}, Case{&ell, ell_c}}) {
        if (certify_sampled(*probe.psi, probe.c, 10, 60, 911).mode !=
            UpcMode::sampled_certificate) {
            ok = false;
            detail << "certificate failed at its own c; ";
            continue;
        }
        for (double scale : {0.25, 0.5, 0.9}) {
            if (certify_sampled(*probe.psi, scale * probe.c, 10, 60, 911).mode !=
                UpcMode::sampled_certificate) {
                ok = false;
                detail << "monotonicity broke at " << scale << " * c; ";
            }
        }
    }
    report(9, ok,
           ok ? "gap affinity residual < 1e-10 on 60 pairs; certificates monotone in c"
              : detail.str());
}

// --- criterion 10: determinism and the CLI exit-code contract ---------------
void criterion_cli() {
#ifndef ANISO_CLI_PATH
    report(10, false, "CLI path not configured");
#else
    namespace fs = std::filesystem;
    bool ok = true;
    std::ostringstream detail;
    fs::path dir = fs::temp_directory_path() / "aniso_acceptance";
    fs::create_directories(dir);

    auto write_file = [&](const char* name, const std::string& text) {
        fs::path p = dir / name;
        std::ofstream out(p);
        out << text;
        return p.string();
    };
    std::string area31 = write_file("area31.json", R"({"name":"area","params":{"n":3,"k":1}})");
    std::string bad = write_file("bad.json", "{not json");

    auto run = [&](const std::string& args) {
        std::string cmd = std::string(ANISO_CLI_PATH) + " " + args + " > /dev/null 2>&1";
        int status = std::system(cmd.c_str());
        return WEXITSTATUS(status);
    };

    std::string report_a = (dir / "suite_a.json").string();
    std::string report_b = (dir / "suite_b.json").string();
    std::string suite_args = "suite equivalence --integrand " + area31 +
                             " --c 1.0 --seed 42 --trials 60 --out ";
    if (run(suite_args + report_a) != 0) {
        ok = false;
        detail << "suite run failed; ";
    }
    if (run(suite_args + report_b) != 0) {
        ok = false;
        detail << "suite rerun failed; ";
    }
    auto slurp = [](const std::string& path) {
        std::ifstream in(path);
        std::stringstream buf;
        buf << in.rdbuf();
        return buf.str();
    };
    std::string bytes_a = slurp(report_a), bytes_b = slurp(report_b);
    if (bytes_a.empty() || bytes_a != bytes_b) {
        ok = false;
        detail << "suite reports are not byte-identical; ";
    }

    int pass_code = run("upc certify --integrand " + area31 + " --c 1.0 --dirs 10 --atoms 60");
    int witness_code = run("upc search --integrand " + area31 + " --c 1.1 --budget 2000 --seed 7");
    int usage_code = run("upc certify --integrand " + bad + " --c 1.0");
    if (pass_code != 0) {
        ok = false;
        detail << "pass case exited " << pass_code << "; ";
    }
    if (witness_code != 1) {
        ok = false;
        detail << "counterexample case exited " << witness_code << "; ";
    }
    if (usage_code != 2) {
        ok = false;
        detail << "malformed-input case exited " << usage_code << "; ";
    }
    report(10, ok,
           ok ? "byte-identical reruns of the suite; CLI exit codes 0/1/2 as contracted"
              : detail.str());
#endif
}

}  // namespace

int main() {
    criterion_exterior();
    criterion_metric();
    criterion_area_formula();
    GroundTruth gt = criterion_area_ground_truth();
    criterion_pair_identity(gt);
    criterion_rational();
    criterion_caratheodory(gt);
    criterion_uqc();
    criterion_affinity();
    criterion_cli();
    if (failures > 0) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
