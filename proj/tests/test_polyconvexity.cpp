#include <doctest.h>

#include "aniso/polyconvexity.hpp"
#include "oracles.hpp"

using namespace aniso;

namespace {

/// eta0 = e1 split against the two diagonal directions; weight sum sqrt(2).
Decomposition sqrt2_decomposition() {
    const double r = std::sqrt(0.5);
    Decomposition dec;
    dec.eta0 = OrientedPlane::from_kvector(KVector::basis_vector(2, 1));
    dec.atoms.emplace_back(r, OrientedPlane::from_kvector(KVector(2, 1, {r, r})));
    dec.atoms.emplace_back(r, OrientedPlane::from_kvector(KVector(2, 1, {r, -r})));
    return dec;
}

}  // namespace

TEST_CASE("check_instance on the reference cases") {
    auto area = make_area(2, 1);
    auto dec = sqrt2_decomposition();
    // Hand value: both sides of the inequality are (sum m - 1) for the area,
    // so the gap at c is (1 - c)(sqrt(2) - 1).
    CHECK(check_instance(area, 0.9, dec) ==
          doctest::Approx(0.1 * (std::sqrt(2.0) - 1.0)).epsilon(1e-12));
    CHECK(check_instance(area, 1.0, dec) == doctest::Approx(0.0));

    Decomposition degenerate;
    degenerate.eta0 = dec.eta0;
    degenerate.atoms.emplace_back(1.0, dec.eta0);
    auto ell = make_ellipse_norm(2, 1, Eigen::Vector2d(1.0, 3.0).asDiagonal());
    for (double c : {0.0, 0.5, 2.0}) {
        CHECK(check_instance(area, c, degenerate) == doctest::Approx(0.0));
        CHECK(check_instance(ell, c, degenerate) == doctest::Approx(0.0));
    }
}

TEST_CASE("bracket nonnegativity and weight-sum identity") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        int n = 2 + static_cast<int>(seed % 4);
        int k = 1 + static_cast<int>(seed % static_cast<std::uint64_t>(n - 1));
        auto dec = random_decomposition(n, k, 2 + static_cast<int>(seed % 3), seed);
        double bracket = dec.weight_sum() - 1.0;
        CHECK(bracket >= -1e-12);
        auto area = make_area(n, k);
        double c = 0.3 + 0.1 * static_cast<double>(seed % 10);
        CHECK(check_instance(area, c, dec) ==
              doctest::Approx((1.0 - c) * bracket).epsilon(1e-11));
    }
}

TEST_CASE("orientation mode enforcement") {
    auto area = make_area(2, 1);
    Decomposition dec;
    dec.eta0 = OrientedPlane::from_kvector(KVector::basis_vector(2, 1));
    const double r = std::sqrt(0.5);
    // One atom pairs negatively with e1.
    dec.atoms.emplace_back(r, OrientedPlane::from_kvector(KVector(2, 1, {r, r})));
    dec.atoms.emplace_back(3 * r, OrientedPlane::from_kvector(KVector(2, 1, {r, -r})));
    dec.atoms.emplace_back(std::sqrt(2.0), OrientedPlane::from_kvector(KVector(2, 1, {-r, r})));
    validate(dec);
    CHECK_NOTHROW(check_instance(area, 1.0, dec));
    CHECK_THROWS_AS(check_instance(area, 1.0, dec, OrientationMode::positive), Error);
}

TEST_CASE("random_decomposition invariants across shapes") {
    for (auto [n, k] : {std::pair{2, 1}, {3, 1}, {3, 2}, {4, 2}, {5, 2}, {5, 3}, {6, 3}}) {
        for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
            auto dec = random_decomposition(n, k, 3, seed);
            validate(dec);
            CHECK(is_simple(dec.eta0.kvector()));
            auto pos = random_decomposition(n, k, 3, seed, OrientationMode::positive);
            CHECK(positively_oriented(pos));
        }
    }
    CHECK_THROWS_AS(random_decomposition(3, 1, 1, 0), Error);
}

TEST_CASE("gap affinity in c") {
    auto dec = sqrt2_decomposition();
    auto area = make_area(2, 1);
    std::vector<double> cs{0.0, 0.3, 0.7, 1.0};
    auto [a, b] = gap_affinity_check(area, dec, cs);
    double bracket = std::sqrt(2.0) - 1.0;
    CHECK(a == doctest::Approx(bracket).epsilon(1e-10));
    CHECK(b == doctest::Approx(bracket).epsilon(1e-10));

    Decomposition degenerate;
    degenerate.eta0 = dec.eta0;
    degenerate.atoms.emplace_back(1.0, dec.eta0);
    auto [a0, b0] = gap_affinity_check(area, degenerate, cs);
    CHECK(a0 == doctest::Approx(0.0));
    CHECK(b0 == doctest::Approx(0.0));

    auto ell = make_ellipse_norm(3, 1, Eigen::Vector3d(1.0, 2.0, 4.0).asDiagonal());
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto rdec = random_decomposition(3, 1, 3, seed);
        CHECK_NOTHROW(gap_affinity_check(ell, rdec, cs));  // residual < 1e-10 enforced inside
    }
}

TEST_CASE("lp_min_decomposition reference cases") {
    auto area = make_area(3, 1);
    Rng rng(71);
    OrientedPlane eta0 = random_plane(3, 1, rng);
    std::vector<OrientedPlane> atoms{eta0};
    for (int i = 0; i < 40; ++i) atoms.push_back(random_plane(3, 1, rng));

    auto at_one = lp_min_decomposition(area, 1.0, eta0, atoms);
    CHECK(at_one.lp_gap == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(at_one.support <= static_cast<int>(binom(3, 1)));

    auto above = lp_min_decomposition(area, 1.1, eta0, atoms);
    CHECK(above.lp_gap < kGapThreshold);
    auto witness = decomposition_from_weights(eta0, atoms, above.weights);
    CHECK(check_instance(area, 1.1, witness) == doctest::Approx(above.lp_gap).epsilon(1e-8));

    std::vector<OrientedPlane> only_ref{eta0};
    auto tight = lp_min_decomposition(area, 1.1, eta0, only_ref);
    CHECK(tight.lp_gap == doctest::Approx(0.0).epsilon(1e-9));

    std::vector<OrientedPlane> missing{random_plane(3, 1, rng)};
    CHECK_THROWS_AS(lp_min_decomposition(area, 1.0, eta0, missing), Error);
}

TEST_CASE("LP optimum matches support enumeration on small instances") {
    Rng rng(7);
    auto ell = make_ellipse_norm(3, 1, Eigen::Vector3d(1.0, 1.0, 4.0).asDiagonal());
    for (int trial = 0; trial < 12; ++trial) {
        OrientedPlane eta0 = random_plane(3, 1, rng);
        std::vector<OrientedPlane> atoms{eta0};
        for (int i = 0; i < 5; ++i) atoms.push_back(random_plane(3, 1, rng));
        double c = 0.25 * static_cast<double>(trial % 3);
        auto lp = lp_min_decomposition(ell, c, eta0, atoms);
        if (lp.unbounded) continue;  // enumeration has no finite optimum then

        Eigen::MatrixXd a(3, static_cast<Eigen::Index>(atoms.size()));
        Eigen::VectorXd cost(static_cast<Eigen::Index>(atoms.size()));
        for (std::size_t j = 0; j < atoms.size(); ++j) {
            for (int i = 0; i < 3; ++i) a(i, static_cast<Eigen::Index>(j)) = atoms[j].kvector()[static_cast<std::size_t>(i)];
            cost(static_cast<Eigen::Index>(j)) = ell(atoms[j].kvector()) - c * norm(atoms[j].kvector());
        }
        Eigen::VectorXd b(3);
        for (int i = 0; i < 3; ++i) b(i) = eta0.kvector()[static_cast<std::size_t>(i)];
        auto brute = oracles::lp_by_enumeration(a, b, cost);
        REQUIRE(brute.has_value());
        double g0 = ell(eta0.kvector()) - c * norm(eta0.kvector());
        CHECK(lp.lp_gap == doctest::Approx(*brute - g0).epsilon(1e-8));
    }
}

TEST_CASE("search_counterexample behaviour on the area") {
    auto area = make_area(2, 1);
    SearchParams params;
    params.n = 2;
    params.k = 1;

    auto hit = search_counterexample(area, 1.1, 10000, params, 7);
    REQUIRE(hit.witness.has_value());
    CHECK(hit.gap < kGapThreshold);
    // Witness re-verifies through the instance check.
    CHECK(check_instance(area, 1.1, *hit.witness) == doctest::Approx(hit.gap).epsilon(1e-9));

    auto at_one = search_counterexample(area, 1.0, 300, params, 7);
    CHECK_FALSE(at_one.witness.has_value());
    auto below = search_counterexample(area, 0.5, 300, params, 7);
    CHECK_FALSE(below.witness.has_value());
}

TEST_CASE("certify_sampled modes and monotonicity in c") {
    auto area = make_area(3, 1);
    auto at_one = certify_sampled(area, 1.0, 20, 80, 42);
    CHECK(at_one.mode == UpcMode::sampled_certificate);
    CHECK(at_one.worst_gap >= kGapThreshold);
    CHECK(at_one.worst_gap <= 1e-12);
    CHECK(!at_one.caveat.empty());

    auto above = certify_sampled(area, 1.05, 20, 80, 42);
    CHECK(above.mode == UpcMode::counterexample);
    REQUIRE(above.witness.has_value());
    CHECK(check_instance(area, 1.05, *above.witness) < kGapThreshold);

    // Same seed, smaller c: still certifies (gaps affine decreasing in c).
    for (double c : {0.25, 0.5, 0.9}) {
        auto lower = certify_sampled(area, c, 20, 80, 42);
        CHECK(lower.mode == UpcMode::sampled_certificate);
    }

    auto ell = make_ellipse_norm(3, 1, Eigen::Vector3d(1.0, 1.0, 4.0).asDiagonal());
    auto convex = certify_sampled(ell, 0.0, 20, 80, 42);
    CHECK(convex.mode == UpcMode::sampled_certificate);
}

TEST_CASE("certify_sampled is independent of the thread count") {
    auto area = make_area(3, 2);
    auto one = certify_sampled(area, 1.0, 12, 50, 9, OrientationMode::any, 1);
    auto four = certify_sampled(area, 1.0, 12, 50, 9, OrientationMode::any, 4);
    CHECK(one.worst_gap == four.worst_gap);
    CHECK(one.stats.max_support == four.stats.max_support);
}

TEST_CASE("search results are independent of the thread count") {
    auto ell = make_ellipse_norm(3, 1, Eigen::Vector3d(1.0, 1.0, 4.0).asDiagonal());
    SearchParams params;
    params.n = 3;
    params.k = 1;
    // c slightly above the constant: witnesses are rare enough that the
    // winning sample index actually matters.
    auto one = search_counterexample(ell, 1.02, 2000, params, 13, 1);
    auto four = search_counterexample(ell, 1.02, 2000, params, 13, 4);
    CHECK(one.witness.has_value() == four.witness.has_value());
    CHECK(one.samples_used == four.samples_used);
    if (one.witness) {
        CHECK(one.gap == four.gap);
        CHECK(norm(one.witness->eta0.kvector() - four.witness->eta0.kvector()) == 0.0);
    }
}

TEST_CASE("locate_c heuristic brackets the area constant") {
    auto area = make_area(2, 1);
    double c = locate_c_heuristic(area, 8, 40, 5, 2.0, 0.05);
    CHECK(c >= 0.9);
    CHECK(c <= 1.05);
}
