#include <doctest.h>

#include "aniso/currents.hpp"

using namespace aniso;

namespace {

Eigen::VectorXd point(std::initializer_list<double> coords) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(coords.size()));
    Eigen::Index i = 0;
    for (double c : coords) v(i++) = c;
    return v;
}

Cell segment(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    Cell cell;
    cell.vertices = {a, b};
    return cell;
}

Decomposition sqrt2_decomposition() {
    const double r = std::sqrt(0.5);
    Decomposition dec;
    dec.eta0 = OrientedPlane::from_kvector(KVector::basis_vector(2, 1));
    dec.atoms.emplace_back(r, OrientedPlane::from_kvector(KVector(2, 1, {r, r})));
    dec.atoms.emplace_back(r, OrientedPlane::from_kvector(KVector(2, 1, {r, -r})));
    return dec;
}

PolyhedralChain random_chain(int n, int k, int cells, Rng& rng) {
    PolyhedralChain chain(n, k);
    for (int t = 0; t < cells; ++t) {
        Cell cell;
        for (int v = 0; v <= k; ++v) {
            Eigen::VectorXd p(n);
            for (int i = 0; i < n; ++i) p(i) = rng.gaussian();
            cell.vertices.push_back(std::move(p));
        }
        chain.add(std::move(cell), rng.gaussian());
    }
    return chain;
}

}  // namespace

TEST_CASE("boundary of a segment and of a two-triangle square") {
    PolyhedralChain seg(2, 1);
    seg.add(segment(point({0, 0}), point({1, 0})), 1.0);
    auto bd = boundary(seg);
    REQUIRE(bd.size() == 2);
    // Canonical order sorts vertices: -1 at the origin, +1 at the endpoint.
    CHECK(bd.cells()[0].second == doctest::Approx(-1.0));
    CHECK(bd.cells()[1].second == doctest::Approx(1.0));

    // Unit square split along the diagonal, consistently oriented: the
    // interior edge cancels, four boundary edges remain.
    PolyhedralChain square(2, 2);
    Cell lower, upper;
    lower.vertices = {point({0, 0}), point({1, 0}), point({1, 1})};
    upper.vertices = {point({0, 0}), point({1, 1}), point({0, 1})};
    square.add(lower, 1.0);
    square.add(upper, 1.0);
    auto edges = boundary(square);
    CHECK(edges.size() == 4);
    CHECK(boundary(edges).empty());
}

TEST_CASE("boundary of boundary vanishes on random chains") {
    Rng rng(5);
    for (int k : {2, 3}) {
        auto chain = random_chain(4, k, 6, rng);
        CHECK(boundary(boundary(chain)).empty());
    }
}

TEST_CASE("chains_equal compares canonical triangulations") {
    PolyhedralChain a(2, 1), b(2, 1), reversed(2, 1);
    a.add(segment(point({0, 0}), point({1, 1})), 2.0);
    b.add(segment(point({0, 0}), point({1, 1})), 2.0);
    reversed.add(segment(point({1, 1}), point({0, 0})), 2.0);
    CHECK(chains_equal(a, b, 1e-12));
    CHECK_FALSE(chains_equal(a, reversed, 1e-12));

    // Refinement changes the triangulation, hence the comparison.
    PolyhedralChain refined(2, 1);
    refined.add(segment(point({0, 0}), point({0.5, 0.5})), 2.0);
    refined.add(segment(point({0.5, 0.5}), point({1, 1})), 2.0);
    CHECK_FALSE(chains_equal(a, refined, 1e-12));
    CHECK(chains_equal(boundary(a), boundary(refined), 1e-12));
}

TEST_CASE("mass of reference chains") {
    PolyhedralChain seg(3, 1);
    seg.add(segment(point({0, 0, 0}), point({1, 0, 0})), 1.0);
    CHECK(mass(seg) == doctest::Approx(1.0));

    PolyhedralChain weighted(3, 1);
    weighted.add(segment(point({0, 0, 0}), point({1, 0, 0})), -2.0);
    CHECK(mass(weighted) == doctest::Approx(2.0));

    // The simplicial subdivision of the unit cube has total volume 1.
    for (int k = 1; k <= 4; ++k) {
        PolyhedralChain cube(k, k);
        for (auto& verts : cube_triangulation(k, 1)) {
            Cell cell;
            cell.vertices = std::move(verts);
            cube.add(std::move(cell), 1.0);
        }
        CHECK(mass(cube) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("tangent planes of cells") {
    Cell axis;
    axis.vertices = {point({0, 0, 0}), point({1, 0, 0}), point({1, 1, 0})};
    auto plane = tangent(axis);
    CHECK(norm(plane.kvector() - KVector::basis_atom(3, std::vector<int>{1, 2})) < 1e-12);

    Cell swapped;
    swapped.vertices = {point({1, 0, 0}), point({0, 0, 0}), point({1, 1, 0})};
    CHECK(norm(tangent(swapped).kvector() + plane.kvector()) < 1e-12);

    Rng rng(3);
    auto chain = random_chain(4, 2, 5, rng);
    for (const auto& [cell, mult] : chain.cells()) {
        auto t = tangent(cell);
        CHECK(norm(t.kvector()) == doctest::Approx(1.0));
        CHECK(is_simple(t.kvector()));
    }
}

TEST_CASE("gaussian image merging and total weight") {
    PolyhedralChain two(2, 1);
    two.add(segment(point({0, 0}), point({1, 0})), 1.0);
    two.add(segment(point({0, 1}), point({1, 1})), 1.0);
    auto image = gaussian_image(two);
    REQUIRE(image.atoms().size() == 1);
    CHECK(image.atoms()[0].second == doctest::Approx(2.0));

    auto dec = sqrt2_decomposition();
    auto [s, d] = make_test_pair_k1(dec);
    auto gamma = gaussian_image(s);
    REQUIRE(gamma.atoms().size() == 2);
    // Exactly sum_i m_i at eta_i: realized with zero total-variation error.
    std::vector<std::pair<OrientedPlane, double>> expect_atoms;
    for (const auto& [m, eta] : dec.atoms) expect_atoms.emplace_back(eta, m);
    DiscreteGrassMeasure expected(std::move(expect_atoms));
    CHECK(tv_distance(gamma, expected) < 1e-12);
}

TEST_CASE("tv_distance on atomic measures") {
    auto e1 = OrientedPlane::from_kvector(KVector::basis_vector(3, 1));
    auto e2 = OrientedPlane::from_kvector(KVector::basis_vector(3, 2));
    DiscreteGrassMeasure mu({{e1, 1.0}});
    DiscreteGrassMeasure nu({{e2, 1.0}});
    CHECK(tv_distance(mu, mu) == doctest::Approx(0.0));
    CHECK(tv_distance(mu, nu) == doctest::Approx(2.0));
}

TEST_CASE("energy: cellwise sum equals the gaussian-image pairing") {
    auto ell = make_ellipse_norm(2, 1, Eigen::Vector2d(1.0, 4.0).asDiagonal());
    PolyhedralChain seg(2, 1);
    seg.add(segment(point({0, 0}), point({0, 1})), 1.0);
    CHECK(energy(ell, seg) == doctest::Approx(2.0));

    Rng rng(13);
    for (int trial = 0; trial < 5; ++trial) {
        auto chain = random_chain(3, 2, 6, rng);
        auto psi = make_ellipse_norm(3, 2, Eigen::Vector3d(1.0, 2.0, 3.0).asDiagonal());
        double cellwise = energy(psi, chain);
        double paired = energy_via_gaussian(psi, chain);
        CHECK(cellwise == doctest::Approx(paired).epsilon(1e-12));
        // With the area integrand and positive multiplicities, energy = mass.
        PolyhedralChain positive(3, 2);
        for (const auto& [cell, mult] : chain.cells()) positive.add(cell, std::fabs(mult));
        CHECK(energy(make_area(3, 2), positive) ==
              doctest::Approx(mass(positive)).epsilon(1e-12));
    }
}

TEST_CASE("unit_cube_current lies flat in its plane") {
    Rng rng(21);
    for (auto [n, k] : {std::pair{3, 1}, {3, 2}, {4, 2}, {5, 3}}) {
        auto eta0 = random_plane(n, k, rng);
        auto cube = unit_cube_current(eta0);
        CHECK(mass(cube) == doctest::Approx(1.0).epsilon(1e-12));
        for (const auto& [cell, mult] : cube.cells()) {
            CHECK(mult == doctest::Approx(1.0));
            CHECK(norm(tangent(cell).kvector() - eta0.kvector()) < 1e-9);
        }
        CHECK(static_cast<int>(cube.size()) == [&] {
            int factorial = 1;
            for (int i = 2; i <= k; ++i) factorial *= i;
            return factorial;
        }());
    }
}

TEST_CASE("make_test_pair_k1 realizes the decomposition") {
    auto dec = sqrt2_decomposition();
    auto [s, d] = make_test_pair_k1(dec);
    CHECK(mass(s) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(mass(d) == doctest::Approx(1.0));
    CHECK(chains_equal(boundary(s), boundary(d), 1e-12));

    // Degenerate single-atom decomposition: S equals D.
    Decomposition degenerate;
    degenerate.eta0 = dec.eta0;
    degenerate.atoms.emplace_back(1.0, dec.eta0);
    auto [s0, d0] = make_test_pair_k1(degenerate);
    CHECK(chains_equal(s0, d0, 1e-12));

    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto rdec = random_decomposition(4, 1, 3, seed);
        auto [rs, rd] = make_test_pair_k1(rdec);
        CHECK(chains_equal(boundary(rs), boundary(rd), 1e-9));
    }

    auto dec2 = random_decomposition(4, 2, 2, 1);
    CHECK_THROWS_AS(make_test_pair_k1(dec2), Error);
}

TEST_CASE("verify_aue equals the instance gap on induced pairs") {
    auto area2 = make_area(2, 1);
    auto dec = sqrt2_decomposition();
    auto [s, d] = make_test_pair_k1(dec);
    CHECK(verify_aue(area2, 1.0, s, d) == doctest::Approx(0.0));
    CHECK(verify_aue(area2, 0.9, s, d) ==
          doctest::Approx(0.1 * (std::sqrt(2.0) - 1.0)).epsilon(1e-12));
    CHECK(verify_aue(area2, 0.9, d, d) == doctest::Approx(0.0));

    auto ell = make_ellipse_norm(3, 1, Eigen::Vector3d(1.0, 2.0, 4.0).asDiagonal());
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto rdec = random_decomposition(3, 1, 2 + static_cast<int>(seed % 3), seed);
        auto [rs, rd] = make_test_pair_k1(rdec);
        double c = 0.25 * static_cast<double>(seed % 5);
        CHECK(verify_aue(ell, c, rs, rd) ==
              doctest::Approx(check_instance(ell, c, rdec)).epsilon(1e-10));
    }

    // Mismatched boundaries are rejected.
    PolyhedralChain other(2, 1);
    other.add(segment(point({0, 0}), point({0, 1})), 1.0);
    CHECK_THROWS_AS(verify_aue(area2, 1.0, other, d), Error);
}
