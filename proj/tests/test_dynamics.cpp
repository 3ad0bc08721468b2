#include <catch2/catch.hpp>
#include <cmath>
#include <random>

#include "entropy_lab/metrics.hpp"
#include "entropy_lab/points.hpp"
#include "entropy_lab/systems.hpp"

using namespace entropy_lab;

TEST_CASE("apply evaluates the stock maps") {
    MapSpec diag = linear_map(DenseMatrix::diagonal({2.0, 0.5}));
    StatePoint y = apply(diag, vector_point("R^2", {1.0, 1.0}));
    CHECK(y.coords[0] == 2.0);
    CHECK(y.coords[1] == 0.5);

    MapSpec doubling = circle_doubling_map();
    CHECK(apply(doubling, circle_point(0.3)).coords[0] == Approx(0.6).margin(1e-15));

    MapSpec shift = full_shift_map(2);
    CHECK(apply(shift, word_point("shift2", "0110")).word == "110");
}

TEST_CASE("apply rejects bad inputs") {
    MapSpec diag = linear_map(DenseMatrix::diagonal({2.0, 0.5}));
    CHECK_THROWS_AS(apply(diag, vector_point("R^2", {1.0})), DomainError);
    CHECK_THROWS_AS(linear_map(DenseMatrix::from_rows({{1.0, 2.0}, {2.0, 4.0}})), DomainError);
    // bracket-violating algebra matrix: swaps X and Z
    CHECK_THROWS_AS(heisenberg_automorphism_map(
                        DenseMatrix::from_rows({{0, 0, 1}, {0, 1, 0}, {1, 0, 0}})),
                    DomainError);
    MapSpec shift = full_shift_map(2);
    CHECK_THROWS_AS(apply(shift, word_point("shift2", "")), DomainError);
}

TEST_CASE("the point at infinity is fixed") {
    MapSpec diag = linear_map(DenseMatrix::diagonal({2.0, 0.5}));
    StatePoint inf = infinity_point("R^2");
    CHECK(apply(diag, inf).at_infinity);
    for (const StatePoint& p : orbit(diag, inf, 5)) CHECK(p.at_infinity);
}

TEST_CASE("orbit produces iterates with the start point first") {
    MapSpec two = linear_map(DenseMatrix::diagonal({2.0}));
    auto orb = orbit(two, scalar_point("R^1", 1.0), 3);
    REQUIRE(orb.size() == 4);
    CHECK(orb[0].coords[0] == 1.0);
    CHECK(orb[1].coords[0] == 2.0);
    CHECK(orb[2].coords[0] == 4.0);
    CHECK(orb[3].coords[0] == 8.0);

    auto single = orbit(two, scalar_point("R^1", 7.0), 0);
    REQUIRE(single.size() == 1);
    CHECK(single[0].coords[0] == 7.0);

    MapSpec quarter_turn = linear_map(DenseMatrix::from_rows({{0.0, -1.0}, {1.0, 0.0}}));
    auto cyc = orbit(quarter_turn, vector_point("R^2", {1.0, 0.0}), 4);
    CHECK(cyc[4].coords[0] == Approx(1.0).margin(1e-15));
    CHECK(cyc[4].coords[1] == Approx(0.0).margin(1e-15));
}

TEST_CASE("orbit reports divergence with the first bad index") {
    MapSpec huge = linear_map(DenseMatrix::diagonal({1e200}));
    try {
        orbit(huge, scalar_point("R^1", 1e200), 3);
        FAIL("expected divergence");
    } catch (const DivergenceError& e) {
        CHECK(e.first_bad_index == 1);  // 1e400 overflows at the first iterate
    }
}

TEST_CASE("distance computes the stock metrics") {
    CHECK(distance(euclidean_metric(), scalar_point("R^1", 0.0), scalar_point("R^1", 3.0)) == 3.0);
    CHECK(distance(shift_cylinder_metric(), word_point("s", "010"), word_point("s", "011")) ==
          0.25);
    CHECK(distance(circle_arc_metric(), circle_point(0.1), circle_point(0.9)) ==
          Approx(0.2).margin(1e-15));
    CHECK_THROWS_AS(
        distance(euclidean_metric(), scalar_point("R^1", 0.0), scalar_point("R^2", 0.0)),
        DomainError);
}

TEST_CASE("compactified distance converges monotonically to the pole distance") {
    MetricSpec comp = compactified_metric(1);
    StatePoint origin = scalar_point("line", 0.0);
    double d10 = distance(comp, origin, scalar_point("line", 10.0));
    double d100 = distance(comp, origin, scalar_point("line", 100.0));
    double d1000 = distance(comp, origin, scalar_point("line", 1000.0));
    double dpole = distance(comp, origin, infinity_point("line"));
    CHECK(d10 < d100);
    CHECK(d100 < d1000);
    CHECK(d1000 < dpole);
    CHECK(dpole == 2.0);
    // closed form of the chordal distance: 2t/sqrt(1+t^2) from the origin
    CHECK(d10 == Approx(2.0 * 10.0 / std::sqrt(101.0)).epsilon(1e-14));
}

TEST_CASE("metric axioms hold on sampled triples") {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> unif(-5.0, 5.0);

    MetricSpec metrics[] = {euclidean_metric(), compactified_metric(3)};
    for (const MetricSpec& metric : metrics) {
        for (int trial = 0; trial < 200; ++trial) {
            StatePoint x = vector_point("R^3", {unif(rng), unif(rng), unif(rng)});
            StatePoint y = vector_point("R^3", {unif(rng), unif(rng), unif(rng)});
            StatePoint z = vector_point("R^3", {unif(rng), unif(rng), unif(rng)});
            double dxy = distance(metric, x, y);
            double dyx = distance(metric, y, x);
            double dxz = distance(metric, x, z);
            double dzy = distance(metric, z, y);
            CHECK(dxy == dyx);
            CHECK(distance(metric, x, x) == 0.0);
            CHECK(dxy <= dxz + dzy + 1e-12);
        }
    }

    std::uniform_real_distribution<double> circ(0.0, 1.0);
    MetricSpec arc = circle_arc_metric();
    for (int trial = 0; trial < 200; ++trial) {
        StatePoint x = circle_point(circ(rng));
        StatePoint y = circle_point(circ(rng));
        StatePoint z = circle_point(circ(rng));
        CHECK(distance(arc, x, y) == distance(arc, y, x));
        CHECK(distance(arc, x, y) <= distance(arc, x, z) + distance(arc, z, y) + 1e-12);
    }
}

TEST_CASE("compactified distances never exceed the sphere diameter") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> unif(-1e6, 1e6);
    MetricSpec comp = compactified_metric(2);
    for (int trial = 0; trial < 500; ++trial) {
        StatePoint x = vector_point("R^2", {unif(rng), unif(rng)});
        StatePoint y = vector_point("R^2", {unif(rng), unif(rng)});
        CHECK(distance(comp, x, y) <= 2.0);
    }
}

TEST_CASE("bowen distance matches the definition") {
    MapSpec two = linear_map(DenseMatrix::diagonal({2.0}));
    MetricSpec euclid = euclidean_metric();
    StatePoint x = scalar_point("R^1", 0.0);
    StatePoint y = scalar_point("R^1", 1.0);
    CHECK(bowen_distance(two, euclid, 3, x, y) == 8.0);
    CHECK(bowen_distance(two, euclid, 0, x, y) == distance(euclid, x, y));

    MapSpec quarter_turn = linear_map(DenseMatrix::from_rows({{0.0, -1.0}, {1.0, 0.0}}));
    StatePoint u = vector_point("R^2", {0.3, -0.2});
    StatePoint v = vector_point("R^2", {-1.0, 0.8});
    double base = distance(euclid, u, v);
    for (std::size_t n : {1, 5, 9})
        CHECK(bowen_distance(quarter_turn, euclid, n, u, v) == Approx(base).epsilon(1e-13));
}

TEST_CASE("bowen distance is nondecreasing in n") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    MapSpec doubling = circle_doubling_map();
    MetricSpec arc = circle_arc_metric();
    for (int trial = 0; trial < 50; ++trial) {
        StatePoint x = circle_point(unif(rng));
        StatePoint y = circle_point(unif(rng));
        double prev = 0.0;
        for (std::size_t n = 0; n <= 8; ++n) {
            double d = bowen_distance(doubling, arc, n, x, y);
            CHECK(d >= prev);
            prev = d;
        }
    }
}

TEST_CASE("left shift expands the cylinder metric by at most its base") {
    std::mt19937 rng(21);
    std::uniform_int_distribution<int> bit(0, 1);
    MapSpec shift = full_shift_map(2);
    MetricSpec cyl = shift_cylinder_metric();
    for (int trial = 0; trial < 200; ++trial) {
        std::string u(12, '0'), v(12, '0');
        for (auto& ch : u) ch = char('0' + bit(rng));
        for (auto& ch : v) ch = char('0' + bit(rng));
        StatePoint x = word_point("shift2", u);
        StatePoint y = word_point("shift2", v);
        double before = distance(cyl, x, y);
        double after = distance(cyl, apply(shift, x), apply(shift, y));
        CHECK(after <= 2.0 * before + 1e-15);
    }
}

TEST_CASE("composed maps apply their parts in order") {
    MapSpec twice = linear_map(DenseMatrix::diagonal({2.0}), "R^1");
    MapSpec plus_half = linear_map(DenseMatrix::diagonal({1.0}), "R^1");  // placeholder identity
    MapSpec comp = composed_map({twice, twice, plus_half});
    CHECK(apply(comp, scalar_point("R^1", 3.0)).coords[0] == 12.0);
    CHECK_THROWS_AS(composed_map({}), DomainError);
}
