#include <catch2/catch.hpp>
#include <cmath>
#include <random>

#include "entropy_lab/heisenberg.hpp"
#include "entropy_lab/jordan.hpp"
#include "entropy_lab/spanning.hpp"
#include "entropy_lab/universe.hpp"

using namespace entropy_lab;

TEST_CASE("exp of zero is the identity and the matrix form is exact") {
    HeisenbergGroupElement id = exp_algebra({0.0, 0.0, 0.0});
    CHECK(id.a == 0.0);
    CHECK(id.b == 0.0);
    CHECK(id.c == 0.0);

    HeisenbergGroupElement g = exp_algebra({1.5, -2.0, 0.25});
    Matrix3 m = heisenberg_matrix(g);
    CHECK(m[0][1] == 1.5);
    CHECK(m[1][2] == -2.0);
    CHECK(m[0][2] == Approx(0.25 + 1.5 * -2.0 / 2.0).margin(1e-15));
}

TEST_CASE("log inverts exp exactly") {
    std::mt19937 rng(2);
    std::uniform_real_distribution<double> unif(-3.0, 3.0);
    for (int trial = 0; trial < 100; ++trial) {
        HeisenbergAlgebraElement x{unif(rng), unif(rng), unif(rng)};
        HeisenbergAlgebraElement back = log_group(exp_algebra(x));
        CHECK(std::fabs(back.a - x.a) <= 1e-15 * std::max(1.0, std::fabs(x.a)));
        CHECK(std::fabs(back.b - x.b) <= 1e-15 * std::max(1.0, std::fabs(x.b)));
        CHECK(std::fabs(back.c - x.c) <= 1e-14 * std::max(1.0, std::fabs(x.c)));
    }
    HeisenbergAlgebraElement round = log_group(exp_algebra({1.0, 2.0, 3.0}));
    CHECK(round.a == 1.0);
    CHECK(round.b == 2.0);
    CHECK(round.c == 3.0);
}

TEST_CASE("log recovers coordinates from an explicit matrix") {
    Matrix3 m = {{{1.0, 1.0, 1.0}, {0.0, 1.0, 1.0}, {0.0, 0.0, 1.0}}};
    HeisenbergAlgebraElement x = log_matrix(m);
    CHECK(x.a == 1.0);
    CHECK(x.b == 1.0);
    CHECK(x.c == Approx(0.5).margin(1e-16));
}

TEST_CASE("the group law picks up the bracket term") {
    HeisenbergGroupElement gx = exp_algebra({1.0, 0.0, 0.0});
    HeisenbergGroupElement gy = exp_algebra({0.0, 1.0, 0.0});
    HeisenbergGroupElement prod = multiply(gx, gy);
    CHECK(prod.a == 1.0);
    CHECK(prod.b == 1.0);
    CHECK(prod.c == Approx(0.5).margin(1e-16));  // BCH term [X,Y]/2

    HeisenbergGroupElement back = multiply(prod, inverse(prod));
    CHECK(back.a == Approx(0.0).margin(1e-15));
    CHECK(back.b == Approx(0.0).margin(1e-15));
    CHECK(back.c == Approx(0.0).margin(1e-15));
}

TEST_CASE("group multiplication is associative") {
    std::mt19937 rng(10);
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    for (int trial = 0; trial < 100; ++trial) {
        HeisenbergGroupElement g{unif(rng), unif(rng), unif(rng)};
        HeisenbergGroupElement h{unif(rng), unif(rng), unif(rng)};
        HeisenbergGroupElement k{unif(rng), unif(rng), unif(rng)};
        HeisenbergGroupElement lhs = multiply(multiply(g, h), k);
        HeisenbergGroupElement rhs = multiply(g, multiply(h, k));
        CHECK(lhs.a == Approx(rhs.a).margin(1e-13));
        CHECK(lhs.b == Approx(rhs.b).margin(1e-13));
        CHECK(lhs.c == Approx(rhs.c).margin(1e-13));
    }
}

TEST_CASE("algebra automorphisms must preserve the bracket") {
    CHECK_THROWS_AS(
        algebra_automorphism(DenseMatrix::from_rows({{0, 0, 1}, {0, 1, 0}, {1, 0, 0}})),
        DomainError);
    CHECK_NOTHROW(graded_dilation(2.0, 3.0));
    // a generic bracket-preserving map: L(X)=X+Y, L(Y)=Y, L(Z)=Z
    CHECK_NOTHROW(algebra_automorphism(
        DenseMatrix::from_rows({{1, 0, 0}, {1, 1, 0}, {0, 0, 1}})));
}

TEST_CASE("graded dilations act by scaling in exponential coordinates") {
    AlgebraAutomorphism l = graded_dilation(2.0, 3.0);
    HeisenbergGroupElement g = exp_algebra({1.0, 1.0, 0.0});
    HeisenbergGroupElement image = automorphism_apply(l, g);
    CHECK(image.a == 2.0);
    CHECK(image.b == 3.0);
    CHECK(image.c == 0.0);

    CHECK(automorphism_apply(algebra_automorphism(DenseMatrix::diagonal({1.0, 1.0, 1.0})), g).a ==
          g.a);
}

TEST_CASE("transported automorphisms are group homomorphisms") {
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    AlgebraAutomorphism l = graded_dilation(2.0, 3.0);
    AlgebraAutomorphism skew =
        algebra_automorphism(DenseMatrix::from_rows({{1, 0, 0}, {1, 1, 0}, {0.5, 0, 1}}));
    for (const AlgebraAutomorphism& phi : {l, skew}) {
        for (int trial = 0; trial < 100; ++trial) {
            HeisenbergGroupElement g{unif(rng), unif(rng), unif(rng)};
            HeisenbergGroupElement h{unif(rng), unif(rng), unif(rng)};
            HeisenbergGroupElement lhs = automorphism_apply(phi, multiply(g, h));
            HeisenbergGroupElement rhs =
                multiply(automorphism_apply(phi, g), automorphism_apply(phi, h));
            CHECK(std::fabs(lhs.a - rhs.a) <= 1e-12);
            CHECK(std::fabs(lhs.b - rhs.b) <= 1e-12);
            CHECK(std::fabs(lhs.c - rhs.c) <= 1e-12);
        }
    }
}

TEST_CASE("exp conjugates the algebra automorphism with the group automorphism") {
    // In exponential coordinates exp is the identity chart, so the residual
    // of f . S = T . f with f = exp is floating-point zero.
    AlgebraAutomorphism l = graded_dilation(2.0, 3.0);
    MapSpec upstairs = linear_map(l.matrix, "heisenberg");
    MapSpec downstairs = heisenberg_automorphism_map(l.matrix);
    PointMap f = [](const StatePoint& p) {
        StatePoint q = p;
        q.space = "heisenberg";
        return q;
    };
    std::vector<StatePoint> samples;
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    for (int i = 0; i < 200; ++i)
        samples.push_back(vector_point("heisenberg", {unif(rng), unif(rng), unif(rng)}));
    PropernessProbeConfig probe;
    probe.ball_center = vector_point("heisenberg", {0.0, 0.0, 0.0});
    probe.ball_radius = 1.0;
    probe.target_metric = euclidean_metric();
    SemiconjugacyReport rep =
        semiconjugacy_check(f, upstairs, downstairs, samples, euclidean_metric(), probe);
    CHECK(rep.residual_max <= 1e-12);
    CHECK(rep.properness_conclusive);
    CHECK(rep.properness_pass);
}

TEST_CASE("the exponential covering of the circle is a semiconjugacy but not proper") {
    // f(x) = e^{ix}, S(x) = 2x on the line, T(z) = z^2 on the circle
    MapSpec upstairs = linear_map(DenseMatrix::diagonal({2.0}), "R^1");
    MapSpec downstairs = circle_doubling_map();
    PointMap f = [](const StatePoint& p) {
        return circle_point(p.coords[0] / (2.0 * M_PI));
    };
    std::vector<StatePoint> samples;
    for (int i = 0; i <= 4000; ++i)
        samples.push_back(scalar_point("R^1", -50.0 + 100.0 * double(i) / 4000.0));
    PropernessProbeConfig probe;
    probe.ball_center = circle_point(0.25);
    probe.ball_radius = 0.02;
    probe.target_metric = circle_arc_metric();
    SemiconjugacyReport rep =
        semiconjugacy_check(f, upstairs, downstairs, samples, circle_arc_metric(), probe);
    CHECK(rep.residual_max <= 1e-12);
    CHECK(rep.properness_conclusive);
    CHECK(!rep.properness_pass);  // preimages of the arc reach the sampling boundary
}

TEST_CASE("identity semiconjugacy of a map with itself is proper") {
    MapSpec doubling = circle_doubling_map();
    PointMap f = [](const StatePoint& p) { return p; };
    std::vector<StatePoint> samples = circle_grid(512);
    PropernessProbeConfig probe;
    probe.ball_center = circle_point(0.5);
    probe.ball_radius = 0.1;
    probe.target_metric = circle_arc_metric();
    SemiconjugacyReport rep =
        semiconjugacy_check(f, doubling, doubling, samples, circle_arc_metric(), probe);
    CHECK(rep.residual_max == 0.0);
    CHECK(rep.properness_pass);
}

TEST_CASE("bowen estimates agree for the algebra map and its group automorphism") {
    // exp transports the compactified metric; in exponential coordinates the
    // two systems produce the same orbits, so the estimates coincide
    AlgebraAutomorphism l = graded_dilation(2.0, 3.0);
    MapSpec algebra_side = linear_map(l.matrix, "heisenberg");
    MapSpec group_side = heisenberg_automorphism_map(l.matrix);
    SampleRegion box = make_region("box", box_grid("heisenberg", 2.0, 8, 3));
    SpanningSchedule schedule;
    schedule.eps_list = {0.2, 0.1};
    schedule.n_min = 0;
    schedule.n_max = 5;
    double a = metric_entropy_estimate(algebra_side, compactified_metric(3), box, schedule).value;
    double g = metric_entropy_estimate(group_side, compactified_metric(3), box, schedule).value;
    CHECK(std::fabs(a - g) <= 0.05 * std::max({std::fabs(a), std::fabs(g), 1e-9}));
}

TEST_CASE("classical entropy of graded dilations follows the closed form") {
    for (auto [lambda, mu] : {std::pair{2.0, 3.0}, {1.5, 4.0}, {2.5, 2.5}}) {
        AlgebraAutomorphism l = graded_dilation(lambda, mu);
        double expected = std::log(lambda) + std::log(mu) + std::log(lambda * mu);
        CHECK(classical_entropy(to_eigen(l.matrix)) == Approx(expected).margin(1e-12));
    }
}
