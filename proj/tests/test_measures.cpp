#include <catch2/catch.hpp>
#include <cmath>

#include "entropy_lab/measures.hpp"

using namespace entropy_lab;

namespace {
double binary_entropy(double p) { return phi(p) + phi(1.0 - p); }
}  // namespace

TEST_CASE("phi matches its definition") {
    CHECK(phi(0.0) == 0.0);
    CHECK(phi(1.0) == 0.0);
    CHECK(phi(0.5) == Approx(std::log(2.0) / 2.0).epsilon(1e-15));
    CHECK_THROWS_AS(phi(-0.1), DomainError);
    CHECK_THROWS_AS(phi(1.1), DomainError);
}

TEST_CASE("measure constructors validate their inputs") {
    CHECK_THROWS_AS(bernoulli_measure({0.5, 0.6}), DomainError);
    CHECK_THROWS_AS(bernoulli_measure({1.2, -0.2}), DomainError);
    CHECK_THROWS_AS(markov_measure({{0.5, 0.5}, {0.3, 0.6}}, {0.5, 0.5}), DomainError);
    CHECK_THROWS_AS(markov_measure({{0.9, 0.1}, {0.2, 0.8}}, {0.5, 0.5}), DomainError);
    CHECK_THROWS_AS(lift_measure(bernoulli_measure({0.5, 0.5}), 1.5), DomainError);
}

TEST_CASE("partition refinement materializes the expected cells") {
    MapSpec shift = full_shift_map(2);
    InvariantMeasure half = bernoulli_measure({0.5, 0.5});
    FinitePartition gen = generator_partition(2);

    auto depth0 = refine_partition_cells(half, gen, shift, 0);
    CHECK(depth0.size() == 2);

    auto depth2 = refine_partition_cells(half, gen, shift, 2);
    CHECK(depth2.size() == 8);
    for (const auto& cell : depth2) CHECK(cell.mass == Approx(0.125).epsilon(1e-15));

    MapSpec doubling = circle_doubling_map();
    InvariantMeasure lebesgue = lebesgue_circle_measure();
    FinitePartition halves = arc_partition({0.0, 0.5});
    auto arcs1 = refine_partition_cells(lebesgue, halves, doubling, 1);
    CHECK(arcs1.size() == 4);
    for (const auto& cell : arcs1) CHECK(cell.mass == Approx(0.25).epsilon(1e-13));
}

TEST_CASE("unsupported refinement combinations raise capability errors") {
    InvariantMeasure lebesgue = lebesgue_circle_measure();
    FinitePartition gen = generator_partition(2);
    CHECK_THROWS_AS(partition_entropy(lebesgue, gen, full_shift_map(2), 2), CapabilityError);
    FinitePartition halves = arc_partition({0.0, 0.5});
    CHECK_THROWS_AS(partition_entropy(lebesgue, halves, full_shift_map(2), 2), CapabilityError);
}

TEST_CASE("partition entropy of degenerate and fair bernoulli measures") {
    MapSpec shift = full_shift_map(2);
    FinitePartition gen = generator_partition(2);
    InvariantMeasure point_mass = bernoulli_measure({1.0, 0.0});
    for (std::size_t n : {0, 3, 7})
        CHECK(partition_entropy(point_mass, gen, shift, n) == Approx(0.0).margin(1e-15));

    InvariantMeasure half = bernoulli_measure({0.5, 0.5});
    for (std::size_t n : {0, 4, 9})
        CHECK(partition_entropy(half, gen, shift, n) ==
              Approx(double(n + 1) * std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("bernoulli(p) refined entropy matches the product closed form") {
    MapSpec shift = full_shift_map(2);
    FinitePartition gen = generator_partition(2);
    for (double p : {0.1, 0.3, 0.7}) {
        InvariantMeasure mu = bernoulli_measure({p, 1.0 - p});
        for (std::size_t n : {1, 5, 10})
            CHECK(partition_entropy(mu, gen, shift, n) ==
                  Approx(double(n + 1) * binary_entropy(p)).epsilon(1e-13));
    }
}

TEST_CASE("markov chains reduce to bernoulli when rows coincide") {
    MapSpec shift = full_shift_map(2);
    FinitePartition gen = generator_partition(2);
    InvariantMeasure uniform = markov_measure({{0.5, 0.5}, {0.5, 0.5}}, {0.5, 0.5});
    MeasureEntropyResult r = measure_entropy_estimate(uniform, gen, shift, 8);
    CHECK(r.value == Approx(std::log(2.0)).epsilon(1e-13));
    CHECK(r.subadditive);
}

TEST_CASE("markov refined entropy matches H(pi) + n h") {
    MapSpec shift = full_shift_map(2);
    FinitePartition gen = generator_partition(2);
    std::vector<std::vector<double>> p = {{0.9, 0.1}, {0.2, 0.8}};
    std::vector<double> pi = {2.0 / 3.0, 1.0 / 3.0};
    InvariantMeasure mu = markov_measure(p, pi);
    double h_step = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) h_step += pi[std::size_t(i)] * phi(p[std::size_t(i)][std::size_t(j)]);
    double h_pi = phi(pi[0]) + phi(pi[1]);
    for (std::size_t n : {1, 4, 8})
        CHECK(partition_entropy(mu, gen, shift, n) ==
              Approx(h_pi + double(n) * h_step).epsilon(1e-12));
}

TEST_CASE("lebesgue measure with dyadic arcs gives exactly log 2") {
    MapSpec doubling = circle_doubling_map();
    InvariantMeasure lebesgue = lebesgue_circle_measure();
    FinitePartition halves = arc_partition({0.0, 0.5});
    MeasureEntropyResult r = measure_entropy_estimate(lebesgue, halves, doubling, 10);
    CHECK(r.value == Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(r.subadditive);
}

TEST_CASE("refined entropy never exceeds the log cell count") {
    MapSpec shift = full_shift_map(2);
    FinitePartition gen = generator_partition(2);
    InvariantMeasure mu = bernoulli_measure({0.35, 0.65});
    for (std::size_t n : {0, 2, 5, 9}) {
        double h = partition_entropy(mu, gen, shift, n);
        CHECK(h >= 0.0);
        CHECK(h <= double(n + 1) * std::log(2.0) + 1e-12);
    }
}

TEST_CASE("lifting with c = 0 leaves entropies unchanged; c = 1 kills them") {
    MapSpec shift = full_shift_map(2);
    FinitePartition gen = with_infinity_cell(generator_partition(2), 0);
    InvariantMeasure mu = bernoulli_measure({0.5, 0.5});
    InvariantMeasure lift0 = lift_measure(mu, 0.0);
    InvariantMeasure lift1 = lift_measure(mu, 1.0);
    for (std::size_t n : {0, 3, 6}) {
        CHECK(partition_entropy(lift0, gen, shift, n) ==
              Approx(partition_entropy(mu, gen, shift, n)).margin(1e-12));
        CHECK(partition_entropy(lift1, gen, shift, n) == Approx(0.0).margin(1e-15));
    }
}

TEST_CASE("the lifted-measure identity holds to machine precision") {
    MapSpec shift = full_shift_map(2);
    FinitePartition gen = with_infinity_cell(generator_partition(2), 1);
    InvariantMeasure mu = bernoulli_measure({0.5, 0.5});
    for (double c : {0.0, 0.25, 0.5, 0.9, 1.0}) {
        for (std::size_t n : {0, 4, 8}) {
            LiftedIdentity id = lifted_entropy_identity(mu, gen, shift, n, c);
            CHECK(id.residual <= 1e-12);
            CHECK(id.b + phi(id.a) <= 2.0 * kPhiMax + 1e-15);
        }
    }
    // also against a biased measure and a coarser merged cell
    InvariantMeasure biased = bernoulli_measure({0.2, 0.8});
    for (double c : {0.25, 0.9}) {
        LiftedIdentity id = lifted_entropy_identity(biased, gen, shift, 6, c);
        CHECK(id.residual <= 1e-12);
    }
}

TEST_CASE("lifted measures require a declared infinity cell") {
    MapSpec shift = full_shift_map(2);
    FinitePartition gen = generator_partition(2);
    InvariantMeasure mu = lift_measure(bernoulli_measure({0.5, 0.5}), 0.5);
    CHECK_THROWS_AS(partition_entropy(mu, gen, shift, 3), DomainError);
}

TEST_CASE("the variational maximum over bernoulli measures sits at one half") {
    MapSpec shift = full_shift_map(2);
    FinitePartition gen = generator_partition(2);
    double best = -1.0, best_p = 0.0;
    for (int i = 1; i <= 9; ++i) {
        double p = 0.1 * i;
        double value = measure_entropy_estimate(bernoulli_measure({p, 1.0 - p}), gen, shift, 8).value;
        if (value > best) {
            best = value;
            best_p = p;
        }
    }
    CHECK(best_p == Approx(0.5));
    CHECK(best == Approx(std::log(2.0)).epsilon(1e-12));
}

#include "entropy_lab/cover_entropy.hpp"
#include "entropy_lab/universe.hpp"

TEST_CASE("measure entropy stays below the topological estimate") {
    // h_mu <= h: the measure side against the covering slope on the paired
    // doubling and full-shift examples
    MapSpec doubling = circle_doubling_map();
    double measure_doubling =
        measure_entropy_estimate(lebesgue_circle_measure(), arc_partition({0.0, 0.5}),
                                 doubling, 10)
            .value;
    CoveringSpec arcs = make_covering(
        {arc_set(0.0, 0.35), arc_set(1.0 / 3, 0.35), arc_set(2.0 / 3, 0.35)},
        doubling_arrangement_universe({0.0, 0.35, 1.0 / 3, 1.0 / 3 + 0.35, 2.0 / 3,
                                       2.0 / 3 + 0.35},
                                      8));
    double cover_doubling = covering_entropy(arcs, doubling, 8).slope;
    CHECK(measure_doubling <= 1.10 * cover_doubling + 1e-12);

    MapSpec shift = full_shift_map(2);
    CoveringSpec cylinders =
        make_covering({cylinder_set("0"), cylinder_set("1")}, shift_universe(2, 10));
    double cover_shift = covering_entropy(cylinders, shift, 8).slope;
    for (double p : {0.2, 0.5, 0.8}) {
        double m = measure_entropy_estimate(bernoulli_measure({p, 1.0 - p}),
                                            generator_partition(2), shift, 8)
                       .value;
        CHECK(m <= 1.10 * cover_shift + 1e-12);
    }
}
