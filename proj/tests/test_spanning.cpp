#include <catch2/catch.hpp>
#include <cmath>
#include <random>

#include "entropy_lab/spanning.hpp"
#include "entropy_lab/universe.hpp"

using namespace entropy_lab;

TEST_CASE("one point spans everything when eps is huge") {
    SampleRegion region = make_region("circle", circle_grid(64));
    CHECK(spanning_cardinality(circle_doubling_map(), circle_arc_metric(), region, 3, 10.0) == 1);
}

TEST_CASE("isometries have n-independent spanning counts") {
    MapSpec quarter_turn = linear_map(DenseMatrix::from_rows({{0.0, -1.0}, {1.0, 0.0}}), "R^2");
    std::vector<StatePoint> pts;
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int i = 0; i < 200; ++i) pts.push_back(vector_point("R^2", {unif(rng), unif(rng)}));
    SampleRegion region = make_region("disk", pts);
    std::int64_t base = spanning_cardinality(quarter_turn, euclidean_metric(), region, 0, 0.25);
    for (std::size_t n : {1, 3, 7})
        CHECK(spanning_cardinality(quarter_turn, euclidean_metric(), region, n, 0.25) == base);
}

TEST_CASE("doubling map spanning counts double per iterate") {
    SampleRegion region = make_region("circle", circle_grid(512));
    std::vector<std::int64_t> counts;
    for (std::size_t n = 0; n <= 4; ++n)
        counts.push_back(
            spanning_cardinality(circle_doubling_map(), circle_arc_metric(), region, n, 1.0 / 16));
    for (std::size_t i = 1; i < counts.size(); ++i) {
        double ratio = double(counts[i]) / double(counts[i - 1]);
        CHECK(ratio >= 1.6);
        CHECK(ratio <= 2.6);
    }
}

TEST_CASE("diag(2) on the unit interval grows like the doubling map") {
    MapSpec two = linear_map(DenseMatrix::diagonal({2.0}), "R^1");
    SampleRegion region = make_region("unit interval", interval_grid("R^1", 0.0, 1.0, 512));
    std::vector<std::int64_t> counts;
    for (std::size_t n = 0; n <= 4; ++n)
        counts.push_back(spanning_cardinality(two, euclidean_metric(), region, n, 1.0 / 16));
    for (std::size_t i = 1; i < counts.size(); ++i) {
        double ratio = double(counts[i]) / double(counts[i - 1]);
        CHECK(ratio >= 1.6);
        CHECK(ratio <= 2.6);
    }
}

TEST_CASE("compactified counts on a wide region stay bounded in n") {
    MapSpec two = linear_map(DenseMatrix::diagonal({2.0}), "R^1");
    SampleRegion region = make_region("wide line", symmetric_grid("R^1", 100.0, 801));
    std::vector<std::int64_t> counts;
    for (std::size_t n = 0; n <= 6; ++n)
        counts.push_back(spanning_cardinality(two, compactified_metric(1), region, n, 0.05));
    std::int64_t lo = *std::min_element(counts.begin(), counts.end());
    std::int64_t hi = *std::max_element(counts.begin(), counts.end());
    CHECK(hi - lo <= 3);  // orbits fly to the pole; separation stops growing
}

TEST_CASE("epsilon slope is exactly log 2 on the full shift") {
    SampleRegion region = make_region("2-shift words", shift_universe(2, 10));
    double slope = epsilon_slope(full_shift_map(2), shift_cylinder_metric(), region, 0.125,
                                 {0, 1, 2, 3, 4, 5});
    CHECK(slope == Approx(std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("epsilon slope of the identity and of isometries vanishes") {
    MapSpec identity = linear_map(DenseMatrix::diagonal({1.0, 1.0}), "R^2");
    std::vector<StatePoint> pts;
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int i = 0; i < 128; ++i) pts.push_back(vector_point("R^2", {unif(rng), unif(rng)}));
    SampleRegion region = make_region("square", pts);
    CHECK(epsilon_slope(identity, euclidean_metric(), region, 0.3, {0, 1, 2, 3}) ==
          Approx(0.0).margin(1e-12));
}

TEST_CASE("epsilon slope requires at least three n values") {
    SampleRegion region = make_region("circle", circle_grid(64));
    CHECK_THROWS_AS(
        epsilon_slope(circle_doubling_map(), circle_arc_metric(), region, 0.1, {1, 2}),
        DomainError);
}

TEST_CASE("greedy counts are sandwiched by the exact optimum") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    MapSpec doubling = circle_doubling_map();
    MetricSpec arc = circle_arc_metric();
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<StatePoint> pts;
        for (int i = 0; i < 40; ++i) pts.push_back(circle_point(unif(rng)));
        SampleRegion region = make_region("random circle points", pts);
        SpanningOptions exact_opts;
        exact_opts.mode = SpanningMode::ExactSmall;
        std::int64_t greedy = spanning_cardinality(doubling, arc, region, 3, 0.05);
        std::int64_t exact = spanning_cardinality(doubling, arc, region, 3, 0.05, exact_opts);
        CHECK(greedy >= exact);
        CHECK(double(exact) >= double(greedy) / (1.0 + std::log(40.0)) - 1e-12);
    }
}

TEST_CASE("enlarging the region never decreases counts") {
    MapSpec doubling = circle_doubling_map();
    MetricSpec arc = circle_arc_metric();
    SampleRegion small = make_region("half grid", [] {
        auto g = circle_grid(256);
        g.resize(128);
        return g;
    }());
    SampleRegion big = make_region("full grid", circle_grid(256));
    for (std::size_t n : {0, 2, 4}) {
        std::int64_t c_small = spanning_cardinality(doubling, arc, small, n, 0.03);
        std::int64_t c_big = spanning_cardinality(doubling, arc, big, n, 0.03);
        CHECK(c_small <= c_big);
    }
}

TEST_CASE("metric entropy estimate recovers log 2 for the doubling map") {
    SampleRegion region = make_region("circle", circle_grid(1024));
    SpanningSchedule schedule;
    schedule.eps_list = {1.0 / 16, 1.0 / 32};
    schedule.n_min = 0;
    schedule.n_max = 7;
    EntropyEstimate est =
        metric_entropy_estimate(circle_doubling_map(), circle_arc_metric(), region, schedule);
    CHECK(est.value == Approx(std::log(2.0)).epsilon(0.10));
    CHECK(est.diagnostics.counts_monotone_in_eps);
    // the table contains every scheduled cell
    CHECK(est.cells.size() == 16);
}

TEST_CASE("estimates flag saturated cells instead of fitting through them") {
    SampleRegion region = make_region("tiny circle", circle_grid(32));
    SpanningSchedule schedule;
    schedule.eps_list = {1.0 / 16};
    schedule.n_min = 0;
    schedule.n_max = 8;
    EntropyEstimate est =
        metric_entropy_estimate(circle_doubling_map(), circle_arc_metric(), region, schedule);
    CHECK(est.diagnostics.any_saturated);
    for (const auto& cell : est.cells)
        if (cell.count >= 32.0) CHECK(cell.saturated);
}

TEST_CASE("compactified slope stays within 0.05 of the euclidean slope") {
    MapSpec two = linear_map(DenseMatrix::diagonal({2.0}), "R^1");
    SampleRegion region = make_region("unit interval", interval_grid("R^1", 0.0, 1.0, 512));
    SpanningSchedule schedule;
    schedule.eps_list = {1.0 / 8, 1.0 / 16};
    schedule.n_min = 0;
    schedule.n_max = 5;
    double euclid = metric_entropy_estimate(two, euclidean_metric(), region, schedule).value;
    double compact = metric_entropy_estimate(two, compactified_metric(1), region, schedule).value;
    CHECK(compact <= euclid + 0.05);
}

TEST_CASE("schedules are validated") {
    SpanningSchedule schedule;
    schedule.eps_list = {};
    schedule.n_min = 0;
    schedule.n_max = 4;
    SampleRegion region = make_region("circle", circle_grid(32));
    CHECK_THROWS_AS(
        metric_entropy_estimate(circle_doubling_map(), circle_arc_metric(), region, schedule),
        DomainError);
    schedule.eps_list = {0.1, 0.2};  // not decreasing
    CHECK_THROWS_AS(
        metric_entropy_estimate(circle_doubling_map(), circle_arc_metric(), region, schedule),
        DomainError);
}

TEST_CASE("exact spanning refuses regions beyond its cap") {
    SampleRegion region = make_region("circle", circle_grid(600));
    SpanningOptions opts;
    opts.mode = SpanningMode::ExactSmall;
    opts.exact_cap = 512;
    CHECK_THROWS_AS(
        spanning_cardinality(circle_doubling_map(), circle_arc_metric(), region, 2, 0.1, opts),
        DomainError);
}

TEST_CASE("regions are validated against the metric before any threads start") {
    SampleRegion circle = make_region("circle", circle_grid(32));
    CHECK_THROWS_AS(
        spanning_cardinality(circle_doubling_map(), shift_cylinder_metric(), circle, 2, 0.1),
        DomainError);
    SampleRegion words = make_region("words", shift_universe(2, 6));
    CHECK_THROWS_AS(spanning_cardinality(full_shift_map(2), euclidean_metric(), words, 2, 0.1),
                    DomainError);
    std::vector<StatePoint> planar;
    for (int i = 0; i < 9; ++i) planar.push_back(vector_point("R^2", {double(i), 0.0}));
    SampleRegion plane = make_region("plane", planar);
    MapSpec identity2 = linear_map(DenseMatrix::diagonal({1.0, 1.0}), "R^2");
    CHECK_THROWS_AS(spanning_cardinality(identity2, circle_arc_metric(), plane, 2, 0.1),
                    DomainError);
    CHECK_THROWS_AS(spanning_cardinality(identity2, compactified_metric(3), plane, 2, 0.1),
                    DomainError);
}

TEST_CASE("regions may include the point at infinity under the compactified metric") {
    MapSpec two = linear_map(DenseMatrix::diagonal({2.0}), "R^1");
    std::vector<StatePoint> pts = symmetric_grid("R^1", 100.0, 201);
    pts.push_back(infinity_point("R^1"));
    SampleRegion region = make_region("wide line with infinity", pts);
    std::int64_t with_inf =
        spanning_cardinality(two, compactified_metric(1), region, 3, 0.05);
    CHECK(with_inf >= 1);
    // infinity must be rejected under a metric that cannot reach it
    CHECK_THROWS_AS(spanning_cardinality(two, euclidean_metric(), region, 3, 0.05), DomainError);
}
