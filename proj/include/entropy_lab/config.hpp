#pragma once

#include <nlohmann/json.hpp>
#include <random>
#include <string>
#include <vector>

#include "entropy_lab/cover_entropy.hpp"
#include "entropy_lab/covering.hpp"
#include "entropy_lab/errors.hpp"
#include "entropy_lab/heisenberg.hpp"
#include "entropy_lab/io.hpp"
#include "entropy_lab/jordan.hpp"
#include "entropy_lab/measures.hpp"
#include "entropy_lab/metrics.hpp"
#include "entropy_lab/presets.hpp"
#include "entropy_lab/spanning.hpp"
#include "entropy_lab/systems.hpp"
#include "entropy_lab/universe.hpp"

namespace entropy_lab {

// Declarative experiment documents: systems, metrics, regions, coverings,
// partitions, measures and schedules as JSON-shaped config (kind plus
// parameters, matrices row-major). Schema violations throw ConfigError with
// the offending field path.

namespace config_detail {

inline const json& require(const json& j, const std::string& path, const std::string& key) {
    if (!j.is_object()) throw ConfigError(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw ConfigError(path + "." + key, "missing required field");
    return *it;
}

inline std::string require_string(const json& j, const std::string& path, const std::string& key) {
    const json& v = require(j, path, key);
    if (!v.is_string()) throw ConfigError(path + "." + key, "expected a string");
    return v.get<std::string>();
}

inline double require_number(const json& j, const std::string& path, const std::string& key) {
    const json& v = require(j, path, key);
    if (!v.is_number()) throw ConfigError(path + "." + key, "expected a number");
    return v.get<double>();
}

inline int require_int(const json& j, const std::string& path, const std::string& key) {
    const json& v = require(j, path, key);
    if (!v.is_number_integer()) throw ConfigError(path + "." + key, "expected an integer");
    return v.get<int>();
}

inline std::vector<double> number_list(const json& v, const std::string& path) {
    if (!v.is_array() || v.empty()) throw ConfigError(path, "expected a nonempty array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number()) throw ConfigError(path + "[" + std::to_string(i) + "]", "expected a number");
        out.push_back(v[i].get<double>());
    }
    return out;
}

inline DenseMatrix matrix_from(const json& v, const std::string& path) {
    if (!v.is_array() || v.empty()) throw ConfigError(path, "expected an array of rows");
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < v.size(); ++i)
        rows.push_back(number_list(v[i], path + "[" + std::to_string(i) + "]"));
    try {
        return DenseMatrix::from_rows(rows);
    } catch (const DomainError& e) {
        throw ConfigError(path, e.what());
    }
}

}  // namespace config_detail

inline MapSpec parse_system(const json& j, const std::string& path = "system") {
    using namespace config_detail;
    std::string kind = require_string(j, path, "kind");
    try {
        if (kind == "circle_doubling") return circle_doubling_map();
        if (kind == "linear") return linear_map(matrix_from(require(j, path, "matrix"), path + ".matrix"));
        if (kind == "full_shift") return full_shift_map(require_int(j, path, "alphabet_size"));
        if (kind == "heisenberg_automorphism")
            return heisenberg_automorphism_map(
                matrix_from(require(j, path, "algebra_matrix"), path + ".algebra_matrix"));
        if (kind == "composition") {
            const json& parts = require(j, path, "parts");
            if (!parts.is_array() || parts.empty())
                throw ConfigError(path + ".parts", "expected a nonempty array");
            std::vector<MapSpec> specs;
            for (std::size_t i = 0; i < parts.size(); ++i)
                specs.push_back(parse_system(parts[i], path + ".parts[" + std::to_string(i) + "]"));
            return composed_map(std::move(specs));
        }
    } catch (const DomainError& e) {
        throw ConfigError(path, e.what());
    }
    throw ConfigError(path + ".kind", "unknown system kind '" + kind + "'");
}

inline MetricSpec parse_metric(const json& j, const std::string& path = "metric") {
    using namespace config_detail;
    std::string kind = require_string(j, path, "kind");
    if (kind == "euclidean") return euclidean_metric();
    if (kind == "circle_arc") return circle_arc_metric();
    if (kind == "shift_cylinder") return shift_cylinder_metric(j.value("base", 2.0));
    if (kind == "compactified")
        return compactified_metric(std::size_t(require_int(j, path, "base_dimension")));
    throw ConfigError(path + ".kind", "unknown metric kind '" + kind + "'");
}

inline std::vector<StatePoint> parse_universe(const json& j, const std::string& path) {
    using namespace config_detail;
    std::string kind = require_string(j, path, "kind");
    try {
        // 1-D grids default to 10^4 witness points
        if (kind == "circle_grid") return circle_grid(std::size_t(j.value("points", 10000)));
        if (kind == "interval_grid")
            return interval_grid(j.value("space", std::string("R^1")),
                                 require_number(j, path, "a"), require_number(j, path, "b"),
                                 std::size_t(j.value("points", 10000)));
        if (kind == "symmetric_grid")
            return symmetric_grid(j.value("space", std::string("R^1")),
                                  require_number(j, path, "radius"),
                                  std::size_t(j.value("points", 10000)));
        if (kind == "box_grid")
            return box_grid(j.value("space", std::string("R^3")), require_number(j, path, "radius"),
                            std::size_t(require_int(j, path, "per_axis")),
                            std::size_t(require_int(j, path, "dim")));
        if (kind == "shift_words")
            return shift_universe(require_int(j, path, "alphabet_size"),
                                  std::size_t(require_int(j, path, "length")));
        if (kind == "doubling_arrangement")
            return doubling_arrangement_universe(
                number_list(require(j, path, "breakpoints"), path + ".breakpoints"),
                std::size_t(require_int(j, path, "depth")));
    } catch (const DomainError& e) {
        throw ConfigError(path, e.what());
    }
    throw ConfigError(path + ".kind", "unknown universe kind '" + kind + "'");
}

inline OpenSet parse_open_set(const json& j, const std::string& path) {
    using namespace config_detail;
    if (!j.is_object() || j.size() != 1)
        throw ConfigError(path, "expected exactly one of arc/interval/ball/complement_ball/cylinder");
    try {
        if (j.contains("arc")) {
            std::vector<double> ab = number_list(j["arc"], path + ".arc");
            if (ab.size() != 2) throw ConfigError(path + ".arc", "expected [a, b]");
            double length = ab[1] - ab[0];
            return arc_set(ab[0], length);
        }
        if (j.contains("interval")) {
            std::vector<double> ab = number_list(j["interval"], path + ".interval");
            if (ab.size() != 2) throw ConfigError(path + ".interval", "expected [a, b]");
            return interval_set(ab[0], ab[1]);
        }
        if (j.contains("ball"))
            return ball_set(number_list(require(j["ball"], path + ".ball", "center"),
                                        path + ".ball.center"),
                            require_number(j["ball"], path + ".ball", "radius"));
        if (j.contains("complement_ball"))
            return complement_ball_set(
                number_list(require(j["complement_ball"], path + ".complement_ball", "center"),
                            path + ".complement_ball.center"),
                require_number(j["complement_ball"], path + ".complement_ball", "radius"));
        if (j.contains("cylinder")) {
            if (!j["cylinder"].is_string())
                throw ConfigError(path + ".cylinder", "expected a word string");
            return cylinder_set(j["cylinder"].get<std::string>());
        }
    } catch (const DomainError& e) {
        throw ConfigError(path, e.what());
    }
    throw ConfigError(path, "unknown open-set shape");
}

inline InvariantMeasure parse_measure(const json& j, const std::string& path = "measure") {
    using namespace config_detail;
    if (!j.is_object() || j.size() != 1)
        throw ConfigError(path, "expected exactly one of bernoulli/markov/lebesgue_circle/lift");
    try {
        if (j.contains("bernoulli"))
            return bernoulli_measure(number_list(j["bernoulli"], path + ".bernoulli"));
        if (j.contains("markov")) {
            const json& m = j["markov"];
            DenseMatrix p = matrix_from(require(m, path + ".markov", "P"), path + ".markov.P");
            std::vector<double> pi =
                number_list(require(m, path + ".markov", "pi"), path + ".markov.pi");
            std::vector<std::vector<double>> rows(p.dim, std::vector<double>(p.dim));
            for (std::size_t i = 0; i < p.dim; ++i)
                for (std::size_t k = 0; k < p.dim; ++k) rows[i][k] = p(i, k);
            return markov_measure(rows, pi);
        }
        if (j.contains("lebesgue_circle")) return lebesgue_circle_measure();
        if (j.contains("lift")) {
            const json& l = j["lift"];
            return lift_measure(parse_measure(require(l, path + ".lift", "base"), path + ".lift.base"),
                                require_number(l, path + ".lift", "c"));
        }
    } catch (const DomainError& e) {
        throw ConfigError(path, e.what());
    }
    throw ConfigError(path, "unknown measure kind");
}

inline FinitePartition parse_partition(const json& j, const std::string& path = "partition") {
    using namespace config_detail;
    std::string kind = require_string(j, path, "kind");
    FinitePartition part;
    try {
        if (kind == "symbols") {
            const json& cells = require(j, path, "cells");
            if (!cells.is_array() || cells.empty())
                throw ConfigError(path + ".cells", "expected a nonempty array of symbol groups");
            std::vector<std::vector<int>> groups;
            for (std::size_t i = 0; i < cells.size(); ++i) {
                std::vector<int> group;
                for (double v : number_list(cells[i], path + ".cells[" + std::to_string(i) + "]"))
                    group.push_back(int(v));
                groups.push_back(std::move(group));
            }
            part = symbol_partition(require_int(j, path, "alphabet_size"), std::move(groups));
        } else if (kind == "arcs") {
            part = arc_partition(number_list(require(j, path, "breakpoints"), path + ".breakpoints"));
        } else {
            throw ConfigError(path + ".kind", "unknown partition kind '" + kind + "'");
        }
        if (j.contains("infinity_cell") && j["infinity_cell"].get<int>() >= 0)
            part = with_infinity_cell(part, j["infinity_cell"].get<int>());
    } catch (const DomainError& e) {
        throw ConfigError(path, e.what());
    }
    return part;
}

inline SpanningSchedule parse_schedule(const json& j, const std::string& path = "schedule") {
    using namespace config_detail;
    SpanningSchedule s;
    s.eps_list = number_list(require(j, path, "eps_list"), path + ".eps_list");
    s.n_min = require_int(j, path, "n_min");
    s.n_max = require_int(j, path, "n_max");
    try {
        validate_schedule(s);
    } catch (const DomainError& e) {
        throw ConfigError(path, e.what());
    }
    return s;
}

// Runs an explicit experiment config. Three experiment kinds cover the
// library surface: "bowen" (system+metric+region+schedule), "covering"
// (system+covering+n_max) and "measure" (system+measure+partition+n_max).
inline PresetOutput run_config(const json& doc, const PresetOptions& options = {}) {
    using namespace config_detail;
    std::string experiment = require_string(doc, "", "experiment");
    PresetOutput out;
    out.preset = "config-" + experiment;
    if (experiment == "bowen") {
        MapSpec map = parse_system(require(doc, "", "system"));
        MetricSpec metric = parse_metric(require(doc, "", "metric"));
        std::vector<StatePoint> points = parse_universe(require(doc, "", "region"), "region");
        SampleRegion region = make_region(doc.value("description", std::string("config region")),
                                          std::move(points));
        SpanningSchedule schedule = parse_schedule(require(doc, "", "schedule"));
        SpanningOptions sopt;
        sopt.threads = options.threads;
        EntropyEstimate est;
        try {
            est = metric_entropy_estimate(map, metric, region, schedule, sopt);
        } catch (const DomainError& e) {
            throw ConfigError("region", e.what());
        }
        out.tables.push_back(spanning_csv("bowen_table", est));
        out.records.push_back({"config/bowen", {{"schedule", {{"n_max", schedule.n_max}}}},
                               est.value, estimate_json(est)});
        return out;
    }
    if (experiment == "covering") {
        MapSpec map = parse_system(require(doc, "", "system"));
        const json& cov_doc = require(doc, "", "covering");
        const json& elems = require(cov_doc, "covering", "elements");
        if (!elems.is_array() || elems.empty())
            throw ConfigError("covering.elements", "expected a nonempty array");
        std::vector<OpenSet> sets;
        for (std::size_t i = 0; i < elems.size(); ++i)
            sets.push_back(parse_open_set(elems[i], "covering.elements[" + std::to_string(i) + "]"));
        std::vector<StatePoint> universe =
            parse_universe(require(cov_doc, "covering", "universe"), "covering.universe");
        int n_max = require_int(cov_doc, "covering", "n_max");
        CoveringEntropyResult r;
        try {
            CoveringSpec cov = make_covering(std::move(sets), std::move(universe));
            r = covering_entropy(cov, map, n_max);
        } catch (const CoverageViolation& e) {
            throw ConfigError("covering", e.what());
        } catch (const DomainError& e) {
            throw ConfigError("covering", e.what());
        }
        out.tables.push_back(covering_csv("cover_table", r));
        out.records.push_back({"config/covering", {{"n_max", n_max}}, r.slope, covering_json(r)});
        return out;
    }
    if (experiment == "measure") {
        MapSpec map = parse_system(require(doc, "", "system"));
        InvariantMeasure mu = parse_measure(require(doc, "", "measure"));
        FinitePartition part = parse_partition(require(doc, "", "partition"));
        int n_max = require_int(doc, "", "n_max");
        MeasureEntropyResult r;
        try {
            r = measure_entropy_estimate(mu, part, map, n_max);
        } catch (const CapabilityError& e) {
            throw ConfigError("partition", e.what());
        } catch (const DomainError& e) {
            throw ConfigError("measure", e.what());
        }
        out.tables.push_back(sequence_csv("measure_sequence", r.sequence));
        out.records.push_back({"config/measure",
                               {{"n_max", n_max}},
                               r.value,
                               {{"subadditive", r.subadditive}, {"notes", r.notes}}});
        return out;
    }
    if (experiment == "jordan") {
        DenseMatrix m = matrix_from(require(doc, "", "matrix"), "matrix");
        JordanTriple t;
        try {
            t = jordan_multiplicative(to_eigen(m));
        } catch (const DomainError& e) {
            throw ConfigError("matrix", e.what());
        }
        auto matrix_rows = [](const Matrix& mat) {
            json rows = json::array();
            for (Eigen::Index i = 0; i < mat.rows(); ++i) {
                json row = json::array();
                for (Eigen::Index j = 0; j < mat.cols(); ++j) row.push_back(mat(i, j));
                rows.push_back(row);
            }
            return rows;
        };
        json eigenvalues = json::array();
        for (const auto& z : t.eigenvalues) eigenvalues.push_back({z.real(), z.imag()});
        const JordanInvariantReport& rep = t.report;
        json invariants = {
            {"recomposition",
             {{"residual", rep.recomposition_residual}, {"pass", rep.recomposition_residual <= 1e-9}}},
            {"commutation",
             {{"residual", rep.commutator_residual}, {"pass", rep.commutator_residual <= 1e-9}}},
            {"hyperbolic_positive_diagonalizable",
             {{"residual", rep.hyperbolic_residual},
              {"min_eigenvalue", rep.min_hyperbolic_eigenvalue},
              {"pass", rep.hyperbolic_ok()}}},
            {"unipotent_nilpotency",
             {{"residual", rep.unipotent_residual}, {"pass", rep.unipotent_residual <= 1e-9}}},
            {"elliptic_power_bound",
             {{"max_norm", rep.elliptic_power_max},
              {"cap", rep.elliptic_power_cap},
              {"pass", rep.elliptic_power_max <= rep.elliptic_power_cap}}}};
        out.records.push_back({"config/jordan",
                               {{"dim", m.dim}},
                               rep.recomposition_residual,
                               {{"hyperbolic", matrix_rows(t.hyperbolic)},
                                {"elliptic", matrix_rows(t.elliptic)},
                                {"unipotent", matrix_rows(t.unipotent)},
                                {"eigenvalues", eigenvalues},
                                {"invariants", invariants},
                                {"conditioning_warning", t.conditioning_warning},
                                {"classical_entropy", classical_entropy(to_eigen(m))},
                                {"recurrent_dimension", recurrent_set(to_eigen(m)).dimension()}}});
        return out;
    }
    if (experiment == "heisenberg_check") {
        DenseMatrix l = matrix_from(require(doc, "", "algebra_matrix"), "algebra_matrix");
        AlgebraAutomorphism phi;
        try {
            phi = algebra_automorphism(l);
        } catch (const DomainError& e) {
            throw ConfigError("algebra_matrix", e.what());
        }
        std::mt19937_64 rng(options.seed);
        std::uniform_real_distribution<double> unif(-2.0, 2.0);
        double worst_hom = 0.0, worst_roundtrip = 0.0;
        for (int i = 0; i < 100; ++i) {
            HeisenbergGroupElement g{unif(rng), unif(rng), unif(rng)};
            HeisenbergGroupElement h{unif(rng), unif(rng), unif(rng)};
            HeisenbergGroupElement lhs = automorphism_apply(phi, multiply(g, h));
            HeisenbergGroupElement rhs =
                multiply(automorphism_apply(phi, g), automorphism_apply(phi, h));
            worst_hom = std::max({worst_hom, std::fabs(lhs.a - rhs.a), std::fabs(lhs.b - rhs.b),
                                  std::fabs(lhs.c - rhs.c)});
            HeisenbergAlgebraElement x{unif(rng), unif(rng), unif(rng)};
            HeisenbergAlgebraElement back = log_group(exp_algebra(x));
            worst_roundtrip = std::max({worst_roundtrip, std::fabs(back.a - x.a),
                                        std::fabs(back.b - x.b), std::fabs(back.c - x.c)});
        }
        // conjugacy residual of exp between d_1(phi) and phi, plus the
        // bounded-preimage probe for exp
        MapSpec upstairs = linear_map(phi.matrix, "heisenberg");
        MapSpec downstairs = heisenberg_automorphism_map(phi.matrix);
        PointMap f = [](const StatePoint& p) {
            StatePoint q = p;
            q.space = "heisenberg";
            return q;
        };
        std::vector<StatePoint> samples;
        for (int i = 0; i < 400; ++i)
            samples.push_back(vector_point("heisenberg", {unif(rng), unif(rng), unif(rng)}));
        PropernessProbeConfig probe;
        probe.ball_center = vector_point("heisenberg", {0.0, 0.0, 0.0});
        probe.ball_radius = 1.0;
        probe.target_metric = euclidean_metric();
        SemiconjugacyReport rep =
            semiconjugacy_check(f, upstairs, downstairs, samples, euclidean_metric(), probe);
        out.records.push_back({"config/heisenberg_check",
                               {{"seed", options.seed}},
                               rep.residual_max,
                               {{"homomorphism_residual", worst_hom},
                                {"roundtrip_residual", worst_roundtrip},
                                {"semiconjugacy_residual", rep.residual_max},
                                {"properness_pass", rep.properness_pass},
                                {"properness_conclusive", rep.properness_conclusive},
                                {"classical_entropy", classical_entropy(to_eigen(phi.matrix))}}});
        return out;
    }
    throw ConfigError("experiment", "unknown experiment kind '" + experiment + "'");
}

}  // namespace entropy_lab
