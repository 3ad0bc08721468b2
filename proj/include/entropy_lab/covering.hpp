#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "entropy_lab/errors.hpp"
#include "entropy_lab/metrics.hpp"
#include "entropy_lab/points.hpp"
#include "entropy_lab/set_cover.hpp"
#include "entropy_lab/systems.hpp"

namespace entropy_lab {

enum class SetShape { Arc, Interval, Ball, ComplementBall, Cylinder };

// An element of a covering: a membership predicate plus a readable form.
// Arcs live on the circle [0,1) and wrap; intervals and balls are euclidean
// half-open / open; complement-of-ball is the standard unbounded element
// with compact complement.
struct OpenSet {
    SetShape shape = SetShape::Interval;
    double start = 0.0, length = 0.0;  // Arc: [start, start+length) mod 1
    double lo = 0.0, hi = 0.0;         // Interval: [lo, hi)
    std::vector<double> center;        // Ball / ComplementBall
    double radius = 0.0;
    std::string word;  // Cylinder prefix

    bool contains(const StatePoint& x) const {
        switch (shape) {
            case SetShape::Arc: {
                if (x.at_infinity) return false;
                double t = x.coords.at(0) - start;
                t -= std::floor(t);
                return t < length;
            }
            case SetShape::Interval:
                return !x.at_infinity && x.coords.at(0) >= lo && x.coords.at(0) < hi;
            case SetShape::Ball: {
                if (x.at_infinity) return false;
                double s = 0.0;
                for (std::size_t i = 0; i < center.size(); ++i) {
                    double d = x.coords.at(i) - center[i];
                    s += d * d;
                }
                return s < radius * radius;
            }
            case SetShape::ComplementBall: {
                if (x.at_infinity) return true;
                double s = 0.0;
                for (std::size_t i = 0; i < center.size(); ++i) {
                    double d = x.coords.at(i) - center[i];
                    s += d * d;
                }
                return s > radius * radius;
            }
            case SetShape::Cylinder:
                return x.symbolic && x.word.compare(0, word.size(), word) == 0;
        }
        return false;
    }

    // Unbounded elements are declared complement-compact; everything else is
    // declared closure-compact. Declarations are structural, not verified.
    bool complement_compact() const { return shape == SetShape::ComplementBall; }

    std::string describe() const {
        std::ostringstream os;
        switch (shape) {
            case SetShape::Arc: os << "arc[" << start << "," << start + length << ")"; break;
            case SetShape::Interval: os << "interval[" << lo << "," << hi << ")"; break;
            case SetShape::Ball: os << "ball(r=" << radius << ")"; break;
            case SetShape::ComplementBall: os << "complement_ball(r=" << radius << ")"; break;
            case SetShape::Cylinder: os << "cylinder[" << word << "]"; break;
        }
        return os.str();
    }
};

inline OpenSet arc_set(double start, double length) {
    if (length <= 0.0 || length > 1.0) throw DomainError("arc length must be in (0,1]");
    OpenSet s;
    s.shape = SetShape::Arc;
    s.start = start - std::floor(start);
    s.length = length;
    return s;
}

inline OpenSet interval_set(double lo, double hi) {
    if (!(lo < hi)) throw DomainError("interval needs lo < hi");
    OpenSet s;
    s.shape = SetShape::Interval;
    s.lo = lo;
    s.hi = hi;
    return s;
}

inline OpenSet ball_set(std::vector<double> center, double radius) {
    if (radius <= 0.0) throw DomainError("ball radius must be positive");
    OpenSet s;
    s.shape = SetShape::Ball;
    s.center = std::move(center);
    s.radius = radius;
    return s;
}

inline OpenSet complement_ball_set(std::vector<double> center, double radius) {
    if (radius <= 0.0) throw DomainError("ball radius must be positive");
    OpenSet s;
    s.shape = SetShape::ComplementBall;
    s.center = std::move(center);
    s.radius = radius;
    return s;
}

inline OpenSet cylinder_set(std::string word) {
    if (word.empty()) throw DomainError("cylinder word must be nonempty");
    OpenSet s;
    s.shape = SetShape::Cylinder;
    s.word = std::move(word);
    return s;
}

// A finite covering with a witness universe. All covering and set-cover
// statements are relative to the universe.
struct CoveringSpec {
    std::vector<OpenSet> elements;
    std::vector<StatePoint> universe;
};

inline CoveringSpec make_covering(std::vector<OpenSet> elements, std::vector<StatePoint> universe,
                                  std::size_t max_unbounded = 1) {
    if (elements.empty()) throw DomainError("covering needs at least one element");
    if (elements.size() > 64) throw DomainError("coverings support at most 64 elements");
    if (universe.empty()) throw DomainError("covering needs a nonempty witness universe");
    std::size_t unbounded = 0;
    for (const auto& e : elements)
        if (e.complement_compact()) ++unbounded;
    if (unbounded > max_unbounded)
        throw DomainError("covering declares " + std::to_string(unbounded) +
                          " unbounded elements, at most " + std::to_string(max_unbounded) +
                          " allowed");
    for (std::size_t i = 0; i < universe.size(); ++i) {
        bool hit = false;
        for (const auto& e : elements)
            if (e.contains(universe[i])) {
                hit = true;
                break;
            }
        if (!hit)
            throw CoverageViolation("universe point " + std::to_string(i) +
                                        " lies in no covering element",
                                    i);
    }
    CoveringSpec cov;
    cov.elements = std::move(elements);
    cov.universe = std::move(universe);
    return cov;
}

// One element of alpha^n: the index tuple (i_0,...,i_n) together with the
// witness points x whose orbit satisfies T^j x in A_{i_j} for every j.
struct RefinedElement {
    std::vector<std::uint8_t> tuple;
    std::vector<std::int32_t> witnesses;
};

struct RefinedCovering {
    std::size_t depth = 0;
    std::size_t n_base_elements = 0;
    std::size_t universe_size = 0;
    std::vector<RefinedElement> elements;

    SetCoverInstance to_set_cover() const {
        SetCoverInstance inst;
        inst.n_points = universe_size;
        inst.sets.reserve(elements.size());
        for (const auto& e : elements) inst.sets.push_back(e.witnesses);
        return inst;
    }
};

// alpha^n over the witness universe: all index tuples realized by at least
// one witness orbit. Tuples are emitted in lexicographic order.
inline RefinedCovering refine_covering(const CoveringSpec& cov, const MapSpec& map, std::size_t n,
                                       std::size_t element_cap = (std::size_t(1) << 22)) {
    std::size_t m = cov.universe.size();
    std::size_t k = cov.elements.size();

    // membership mask of T^j x_i over the base elements
    std::vector<std::uint64_t> mask(m * (n + 1));
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<StatePoint> orb = orbit(map, cov.universe[i], n);
        for (std::size_t j = 0; j <= n; ++j) {
            std::uint64_t bits = 0;
            for (std::size_t e = 0; e < k; ++e)
                if (cov.elements[e].contains(orb[j])) bits |= std::uint64_t(1) << e;
            if (bits == 0)
                throw CoverageViolation("universe point " + std::to_string(i) +
                                            " leaves the covering at iterate " + std::to_string(j),
                                        i);
            mask[i * (n + 1) + j] = bits;
        }
    }

    std::vector<RefinedElement> frontier;
    for (std::size_t e = 0; e < k; ++e) {
        RefinedElement el;
        el.tuple = {std::uint8_t(e)};
        for (std::size_t i = 0; i < m; ++i)
            if (mask[i * (n + 1)] >> e & 1) el.witnesses.push_back(std::int32_t(i));
        if (!el.witnesses.empty()) frontier.push_back(std::move(el));
    }
    for (std::size_t j = 1; j <= n; ++j) {
        std::vector<RefinedElement> next;
        for (const auto& el : frontier) {
            for (std::size_t e = 0; e < k; ++e) {
                RefinedElement child;
                for (std::int32_t i : el.witnesses)
                    if (mask[std::size_t(i) * (n + 1) + j] >> e & 1) child.witnesses.push_back(i);
                if (child.witnesses.empty()) continue;
                child.tuple = el.tuple;
                child.tuple.push_back(std::uint8_t(e));
                next.push_back(std::move(child));
                if (next.size() > element_cap)
                    throw DomainError("refined covering exceeds the element cap");
            }
        }
        frontier = std::move(next);
    }

    RefinedCovering out;
    out.depth = n;
    out.n_base_elements = k;
    out.universe_size = m;
    out.elements = std::move(frontier);
    return out;
}

// N(alpha^n) over the witness universe; exact when the solver finishes,
// otherwise a certified interval flagged inexact.
inline SetCoverResult minimal_subcover_cardinality(const RefinedCovering& refined,
                                                   const SetCoverOptions& options = {}) {
    return solve_set_cover(refined.to_set_cover(), options);
}

struct LebesgueResult {
    double epsilon = 0.0;
    bool failed = false;     // no grid value worked
    double grid_start = 0.0;
    double threshold = 0.0;  // sup of feasible epsilon over the universe
};

// Direct definition check: every eps-ball around a universe point, cut to
// the universe, sits inside a single element.
inline bool lebesgue_feasible(const CoveringSpec& cov, const MetricSpec& metric, double eps) {
    for (const auto& x : cov.universe) {
        bool ok = false;
        for (const auto& a : cov.elements) {
            if (!a.contains(x)) continue;
            bool inside = true;
            for (const auto& y : cov.universe) {
                if (distance(metric, x, y) < eps && !a.contains(y)) {
                    inside = false;
                    break;
                }
            }
            if (inside) {
                ok = true;
                break;
            }
        }
        if (!ok) return false;
    }
    return true;
}

// Largest epsilon on a halving grid below the exact feasibility threshold
//   min over x of max over elements A containing x of min dist(x, U \ A).
inline LebesgueResult lebesgue_number(const CoveringSpec& cov, const MetricSpec& metric,
                                      int max_halvings = 40) {
    std::size_t m = cov.universe.size();
    double threshold = std::numeric_limits<double>::infinity();
    double diameter = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            diameter = std::max(diameter, distance(metric, cov.universe[i], cov.universe[j]));
    if (diameter == 0.0) diameter = 1.0;

    for (std::size_t i = 0; i < m; ++i) {
        double best = 0.0;
        for (const auto& a : cov.elements) {
            if (!a.contains(cov.universe[i])) continue;
            double nearest_outside = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < m; ++j) {
                if (a.contains(cov.universe[j])) continue;
                nearest_outside =
                    std::min(nearest_outside, distance(metric, cov.universe[i], cov.universe[j]));
            }
            best = std::max(best, nearest_outside);
            if (best == std::numeric_limits<double>::infinity()) break;
        }
        threshold = std::min(threshold, best);
        if (threshold == 0.0) break;
    }

    LebesgueResult out;
    out.grid_start = diameter;
    out.threshold = threshold;
    for (int h = 0; h <= max_halvings; ++h) {
        double eps = diameter * std::pow(0.5, h);
        if (eps <= threshold) {
            out.epsilon = eps;
            return out;
        }
    }
    out.failed = true;
    return out;
}

}  // namespace entropy_lab
