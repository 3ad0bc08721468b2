#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "entropy_lab/errors.hpp"
#include "entropy_lab/points.hpp"
#include "entropy_lab/systems.hpp"

namespace entropy_lab {

enum class MetricKind {
    Euclidean,
    CircleArc,
    ShiftCylinder,
    Compactified,
};

// A distance function on a state space. The compactified kind realizes the
// one-point compactification of R^d: points are embedded in the unit sphere
// S^d by inverse stereographic projection (infinity -> north pole) and the
// distance is the chordal distance of the images, so it is bounded by 2 and
// extends continuously to the point at infinity.
struct MetricSpec {
    MetricKind kind = MetricKind::Euclidean;
    std::size_t base_dimension = 1;  // Compactified
    double cylinder_base = 2.0;      // ShiftCylinder: d = base^{-lcp}
};

inline MetricSpec euclidean_metric() { return {MetricKind::Euclidean, 0, 2.0}; }
inline MetricSpec circle_arc_metric() { return {MetricKind::CircleArc, 1, 2.0}; }
inline MetricSpec shift_cylinder_metric(double base = 2.0) {
    if (base <= 1.0) throw DomainError("cylinder metric base must exceed 1");
    return {MetricKind::ShiftCylinder, 0, base};
}
inline MetricSpec compactified_metric(std::size_t base_dimension) {
    if (base_dimension == 0) throw DomainError("compactified metric needs dimension >= 1");
    return {MetricKind::Compactified, base_dimension, 2.0};
}

namespace detail {

inline double squared_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

// Chordal distance of the inverse stereographic images of x and y,
//   2 |x - y| / sqrt((1 + |x|^2)(1 + |y|^2)),
// with the north pole standing for the point at infinity.
inline double chordal_distance(const StatePoint& x, const StatePoint& y) {
    if (x.at_infinity && y.at_infinity) return 0.0;
    if (x.at_infinity) return 2.0 / std::sqrt(1.0 + squared_norm(y.coords));
    if (y.at_infinity) return 2.0 / std::sqrt(1.0 + squared_norm(x.coords));
    double diff2 = 0.0;
    for (std::size_t i = 0; i < x.coords.size(); ++i) {
        double d = x.coords[i] - y.coords[i];
        diff2 += d * d;
    }
    return 2.0 * std::sqrt(diff2) /
           std::sqrt((1.0 + squared_norm(x.coords)) * (1.0 + squared_norm(y.coords)));
}

inline std::size_t common_prefix(const std::string& u, const std::string& v) {
    std::size_t n = std::min(u.size(), v.size());
    std::size_t k = 0;
    while (k < n && u[k] == v[k]) ++k;
    return k;
}

}  // namespace detail

inline double distance(const MetricSpec& metric, const StatePoint& x, const StatePoint& y) {
    if (!x.same_space(y)) throw DomainError("distance between points of different spaces");
    switch (metric.kind) {
        case MetricKind::Euclidean: {
            if (x.symbolic || y.symbolic || x.coords.size() != y.coords.size())
                throw DomainError("euclidean metric expects numeric points of equal dimension");
            double s = 0.0;
            for (std::size_t i = 0; i < x.coords.size(); ++i) {
                double d = x.coords[i] - y.coords[i];
                s += d * d;
            }
            return std::sqrt(s);
        }
        case MetricKind::CircleArc: {
            if (x.coords.size() != 1 || y.coords.size() != 1)
                throw DomainError("circle metric expects a single angle coordinate");
            double d = std::fabs(x.coords[0] - y.coords[0]);
            return std::min(d, 1.0 - d);
        }
        case MetricKind::ShiftCylinder: {
            if (!x.symbolic || !y.symbolic)
                throw DomainError("cylinder metric expects symbolic points");
            if (x.word == y.word) return 0.0;
            return std::pow(metric.cylinder_base,
                            -static_cast<double>(detail::common_prefix(x.word, y.word)));
        }
        case MetricKind::Compactified: {
            if ((!x.at_infinity && x.coords.size() != metric.base_dimension) ||
                (!y.at_infinity && y.coords.size() != metric.base_dimension))
                throw DomainError("point dimension does not match the compactified metric");
            return detail::chordal_distance(x, y);
        }
    }
    throw DomainError("unknown metric kind");
}

// Bowen n-step metric d_n(x,y) = max{ d(T^i x, T^i y) : 0 <= i <= n }.
inline double bowen_distance(const MapSpec& map, const MetricSpec& metric, std::size_t n,
                             const StatePoint& x, const StatePoint& y) {
    std::vector<StatePoint> ox = orbit(map, x, n);
    std::vector<StatePoint> oy = orbit(map, y, n);
    double best = 0.0;
    for (std::size_t i = 0; i <= n; ++i) best = std::max(best, distance(metric, ox[i], oy[i]));
    return best;
}

}  // namespace entropy_lab
