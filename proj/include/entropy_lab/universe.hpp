#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "entropy_lab/errors.hpp"
#include "entropy_lab/points.hpp"

namespace entropy_lab {

// Witness-universe builders. Covering and spanning computations are relative
// to a finite witness set; these are the stock choices.

inline std::vector<StatePoint> circle_grid(std::size_t m) {
    if (m == 0) throw DomainError("grid needs at least one point");
    std::vector<StatePoint> out;
    out.reserve(m);
    for (std::size_t i = 0; i < m; ++i)
        out.push_back(circle_point(double(i) / double(m)));
    return out;
}

inline std::vector<StatePoint> interval_grid(const std::string& space, double a, double b,
                                             std::size_t m) {
    if (m < 2) throw DomainError("interval grid needs at least two points");
    if (!(a < b)) throw DomainError("interval grid needs a < b");
    std::vector<StatePoint> out;
    out.reserve(m);
    for (std::size_t i = 0; i < m; ++i)
        out.push_back(scalar_point(space, a + (b - a) * double(i) / double(m - 1)));
    return out;
}

inline std::vector<StatePoint> symmetric_grid(const std::string& space, double radius,
                                              std::size_t m) {
    return interval_grid(space, -radius, radius, m);
}

// Uniform lattice in the cube [-radius, radius]^dim.
inline std::vector<StatePoint> box_grid(const std::string& space, double radius,
                                        std::size_t per_axis, std::size_t dim) {
    if (per_axis < 2 || dim == 0) throw DomainError("box grid needs per_axis >= 2, dim >= 1");
    std::vector<StatePoint> out;
    std::size_t total = 1;
    for (std::size_t k = 0; k < dim; ++k) total *= per_axis;
    out.reserve(total);
    std::vector<std::size_t> idx(dim, 0);
    for (std::size_t t = 0; t < total; ++t) {
        std::vector<double> coords(dim);
        for (std::size_t k = 0; k < dim; ++k)
            coords[k] = -radius + 2.0 * radius * double(idx[k]) / double(per_axis - 1);
        out.push_back(vector_point(space, std::move(coords)));
        for (std::size_t k = 0; k < dim; ++k) {
            if (++idx[k] < per_axis) break;
            idx[k] = 0;
        }
    }
    return out;
}

// Full enumeration of words of the given length.
inline std::vector<StatePoint> shift_universe(int alphabet_size, std::size_t length) {
    if (alphabet_size < 2 || alphabet_size > 10)
        throw DomainError("shift universe supports alphabet sizes 2..10");
    std::size_t total = 1;
    for (std::size_t i = 0; i < length; ++i) {
        total *= std::size_t(alphabet_size);
        if (total > (std::size_t(1) << 24)) throw DomainError("shift universe too large");
    }
    std::string space = "shift" + std::to_string(alphabet_size);
    std::vector<StatePoint> out;
    out.reserve(total);
    std::string word(length, '0');
    for (std::size_t t = 0; t < total; ++t) {
        out.push_back(word_point(space, word, alphabet_size));
        for (std::size_t k = length; k-- > 0;) {
            if (++word[k] < char('0' + alphabet_size)) break;
            word[k] = '0';
        }
    }
    return out;
}

// Witness set adapted to a circle-arc covering refined under the doubling
// map: all preimages of the arc endpoints up to the given depth cut the
// circle into cells on which every refined-element membership is constant;
// the midpoints of those cells separate the covering combinatorics exactly.
inline std::vector<StatePoint> doubling_arrangement_universe(std::vector<double> breakpoints,
                                                             std::size_t depth) {
    if (breakpoints.empty()) throw DomainError("arrangement universe needs breakpoints");
    std::vector<double> pts;
    for (double b : breakpoints) {
        double t = b - std::floor(b);
        pts.push_back(t);
    }
    std::size_t level_begin = 0;
    for (std::size_t j = 0; j < depth; ++j) {
        std::size_t level_end = pts.size();
        for (std::size_t i = level_begin; i < level_end; ++i) {
            double t = pts[i];
            pts.push_back(t / 2.0);
            pts.push_back(t / 2.0 + 0.5);
        }
        level_begin = level_end;
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](double a, double b) { return std::fabs(a - b) < 1e-13; }),
              pts.end());
    std::vector<StatePoint> out;
    out.reserve(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double next = (i + 1 < pts.size()) ? pts[i + 1] : pts[0] + 1.0;
        out.push_back(circle_point((pts[i] + next) / 2.0));
    }
    return out;
}

}  // namespace entropy_lab
