#pragma once

#include <string>
#include <utility>
#include <vector>

#include "entropy_lab/errors.hpp"

namespace entropy_lab {

// A point of some state space. Numeric states carry coordinates, shift
// states carry a finite word over {'0'..'0'+k-1}, and the one-point
// compactification adds a distinguished point at infinity per space.
struct StatePoint {
    std::string space;            // ambient-space tag ("circle", "R^1", "shift2", ...)
    std::vector<double> coords;   // numeric states
    std::string word;             // symbolic states
    bool symbolic = false;
    bool at_infinity = false;

    bool same_space(const StatePoint& other) const { return space == other.space; }
};

inline StatePoint vector_point(std::string space, std::vector<double> coords) {
    StatePoint p;
    p.space = std::move(space);
    p.coords = std::move(coords);
    return p;
}

inline StatePoint scalar_point(std::string space, double x) {
    return vector_point(std::move(space), {x});
}

// Angle in [0,1); values outside are wrapped.
inline StatePoint circle_point(double x) {
    double y = x - static_cast<long long>(x);
    if (y < 0) y += 1.0;
    return vector_point("circle", {y});
}

inline StatePoint word_point(std::string space, std::string word, int alphabet_size = 2) {
    for (char ch : word) {
        if (ch < '0' || ch >= '0' + alphabet_size)
            throw DomainError("word symbol '" + std::string(1, ch) + "' outside alphabet of size " +
                              std::to_string(alphabet_size));
    }
    StatePoint p;
    p.space = std::move(space);
    p.word = std::move(word);
    p.symbolic = true;
    return p;
}

// The point at infinity of the one-point compactification of `space`.
// Fixed by the extension of every proper map.
inline StatePoint infinity_point(std::string space) {
    StatePoint p;
    p.space = std::move(space);
    p.at_infinity = true;
    return p;
}

}  // namespace entropy_lab
