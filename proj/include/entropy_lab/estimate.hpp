#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "entropy_lab/errors.hpp"

namespace entropy_lab {

// Ordinary least-squares slope of y against x.
inline double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw DomainError("slope fit needs at least two samples");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= double(x.size());
    my /= double(x.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0.0) throw DomainError("slope fit needs distinct x values");
    return sxy / sxx;
}

inline double fit_residual_rms(const std::vector<double>& x, const std::vector<double>& y,
                               double slope) {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= double(x.size());
    my /= double(x.size());
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double e = y[i] - (my + slope * (x[i] - mx));
        ss += e * e;
    }
    return std::sqrt(ss / double(x.size()));
}

// One (n, eps) cell of a spanning-count table; eps is NaN for covering
// tables. `saturated` marks counts pinned at the region size, which can no
// longer express growth and are excluded from slope fits.
struct GrowthCell {
    int n = 0;
    double eps = std::numeric_limits<double>::quiet_NaN();
    double count = 0.0;
    double count_raw = 0.0;  // before the running max over n
    bool exact = true;
    bool saturated = false;
};

struct EpsilonSlope {
    double eps = 0.0;
    double slope = std::numeric_limits<double>::quiet_NaN();
    double residual = 0.0;
    int cells_used = 0;
    bool usable = false;
    std::string note;
};

struct EstimateDiagnostics {
    bool counts_monotone_in_n = true;    // before the running max
    bool counts_monotone_in_eps = true;  // nondecreasing as eps decreases
    bool slopes_monotone_in_eps = true;
    bool any_inexact = false;
    bool any_saturated = false;
    std::vector<std::string> notes;
};

// An (n, eps)-indexed table of counts with the extrapolated growth rate.
struct EntropyEstimate {
    std::vector<GrowthCell> cells;
    std::vector<EpsilonSlope> slopes;
    double value = std::numeric_limits<double>::quiet_NaN();
    EstimateDiagnostics diagnostics;
};

}  // namespace entropy_lab
