#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "entropy_lab/errors.hpp"
#include "entropy_lab/estimate.hpp"
#include "entropy_lab/metrics.hpp"
#include "entropy_lab/points.hpp"
#include "entropy_lab/systems.hpp"

namespace entropy_lab {

// The 3-dimensional Heisenberg group in exponential coordinates: basis
// X, Y, Z of the algebra with [X,Y] = Z and all other brackets zero. The
// group is realized by unipotent upper-triangular 3x3 matrices; exp and log
// are exact finite series because the algebra is 2-step nilpotent.

struct HeisenbergAlgebraElement {
    double a = 0.0, b = 0.0, c = 0.0;  // coefficients of X, Y, Z
};

struct HeisenbergGroupElement {
    double a = 0.0, b = 0.0, c = 0.0;  // exponential coordinates
};

inline HeisenbergAlgebraElement heisenberg_bracket(const HeisenbergAlgebraElement& u,
                                                   const HeisenbergAlgebraElement& v) {
    return {0.0, 0.0, u.a * v.b - u.b * v.a};
}

using Matrix3 = std::array<std::array<double, 3>, 3>;

// exp of the strictly upper triangular representation: I + N + N^2/2 with
// N = [[0,a,c],[0,0,b],[0,0,0]], so the matrix entries are
// (1,2) = a, (2,3) = b, (1,3) = c + ab/2.
inline Matrix3 heisenberg_matrix(const HeisenbergGroupElement& g) {
    return {{{1.0, g.a, g.c + g.a * g.b / 2.0}, {0.0, 1.0, g.b}, {0.0, 0.0, 1.0}}};
}

inline HeisenbergGroupElement exp_algebra(const HeisenbergAlgebraElement& x) {
    // N = [[0,a,c],[0,0,b],[0,0,0]], N^2 = [[0,0,ab],[0,0,0],[0,0,0]]
    double m12 = x.a;
    double m23 = x.b;
    double m13 = x.c + x.a * x.b / 2.0;
    return {m12, m23, m13 - m12 * m23 / 2.0};  // read coordinates back
}

inline HeisenbergAlgebraElement log_group(const HeisenbergGroupElement& g) {
    Matrix3 m = heisenberg_matrix(g);
    // log(I + N') = N' - N'^2/2 for the unipotent matrix I + N'
    double a = m[0][1];
    double b = m[1][2];
    double c = m[0][2] - a * b / 2.0;
    return {a, b, c};
}

inline HeisenbergAlgebraElement log_matrix(const Matrix3& m) {
    double a = m[0][1];
    double b = m[1][2];
    double c = m[0][2] - a * b / 2.0;
    return {a, b, c};
}

// Group law through the matrix representation; in coordinates this is the
// exact Baker-Campbell-Hausdorff product
//   (a1+a2, b1+b2, c1+c2 + (a1 b2 - b1 a2)/2).
inline HeisenbergGroupElement multiply(const HeisenbergGroupElement& g,
                                       const HeisenbergGroupElement& h) {
    Matrix3 mg = heisenberg_matrix(g);
    Matrix3 mh = heisenberg_matrix(h);
    Matrix3 prod{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double acc = 0.0;
            for (int k = 0; k < 3; ++k) acc += mg[i][k] * mh[k][j];
            prod[i][j] = acc;
        }
    HeisenbergAlgebraElement x = log_matrix(prod);
    return {x.a, x.b, x.c};
}

inline HeisenbergGroupElement inverse(const HeisenbergGroupElement& g) {
    return {-g.a, -g.b, -g.c};
}

inline HeisenbergGroupElement identity_element() { return {}; }

// d_1(phi): a 3x3 matrix acting on the algebra, required to preserve the
// bracket; it determines the group automorphism phi = exp . L . log.
struct AlgebraAutomorphism {
    DenseMatrix matrix;
};

inline AlgebraAutomorphism algebra_automorphism(DenseMatrix l, double tol = 1e-12) {
    detail::check_heisenberg_algebra_matrix(l, tol);
    return {std::move(l)};
}

// Graded dilation diag(lambda, mu, lambda mu); bracket-preserving for all
// lambda, mu != 0.
inline AlgebraAutomorphism graded_dilation(double lambda, double mu) {
    return algebra_automorphism(DenseMatrix::diagonal({lambda, mu, lambda * mu}));
}

inline HeisenbergAlgebraElement apply_algebra(const AlgebraAutomorphism& phi,
                                              const HeisenbergAlgebraElement& x) {
    const DenseMatrix& l = phi.matrix;
    return {l(0, 0) * x.a + l(0, 1) * x.b + l(0, 2) * x.c,
            l(1, 0) * x.a + l(1, 1) * x.b + l(1, 2) * x.c,
            l(2, 0) * x.a + l(2, 1) * x.b + l(2, 2) * x.c};
}

// phi(exp X) = exp(d_1(phi) X): the group automorphism determined by L.
inline HeisenbergGroupElement automorphism_apply(const AlgebraAutomorphism& phi,
                                                 const HeisenbergGroupElement& g) {
    return exp_algebra(apply_algebra(phi, log_group(g)));
}

// ---------------------------------------------------------------------------
// Semiconjugacy instance checking: f . S = T . f residuals, a properness
// probe, and optional paired entropy estimates for manual comparison.

using PointMap = std::function<StatePoint(const StatePoint&)>;

struct PropernessProbeConfig {
    StatePoint ball_center;
    double ball_radius = 0.0;
    MetricSpec target_metric;
    // fraction of the sampling range treated as "the boundary": preimages
    // reaching it mean the probe cannot certify boundedness
    double boundary_fraction = 0.9;
};

struct SemiconjugacyReport {
    double residual_max = 0.0;   // max over samples of d(f(S(y)), T(f(y)))
    bool properness_pass = false;
    bool properness_conclusive = false;  // at least one preimage sample hit the ball
    double max_preimage_norm = 0.0;
    double sample_range = 0.0;
    std::size_t ball_hits = 0;
    std::optional<double> entropy_downstairs;  // estimate for T
    std::optional<double> entropy_upstairs;    // estimate for S
};

inline double coordinate_norm(const StatePoint& p) {
    double s = 0.0;
    for (double c : p.coords) s += c * c;
    return std::sqrt(s);
}

// Residual of f . S = T . f over the samples, plus a bounded-preimage probe:
// among samples y with f(y) inside the declared ball, do any sit near the
// sampling boundary? A heuristic flag, never a verdict.
inline SemiconjugacyReport semiconjugacy_check(const PointMap& f, const MapSpec& upstairs,
                                               const MapSpec& downstairs,
                                               const std::vector<StatePoint>& samples,
                                               const MetricSpec& target_metric,
                                               const PropernessProbeConfig& probe) {
    if (samples.empty()) throw DomainError("semiconjugacy check needs samples");
    SemiconjugacyReport out;
    double range = 0.0;
    for (const StatePoint& y : samples) range = std::max(range, coordinate_norm(y));
    out.sample_range = range;
    bool boundary_hit = false;
    for (const StatePoint& y : samples) {
        StatePoint lhs = f(apply(upstairs, y));
        StatePoint rhs = apply(downstairs, f(y));
        out.residual_max = std::max(out.residual_max, distance(target_metric, lhs, rhs));
        StatePoint image = f(y);
        if (distance(probe.target_metric, image, probe.ball_center) < probe.ball_radius) {
            ++out.ball_hits;
            double norm = coordinate_norm(y);
            out.max_preimage_norm = std::max(out.max_preimage_norm, norm);
            if (norm >= probe.boundary_fraction * range) boundary_hit = true;
        }
    }
    out.properness_conclusive = out.ball_hits > 0;
    out.properness_pass = out.properness_conclusive && !boundary_hit;
    return out;
}

}  // namespace entropy_lab
