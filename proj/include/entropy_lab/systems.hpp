#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "entropy_lab/errors.hpp"
#include "entropy_lab/points.hpp"

namespace entropy_lab {

// Row-major dense matrix, small dimensions only.
struct DenseMatrix {
    std::size_t dim = 0;
    std::vector<double> a;  // dim*dim entries

    double operator()(std::size_t i, std::size_t j) const { return a[i * dim + j]; }
    double& operator()(std::size_t i, std::size_t j) { return a[i * dim + j]; }

    static DenseMatrix from_rows(const std::vector<std::vector<double>>& rows) {
        DenseMatrix m;
        m.dim = rows.size();
        m.a.reserve(m.dim * m.dim);
        for (const auto& r : rows) {
            if (r.size() != m.dim) throw DomainError("matrix is not square");
            for (double v : r) m.a.push_back(v);
        }
        return m;
    }

    static DenseMatrix diagonal(std::vector<double> d) {
        DenseMatrix m;
        m.dim = d.size();
        m.a.assign(m.dim * m.dim, 0.0);
        for (std::size_t i = 0; i < m.dim; ++i) m(i, i) = d[i];
        return m;
    }
};

// |det| via Gaussian elimination with partial pivoting.
inline double abs_determinant(const DenseMatrix& m) {
    std::size_t d = m.dim;
    std::vector<double> w = m.a;
    double det = 1.0;
    for (std::size_t c = 0; c < d; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < d; ++r)
            if (std::fabs(w[r * d + c]) > std::fabs(w[p * d + c])) p = r;
        if (w[p * d + c] == 0.0) return 0.0;
        if (p != c)
            for (std::size_t j = 0; j < d; ++j) std::swap(w[p * d + j], w[c * d + j]);
        det *= w[c * d + c];
        for (std::size_t r = c + 1; r < d; ++r) {
            double f = w[r * d + c] / w[c * d + c];
            for (std::size_t j = c; j < d; ++j) w[r * d + j] -= f * w[c * d + j];
        }
    }
    return std::fabs(det);
}

enum class MapKind {
    Linear,
    CircleDoubling,
    FullShift,
    HeisenbergAutomorphism,
    Composition,
};

// A dynamical system as an evaluable forward map with a declared domain.
struct MapSpec {
    MapKind kind = MapKind::CircleDoubling;
    std::string domain = "circle";
    DenseMatrix matrix;          // Linear / HeisenbergAutomorphism
    int alphabet_size = 2;       // FullShift
    std::vector<MapSpec> parts;  // Composition, applied first-to-last
};

namespace detail {

inline void check_heisenberg_algebra_matrix(const DenseMatrix& l, double tol = 1e-12) {
    if (l.dim != 3) throw DomainError("heisenberg algebra matrix must be 3x3");
    // Basis X,Y,Z with [X,Y]=Z and all other brackets zero. Columns of L are
    // the images LX, LY, LZ; bracket((a1,b1,*),(a2,b2,*)) = (0,0,a1 b2 - b1 a2).
    auto col = [&](int j) { return std::array<double, 3>{l(0, j), l(1, j), l(2, j)}; };
    auto br = [](const std::array<double, 3>& u, const std::array<double, 3>& v) {
        return std::array<double, 3>{0.0, 0.0, u[0] * v[1] - u[1] * v[0]};
    };
    auto lx = col(0), ly = col(1), lz = col(2);
    auto xy = br(lx, ly);
    double r = 0.0;
    r = std::max(r, std::fabs(xy[0] - lz[0]));
    r = std::max(r, std::fabs(xy[1] - lz[1]));
    r = std::max(r, std::fabs(xy[2] - lz[2]));
    auto xz = br(lx, lz);
    auto yz = br(ly, lz);
    for (double v : xz) r = std::max(r, std::fabs(v));
    for (double v : yz) r = std::max(r, std::fabs(v));
    if (r > tol)
        throw DomainError("matrix does not preserve the Heisenberg bracket (residual " +
                          std::to_string(r) + ")");
    if (abs_determinant(l) < 1e-12) throw DomainError("algebra automorphism must be invertible");
}

}  // namespace detail

inline MapSpec linear_map(DenseMatrix m, std::string domain = "") {
    if (m.dim == 0) throw DomainError("linear map needs a nonempty matrix");
    double scale = 0.0;
    for (double v : m.a) scale = std::max(scale, std::fabs(v));
    if (scale == 0.0 || abs_determinant(m) < 1e-12 * std::pow(scale, double(m.dim)))
        throw DomainError("linear map matrix is singular within tolerance");
    MapSpec s;
    s.kind = MapKind::Linear;
    s.domain = domain.empty() ? "R^" + std::to_string(m.dim) : std::move(domain);
    s.matrix = std::move(m);
    return s;
}

inline MapSpec circle_doubling_map() {
    MapSpec s;
    s.kind = MapKind::CircleDoubling;
    s.domain = "circle";
    return s;
}

inline MapSpec full_shift_map(int alphabet_size) {
    if (alphabet_size < 2) throw DomainError("full shift needs alphabet size >= 2");
    MapSpec s;
    s.kind = MapKind::FullShift;
    s.domain = "shift" + std::to_string(alphabet_size);
    s.alphabet_size = alphabet_size;
    return s;
}

inline MapSpec heisenberg_automorphism_map(DenseMatrix algebra_matrix) {
    detail::check_heisenberg_algebra_matrix(algebra_matrix);
    MapSpec s;
    s.kind = MapKind::HeisenbergAutomorphism;
    s.domain = "heisenberg";
    s.matrix = std::move(algebra_matrix);
    return s;
}

inline MapSpec composed_map(std::vector<MapSpec> parts) {
    if (parts.empty()) throw DomainError("composition needs at least one map");
    MapSpec s;
    s.kind = MapKind::Composition;
    s.domain = parts.front().domain;
    s.parts = std::move(parts);
    return s;
}

// One forward step T(x). Exact for shift and dyadic circle states; the point
// at infinity is fixed by the extension of every proper map.
inline StatePoint apply(const MapSpec& map, const StatePoint& x) {
    if (x.at_infinity) return x;
    switch (map.kind) {
        case MapKind::Linear:
        case MapKind::HeisenbergAutomorphism: {
            const DenseMatrix& m = map.matrix;
            if (x.symbolic || x.coords.size() != m.dim)
                throw DomainError("point dimension does not match the map");
            StatePoint y = x;
            for (std::size_t i = 0; i < m.dim; ++i) {
                double acc = 0.0;
                for (std::size_t j = 0; j < m.dim; ++j) acc += m(i, j) * x.coords[j];
                y.coords[i] = acc;
            }
            return y;
        }
        case MapKind::CircleDoubling: {
            if (x.symbolic || x.coords.size() != 1)
                throw DomainError("circle doubling expects a single angle coordinate");
            double v = 2.0 * x.coords[0];
            if (v >= 1.0) v -= 1.0;  // exact for angles in [0,1)
            StatePoint y = x;
            y.coords[0] = v;
            return y;
        }
        case MapKind::FullShift: {
            if (!x.symbolic) throw DomainError("full shift expects a symbolic state");
            if (x.word.empty()) throw DomainError("cannot shift an empty word");
            StatePoint y = x;
            y.word = x.word.substr(1);
            return y;
        }
        case MapKind::Composition: {
            StatePoint y = x;
            for (const MapSpec& part : map.parts) y = apply(part, y);
            return y;
        }
    }
    throw DomainError("unknown map kind");
}

inline constexpr double kDivergenceBound = 1e300;

// Iterates [x, Tx, ..., T^n x]. Throws DivergenceError at the first iterate
// with a coordinate beyond the representable range.
inline std::vector<StatePoint> orbit(const MapSpec& map, const StatePoint& x, std::size_t n) {
    std::vector<StatePoint> out;
    out.reserve(n + 1);
    out.push_back(x);
    for (std::size_t i = 1; i <= n; ++i) {
        out.push_back(apply(map, out.back()));
        for (double c : out.back().coords) {
            if (!std::isfinite(c) || std::fabs(c) > kDivergenceBound)
                throw DivergenceError("orbit diverged at iterate " + std::to_string(i), i);
        }
    }
    return out;
}

}  // namespace entropy_lab
