#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "entropy_lab/errors.hpp"
#include "entropy_lab/systems.hpp"

namespace entropy_lab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline Matrix to_eigen(const DenseMatrix& m) {
    Matrix out(m.dim, m.dim);
    for (std::size_t i = 0; i < m.dim; ++i)
        for (std::size_t j = 0; j < m.dim; ++j) out(Eigen::Index(i), Eigen::Index(j)) = m(i, j);
    return out;
}

inline DenseMatrix from_eigen(const Matrix& m) {
    DenseMatrix out;
    out.dim = std::size_t(m.rows());
    out.a.resize(out.dim * out.dim);
    for (std::size_t i = 0; i < out.dim; ++i)
        for (std::size_t j = 0; j < out.dim; ++j) out(i, j) = m(Eigen::Index(i), Eigen::Index(j));
    return out;
}

struct JordanOptions {
    double cluster_tol = 1e-8;        // eigenvalues closer than this (relative) coincide
    double conditioning_gap = 1e-6;   // warn below this inter-cluster gap
    int elliptic_power_horizon = 200;
};

struct JordanInvariantReport {
    double recomposition_residual = 0.0;  // ||H E U - T||_F / ||T||_F
    double commutator_residual = 0.0;     // max Frobenius norm of the three commutators
    double hyperbolic_residual = 0.0;     // squarefree polynomial residual (diagonalizability)
    double min_hyperbolic_eigenvalue = 0.0;
    double unipotent_residual = 0.0;      // ||(U - I)^d||_F
    double elliptic_power_max = 0.0;      // max ||E^k||_F over 1 <= k <= horizon
    double elliptic_power_cap = 0.0;

    bool hyperbolic_ok(double tol = 1e-9) const {
        return hyperbolic_residual <= tol && min_hyperbolic_eigenvalue > 0.0;
    }
    bool pass(double tol = 1e-9) const {
        return recomposition_residual <= tol && commutator_residual <= tol &&
               hyperbolic_ok(tol) && unipotent_residual <= tol &&
               elliptic_power_max <= elliptic_power_cap;
    }
};

// T = H E U with commuting factors: H positive diagonalizable, E an isometry
// in an adapted norm, U unipotent.
struct JordanTriple {
    Matrix hyperbolic;
    Matrix elliptic;
    Matrix unipotent;
    std::vector<std::complex<double>> eigenvalues;  // of T, with multiplicity
    bool conditioning_warning = false;
    double min_cluster_gap = 0.0;
    JordanInvariantReport report;
};

namespace detail {

using CLD = std::complex<long double>;
using MatCLD = Eigen::Matrix<CLD, Eigen::Dynamic, Eigen::Dynamic>;

inline std::vector<CLD> eigenvalues_ld(const Matrix& t) {
    Eigen::Index d = t.rows();
    MatCLD a(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) a(i, j) = CLD((long double)t(i, j), 0.0L);
    Eigen::ComplexSchur<MatCLD> schur(a, /*computeU=*/false);
    if (schur.info() != Eigen::Success) throw DomainError("eigenvalue iteration failed");
    std::vector<CLD> out;
    out.reserve(std::size_t(d));
    for (Eigen::Index i = 0; i < d; ++i) out.push_back(schur.matrixT()(i, i));
    return out;
}

// Enforce an exactly conjugate-symmetric spectrum: real matrices have one,
// floating point sometimes does not.
inline void symmetrize_spectrum(std::vector<CLD>& eig, long double tol) {
    std::vector<bool> used(eig.size(), false);
    for (std::size_t i = 0; i < eig.size(); ++i) {
        if (used[i]) continue;
        if (std::fabs((double)eig[i].imag()) <= (double)tol) {
            eig[i] = CLD(eig[i].real(), 0.0L);
            used[i] = true;
            continue;
        }
        std::size_t best = eig.size();
        long double best_d = 0.0L;
        for (std::size_t j = i + 1; j < eig.size(); ++j) {
            if (used[j]) continue;
            long double dd = std::abs(eig[j] - std::conj(eig[i]));
            if (best == eig.size() || dd < best_d) {
                best = j;
                best_d = dd;
            }
        }
        if (best < eig.size()) {
            CLD z = (eig[i] + std::conj(eig[best])) / CLD(2.0L, 0.0L);
            eig[i] = z;
            eig[best] = std::conj(z);
            used[i] = used[best] = true;
        } else {
            used[i] = true;
        }
    }
}

struct Cluster {
    CLD value;
    int multiplicity = 0;
};

inline std::vector<Cluster> cluster_spectrum(std::vector<CLD> eig, long double tol_abs) {
    std::vector<Cluster> out;
    std::vector<bool> used(eig.size(), false);
    for (std::size_t i = 0; i < eig.size(); ++i) {
        if (used[i]) continue;
        CLD sum = eig[i];
        int count = 1;
        used[i] = true;
        bool grew = true;
        while (grew) {
            grew = false;
            CLD mean = sum / CLD((long double)count, 0.0L);
            for (std::size_t j = 0; j < eig.size(); ++j) {
                if (used[j]) continue;
                if (std::abs(eig[j] - mean) <= tol_abs) {
                    sum += eig[j];
                    ++count;
                    used[j] = true;
                    grew = true;
                }
            }
        }
        Cluster c;
        c.value = sum / CLD((long double)count, 0.0L);
        if (std::fabs((double)c.value.imag()) <= (double)tol_abs) c.value = CLD(c.value.real(), 0.0L);
        c.multiplicity = count;
        out.push_back(c);
    }
    return out;
}

// Taylor coefficients of 1/q at lambda_j up to order m-1, where
// q(z) = prod_{k != j} (z - lambda_k)^{m_k}; combined with q(A) this yields
// the spectral projection onto the generalized eigenspace of lambda_j.
inline std::vector<CLD> inverse_q_series(const std::vector<Cluster>& clusters, std::size_t j,
                                         std::size_t order) {
    std::vector<CLD> series(order, CLD(0.0L, 0.0L));
    series[0] = CLD(1.0L, 0.0L);
    for (std::size_t k = 0; k < clusters.size(); ++k) {
        if (k == j) continue;
        CLD delta = clusters[j].value - clusters[k].value;
        int m = clusters[k].multiplicity;
        // factor (delta + t)^{-m} = delta^{-m} sum_i binom(-m, i) (t/delta)^i
        std::vector<CLD> factor(order, CLD(0.0L, 0.0L));
        CLD scale = CLD(1.0L, 0.0L);
        for (int p = 0; p < m; ++p) scale /= delta;
        CLD coeff = CLD(1.0L, 0.0L);
        for (std::size_t i = 0; i < order; ++i) {
            factor[i] = scale * coeff;
            coeff *= CLD(-(long double)(m + (int)i), 0.0L) / CLD((long double)(i + 1), 0.0L);
            scale /= delta;
        }
        std::vector<CLD> next(order, CLD(0.0L, 0.0L));
        for (std::size_t a = 0; a < order; ++a)
            for (std::size_t b = 0; a + b < order; ++b) next[a + b] += series[a] * factor[b];
        series = std::move(next);
    }
    return series;
}

}  // namespace detail

// Multiplicative Jordan decomposition via the complex eigenstructure and the
// Jordan-Chevalley splitting: on the generalized eigenspace of lambda the
// hyperbolic part acts as |lambda|, the elliptic part as lambda/|lambda|,
// and U = S^{-1} T collects the unipotent remainder.
inline JordanTriple jordan_multiplicative(const Matrix& t, const JordanOptions& options = {}) {
    Eigen::Index d = t.rows();
    if (d == 0 || t.cols() != d) throw DomainError("decomposition needs a square matrix");
    double scale_in = t.cwiseAbs().maxCoeff();
    if (scale_in == 0.0 || std::fabs(Eigen::FullPivLU<Matrix>(t).determinant()) <
                               1e-12 * std::pow(scale_in, double(d)))
        throw DomainError("decomposition needs an invertible matrix");

    using detail::CLD;
    using detail::MatCLD;

    std::vector<CLD> eig = detail::eigenvalues_ld(t);
    long double spectrum_scale = 1.0L;
    for (const CLD& z : eig) spectrum_scale = std::max(spectrum_scale, std::abs(z));
    detail::symmetrize_spectrum(eig, 1e-13L * spectrum_scale);
    std::vector<detail::Cluster> clusters =
        detail::cluster_spectrum(eig, (long double)options.cluster_tol * spectrum_scale);

    double min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < clusters.size(); ++a)
        for (std::size_t b = a + 1; b < clusters.size(); ++b)
            min_gap = std::min(min_gap, double(std::abs(clusters[a].value - clusters[b].value)));

    MatCLD a(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) a(i, j) = CLD((long double)t(i, j), 0.0L);
    MatCLD identity = MatCLD::Identity(d, d);

    MatCLD hyper = MatCLD::Zero(d, d);
    MatCLD semisimple = MatCLD::Zero(d, d);
    MatCLD elliptic = MatCLD::Zero(d, d);
    for (std::size_t j = 0; j < clusters.size(); ++j) {
        // q_j(A)
        MatCLD q = identity;
        for (std::size_t k = 0; k < clusters.size(); ++k) {
            if (k == j) continue;
            for (int p = 0; p < clusters[k].multiplicity; ++p)
                q = q * (a - clusters[k].value * identity);
        }
        // r_j(A), the truncated series of 1/q_j
        std::size_t order = std::size_t(clusters[j].multiplicity);
        std::vector<CLD> series = detail::inverse_q_series(clusters, j, order);
        MatCLD shifted = a - clusters[j].value * identity;
        MatCLD r = MatCLD::Zero(d, d);
        MatCLD power = identity;
        for (std::size_t i = 0; i < order; ++i) {
            r += series[i] * power;
            power = power * shifted;
        }
        MatCLD projection = q * r;
        CLD lambda = clusters[j].value;
        long double mod = std::abs(lambda);
        hyper += CLD(mod, 0.0L) * projection;
        semisimple += lambda * projection;
        elliptic += (lambda / CLD(mod, 0.0L)) * projection;
    }
    MatCLD unipotent = semisimple.partialPivLu().solve(a);

    JordanTriple out;
    auto to_real = [&](const MatCLD& m) {
        Matrix r(d, d);
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index j = 0; j < d; ++j) r(i, j) = double(m(i, j).real());
        return r;
    };
    out.hyperbolic = to_real(hyper);
    out.elliptic = to_real(elliptic);
    out.unipotent = to_real(unipotent);
    out.eigenvalues.reserve(eig.size());
    for (const CLD& z : eig)
        out.eigenvalues.push_back({double(z.real()), double(z.imag())});
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end(),
              [](const std::complex<double>& x, const std::complex<double>& y) {
                  return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
              });
    out.min_cluster_gap = min_gap;
    out.conditioning_warning =
        std::isfinite(min_gap) && min_gap < options.conditioning_gap * double(spectrum_scale);

    // invariant report
    JordanInvariantReport rep;
    Matrix recomposed = out.hyperbolic * out.elliptic * out.unipotent;
    rep.recomposition_residual = (recomposed - t).norm() / std::max(1e-300, t.norm());
    rep.commutator_residual = std::max(
        {(out.hyperbolic * out.elliptic - out.elliptic * out.hyperbolic).norm(),
         (out.hyperbolic * out.unipotent - out.unipotent * out.hyperbolic).norm(),
         (out.elliptic * out.unipotent - out.unipotent * out.elliptic).norm()});

    // H diagonalizable with positive eigenvalues: its squarefree polynomial
    // over the distinct moduli must annihilate it
    std::vector<double> moduli;
    for (const auto& c : clusters) {
        double m = double(std::abs(c.value));
        bool found = false;
        for (double x : moduli)
            if (std::fabs(x - m) <= options.cluster_tol * double(spectrum_scale)) found = true;
        if (!found) moduli.push_back(m);
    }
    Matrix poly = Matrix::Identity(d, d);
    double poly_scale = 1.0;
    for (double m : moduli) {
        poly = poly * (out.hyperbolic - m * Matrix::Identity(d, d));
        poly_scale *= std::max(1.0, out.hyperbolic.norm() + m);
    }
    rep.hyperbolic_residual = poly.norm() / poly_scale;
    rep.min_hyperbolic_eigenvalue =
        moduli.empty() ? 0.0 : *std::min_element(moduli.begin(), moduli.end());

    Matrix nil = out.unipotent - Matrix::Identity(d, d);
    Matrix nil_power = Matrix::Identity(d, d);
    for (Eigen::Index i = 0; i < d; ++i) nil_power = nil_power * nil;
    rep.unipotent_residual = nil_power.norm();

    Matrix epow = Matrix::Identity(d, d);
    double emax = 0.0;
    for (int k = 1; k <= options.elliptic_power_horizon; ++k) {
        epow = epow * out.elliptic;
        emax = std::max(emax, epow.norm());
    }
    rep.elliptic_power_max = emax;
    rep.elliptic_power_cap = 1e3 * std::sqrt(double(d));
    out.report = rep;
    return out;
}

// Orthonormal basis of ker(M - I); rank decided at the singular-value
// threshold.
struct Subspace {
    Matrix basis;  // d x k, orthonormal columns
    std::size_t dimension() const { return std::size_t(basis.cols()); }

    bool contains(const Vector& v, double tol = 1e-8) const {
        if (basis.cols() == 0) return v.norm() <= tol;
        Vector residual = v - basis * (basis.transpose() * v);
        return residual.norm() <= tol * std::max(1.0, v.norm());
    }
};

inline Subspace kernel_of(const Matrix& m, double sv_tol = 1e-9) {
    if (m.rows() == 0) {  // no constraints: the kernel is everything
        Subspace out;
        out.basis = Matrix::Identity(m.cols(), m.cols());
        return out;
    }
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    Eigen::Index cols = m.cols();
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > sv_tol) ++rank;
    Subspace out;
    out.basis = svd.matrixV().rightCols(cols - rank);
    return out;
}

inline Subspace fixed_subspace(const Matrix& m, double sv_tol = 1e-9) {
    return kernel_of(m - Matrix::Identity(m.rows(), m.cols()), sv_tol);
}

// R(T) = fix(T_H) intersect fix(T_U), computed as the kernel of the stacked
// difference; T acts on it as the elliptic part's isometric action.
inline Subspace recurrent_set(const Matrix& t, const JordanOptions& options = {},
                              double sv_tol = 1e-9) {
    JordanTriple triple = jordan_multiplicative(t, options);
    Eigen::Index d = t.rows();
    Matrix stacked(2 * d, d);
    stacked.topRows(d) = triple.hyperbolic - Matrix::Identity(d, d);
    stacked.bottomRows(d) = triple.unipotent - Matrix::Identity(d, d);
    return kernel_of(stacked, sv_tol);
}

struct RecurrenceReport {
    bool recurrent = false;
    bool escaped = false;
    int first_return = -1;  // smallest k with ||T^k x - x|| < eps
};

// Brute-force recurrence witness: does some iterate T^k x, 1 <= k <= n_max,
// return eps-close to x?
inline RecurrenceReport recurrence_oracle(const Matrix& t, const Vector& x, double eps,
                                          int n_max) {
    if (!(eps > 0.0)) throw DomainError("recurrence oracle needs eps > 0");
    RecurrenceReport out;
    Vector y = x;
    for (int k = 1; k <= n_max; ++k) {
        y = t * y;
        if (!y.allFinite() || y.cwiseAbs().maxCoeff() > 1e100) {
            out.escaped = true;
            return out;
        }
        if ((y - x).norm() < eps) {
            out.recurrent = true;
            out.first_return = k;
            return out;
        }
    }
    return out;
}

// Classical d-entropy of a linear isomorphism under the euclidean metric:
// the sum of log-moduli of eigenvalues outside the closed unit disk, with
// multiplicity. Moduli within modulus_tol of 1 count as 1.
inline double classical_entropy(const Matrix& t, double modulus_tol = 1e-8) {
    double scale = t.cwiseAbs().maxCoeff();
    if (scale == 0.0 || std::fabs(Eigen::FullPivLU<Matrix>(t).determinant()) <
                            1e-12 * std::pow(scale, double(t.rows())))
        throw DomainError("classical entropy needs an invertible matrix");
    std::vector<detail::CLD> eig = detail::eigenvalues_ld(t);
    long double sum = 0.0L;
    for (const auto& z : eig) {
        long double mod = std::abs(z);
        if (mod > 1.0L + (long double)modulus_tol) sum += std::log(mod);
    }
    return double(sum);
}

// The norm in which the elliptic part is an isometry: ||x|| = ||V^{-1} x||_2
// for V the eigenbasis of E. Property-test support.
class AdaptedNorm {
public:
    explicit AdaptedNorm(const Matrix& elliptic) {
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(elliptic.cast<std::complex<double>>());
        if (es.info() != Eigen::Success) throw DomainError("eigenvalue iteration failed");
        Eigen::MatrixXcd v = es.eigenvectors();
        if (std::fabs(v.determinant()) < 1e-12)
            throw DomainError("elliptic part is not diagonalizable");
        inverse_basis_ = v.inverse();
    }

    double operator()(const Vector& x) const {
        return (inverse_basis_ * x.cast<std::complex<double>>()).norm();
    }

private:
    Eigen::MatrixXcd inverse_basis_;
};

}  // namespace entropy_lab
