#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "entropy_lab/errors.hpp"
#include "entropy_lab/estimate.hpp"
#include "entropy_lab/metrics.hpp"
#include "entropy_lab/parallel.hpp"
#include "entropy_lab/points.hpp"
#include "entropy_lab/set_cover.hpp"
#include "entropy_lab/systems.hpp"

namespace entropy_lab {

// A finite witness set for some subset Y of the state space.
struct SampleRegion {
    std::string description;
    std::vector<StatePoint> points;
};

inline SampleRegion make_region(std::string description, std::vector<StatePoint> points) {
    if (points.empty()) throw DomainError("sample region needs at least one point");
    for (const auto& p : points)
        if (!p.same_space(points.front()))
            throw DomainError("sample region mixes points of different spaces");
    SampleRegion r;
    r.description = std::move(description);
    r.points = std::move(points);
    return r;
}

enum class SpanningMode { Greedy, ExactSmall };

struct SpanningOptions {
    SpanningMode mode = SpanningMode::Greedy;
    std::size_t exact_cap = 512;        // ExactSmall region-size limit
    std::size_t region_cap = 5000;      // pairwise table memory guard
    unsigned threads = 0;               // 0: ENTROPY_LAB_THREADS or 1
    SetCoverOptions exact_solver = {};
};

struct SpanningSchedule {
    std::vector<double> eps_list;  // strictly decreasing
    int n_min = 0;
    int n_max = 0;
};

inline void validate_schedule(const SpanningSchedule& s) {
    if (s.eps_list.empty()) throw DomainError("schedule needs at least one epsilon");
    for (double e : s.eps_list)
        if (!(e > 0.0)) throw DomainError("schedule epsilons must be positive");
    for (std::size_t i = 1; i < s.eps_list.size(); ++i)
        if (!(s.eps_list[i] < s.eps_list[i - 1]))
            throw DomainError("schedule epsilons must be strictly decreasing");
    if (s.n_min < 0 || s.n_max < s.n_min) throw DomainError("schedule needs 0 <= n_min <= n_max");
}

namespace detail {

// Orbits of every region point, flattened, with the pair distance at a given
// iterate exposed as a kernel. Bowen distances are then running maxima over
// iterates, which the table below maintains incrementally in n.
class OrbitCache {
public:
    OrbitCache(const MapSpec& map, const MetricSpec& metric, const SampleRegion& region,
               std::size_t n_max, unsigned threads)
        : metric_(metric), m_(region.points.size()), steps_(n_max + 1) {
        symbolic_ = region.points.front().symbolic;
        if (symbolic_) {
            if (metric.kind != MetricKind::ShiftCylinder)
                throw DomainError("symbolic regions need the cylinder metric");
            words_.reserve(m_);
            for (const auto& p : region.points) {
                if (!p.symbolic) throw DomainError("region mixes symbolic and numeric points");
                if (p.word.size() <= n_max)
                    throw DomainError("region words must be longer than n_max");
                words_.push_back(p.word);
            }
            return;
        }
        if (metric.kind == MetricKind::ShiftCylinder)
            throw DomainError("the cylinder metric needs a symbolic region");
        dim_ = 0;
        for (const auto& p : region.points) {
            if (p.symbolic) throw DomainError("region mixes symbolic and numeric points");
            if (p.at_infinity) {
                if (metric.kind != MetricKind::Compactified)
                    throw DomainError("the point at infinity needs the compactified metric");
                continue;
            }
            if (dim_ == 0) dim_ = p.coords.size();
            if (p.coords.size() != dim_)
                throw DomainError("region mixes points of different dimensions");
        }
        if (dim_ == 0) throw DomainError("region needs at least one finite point");
        if (metric.kind == MetricKind::CircleArc && dim_ != 1)
            throw DomainError("the circle metric needs one-dimensional points");
        if (metric.kind == MetricKind::Compactified && metric.base_dimension != dim_)
            throw DomainError("region dimension does not match the compactified metric");
        flat_.assign(m_ * steps_ * dim_, 0.0);
        infinite_.assign(m_, 0);
        std::vector<std::string> errors(m_);
        parallel_for(m_, threads, [&](std::size_t i) {
            const StatePoint& p = region.points[i];
            if (p.at_infinity) {
                infinite_[i] = 1;  // fixed by every extension
                return;
            }
            try {
                std::vector<StatePoint> orb = orbit(map, p, n_max);
                for (std::size_t j = 0; j < steps_; ++j)
                    for (std::size_t k = 0; k < dim_; ++k)
                        flat_[(i * steps_ + j) * dim_ + k] = orb[j].coords[k];
            } catch (const DivergenceError& e) {
                errors[i] = e.what();
            }
        });
        for (const auto& e : errors)
            if (!e.empty()) throw DivergenceError(e, 0);
    }

    std::size_t size() const { return m_; }

    // distance between the j-th iterates of points a and b
    double at_step(std::size_t a, std::size_t b, std::size_t j) const {
        if (symbolic_) {
            std::size_t lcp = 0;
            const std::string &u = words_[a], &v = words_[b];
            while (lcp < u.size() && lcp < v.size() && u[lcp] == v[lcp]) ++lcp;
            if (lcp == u.size() && lcp == v.size()) return 0.0;
            double drop = double(lcp) - double(j);
            return std::pow(metric_.cylinder_base, -(std::max(drop, 0.0)));
        }
        if (infinite_[a] || infinite_[b]) {
            if (infinite_[a] && infinite_[b]) return 0.0;
            std::size_t f = infinite_[a] ? b : a;
            const double* x = &flat_[(f * steps_ + j) * dim_];
            double n2 = 0.0;
            for (std::size_t k = 0; k < dim_; ++k) n2 += x[k] * x[k];
            return 2.0 / std::sqrt(1.0 + n2);
        }
        const double* x = &flat_[(a * steps_ + j) * dim_];
        const double* y = &flat_[(b * steps_ + j) * dim_];
        switch (metric_.kind) {
            case MetricKind::Euclidean: {
                double s = 0.0;
                for (std::size_t k = 0; k < dim_; ++k) {
                    double d = x[k] - y[k];
                    s += d * d;
                }
                return std::sqrt(s);
            }
            case MetricKind::CircleArc: {
                double d = std::fabs(x[0] - y[0]);
                return std::min(d, 1.0 - d);
            }
            case MetricKind::Compactified: {
                double s = 0.0, nx = 0.0, ny = 0.0;
                for (std::size_t k = 0; k < dim_; ++k) {
                    double d = x[k] - y[k];
                    s += d * d;
                    nx += x[k] * x[k];
                    ny += y[k] * y[k];
                }
                return 2.0 * std::sqrt(s) / std::sqrt((1.0 + nx) * (1.0 + ny));
            }
            default:
                throw DomainError("metric kind not supported on numeric regions");
        }
    }

private:
    MetricSpec metric_;
    std::size_t m_ = 0, steps_ = 0, dim_ = 0;
    bool symbolic_ = false;
    std::vector<double> flat_;
    std::vector<std::uint8_t> infinite_;
    std::vector<std::string> words_;
};

// Full m x m matrix of Bowen distances d_n, advanced one iterate at a time.
class BowenTable {
public:
    BowenTable(const OrbitCache& cache, unsigned threads)
        : cache_(&cache), m_(cache.size()), threads_(threads), d_(m_ * m_, 0.0f), n_(SIZE_MAX) {}

    void advance_to(std::size_t n) {
        while (n_ == SIZE_MAX || n_ < n) {
            std::size_t j = (n_ == SIZE_MAX) ? 0 : n_ + 1;
            parallel_for(m_, threads_, [&](std::size_t a) {
                float* row = &d_[a * m_];
                for (std::size_t b = 0; b < m_; ++b) {
                    if (b == a) continue;
                    float v = float(cache_->at_step(a, b, j));
                    if (j == 0 || v > row[b]) row[b] = v;
                }
            });
            n_ = j;
        }
    }

    std::size_t size() const { return m_; }
    float at(std::size_t a, std::size_t b) const { return d_[a * m_ + b]; }

private:
    const OrbitCache* cache_;
    std::size_t m_;
    unsigned threads_;
    std::vector<float> d_;
    std::size_t n_;
};

// Greedy cover of the region by eps-balls in d_n, centers restricted to the
// region; ties go to the lowest index. Lazy heap re-evaluation keeps picks
// identical to the eager rule.
inline std::int64_t greedy_ball_cover(const BowenTable& table, double eps) {
    std::size_t m = table.size();
    std::size_t words = (m + 63) / 64;
    std::vector<std::uint64_t> balls(m * words, 0);
    std::vector<std::int64_t> gain(m, 0);
    float feps = float(eps);
    for (std::size_t a = 0; a < m; ++a) {
        std::uint64_t* row = &balls[a * words];
        std::int64_t g = 0;
        for (std::size_t b = 0; b < m; ++b) {
            if (a == b || table.at(a, b) < feps) {
                row[b >> 6] |= std::uint64_t(1) << (b & 63);
                ++g;
            }
        }
        gain[a] = g;
    }
    std::int64_t max_gain = 0;
    for (std::size_t a = 0; a < m; ++a) max_gain = std::max(max_gain, gain[a]);
    if (max_gain <= 1) return std::int64_t(m);  // every ball is its own center

    std::vector<std::uint64_t> uncovered(words, ~0ull);
    if (m & 63) uncovered.back() = (1ull << (m & 63)) - 1ull;
    std::size_t n_uncovered = m;

    using Entry = std::pair<std::int64_t, std::int64_t>;  // (gain, -index)
    std::priority_queue<Entry> heap;
    for (std::size_t a = 0; a < m; ++a) heap.push({gain[a], -std::int64_t(a)});
    std::int64_t picks = 0;
    while (n_uncovered > 0 && !heap.empty()) {
        auto [g, negidx] = heap.top();
        heap.pop();
        std::size_t a = std::size_t(-negidx);
        const std::uint64_t* row = &balls[a * words];
        std::int64_t fresh = 0;
        for (std::size_t w = 0; w < words; ++w)
            fresh += __builtin_popcountll(row[w] & uncovered[w]);
        if (fresh < g) {
            if (fresh > 0) heap.push({fresh, negidx});
            continue;
        }
        if (fresh == 0) continue;
        ++picks;
        for (std::size_t w = 0; w < words; ++w) uncovered[w] &= ~row[w];
        n_uncovered -= std::size_t(fresh);
    }
    return picks;
}

inline SetCoverInstance ball_cover_instance(const BowenTable& table, double eps) {
    std::size_t m = table.size();
    SetCoverInstance inst;
    inst.n_points = m;
    inst.sets.resize(m);
    float feps = float(eps);
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < m; ++b)
            if (a == b || table.at(a, b) < feps) inst.sets[a].push_back(std::int32_t(b));
    }
    return inst;
}

}  // namespace detail

// G_n(eps, Y) over the witness region: the size of a subset G of the region
// whose eps-balls in the Bowen metric d_n cover the region. Greedy carries
// the (1 + ln m) guarantee; ExactSmall solves the induced set cover exactly.
inline std::int64_t spanning_cardinality(const MapSpec& map, const MetricSpec& metric,
                                         const SampleRegion& region, std::size_t n, double eps,
                                         const SpanningOptions& options = {}) {
    if (!(eps > 0.0)) throw DomainError("spanning needs eps > 0");
    if (region.points.empty()) throw DomainError("spanning needs a nonempty region");
    if (region.points.size() > options.region_cap)
        throw DomainError("region exceeds the pairwise-table cap; shrink the region");
    if (options.mode == SpanningMode::ExactSmall && region.points.size() > options.exact_cap)
        throw DomainError("exact spanning is limited to regions of at most " +
                          std::to_string(options.exact_cap) + " points");
    detail::OrbitCache cache(map, metric, region, n, options.threads);
    detail::BowenTable table(cache, options.threads);
    table.advance_to(n);
    if (options.mode == SpanningMode::Greedy) return detail::greedy_ball_cover(table, eps);
    SetCoverResult r = solve_set_cover(detail::ball_cover_instance(table, eps), options.exact_solver);
    if (!r.exact)
        throw DomainError("exact spanning exceeded the solver budget; use greedy mode");
    return r.upper_bound;
}

// Least-squares slope of log G_n(eps) against n over the given n values:
// the finite-scale surrogate of g(eps, Y).
inline double epsilon_slope(const MapSpec& map, const MetricSpec& metric,
                            const SampleRegion& region, double eps,
                            const std::vector<int>& n_values,
                            const SpanningOptions& options = {}) {
    if (n_values.size() < 3) throw DomainError("epsilon slope needs at least three n values");
    for (std::size_t i = 1; i < n_values.size(); ++i)
        if (n_values[i] <= n_values[i - 1]) throw DomainError("n values must increase");
    if (n_values.front() < 0) throw DomainError("n values must be nonnegative");
    if (region.points.size() > options.region_cap)
        throw DomainError("region exceeds the pairwise-table cap; shrink the region");

    detail::OrbitCache cache(map, metric, region, std::size_t(n_values.back()), options.threads);
    detail::BowenTable table(cache, options.threads);
    std::vector<double> xs, ys;
    std::int64_t running = 1;
    for (int n : n_values) {
        table.advance_to(std::size_t(n));
        std::int64_t c = detail::greedy_ball_cover(table, eps);
        running = std::max(running, c);
        xs.push_back(double(n));
        ys.push_back(std::log(double(running)));
    }
    return least_squares_slope(xs, ys);
}

// The full (n, eps) table with per-eps slopes and the extrapolated value:
// the maximum usable per-eps slope (slopes are monotone as eps decreases in
// theory; violations are flagged as discretization artifacts). Counts pinned
// at the region size are saturated -- the witness set cannot express further
// growth -- and are excluded from the fits.
inline EntropyEstimate metric_entropy_estimate(const MapSpec& map, const MetricSpec& metric,
                                               const SampleRegion& region,
                                               const SpanningSchedule& schedule,
                                               const SpanningOptions& options = {}) {
    validate_schedule(schedule);
    if (region.points.empty()) throw DomainError("spanning needs a nonempty region");
    if (region.points.size() > options.region_cap)
        throw DomainError("region exceeds the pairwise-table cap; shrink the region");
    std::size_t m = region.points.size();

    detail::OrbitCache cache(map, metric, region, std::size_t(schedule.n_max), options.threads);
    detail::BowenTable table(cache, options.threads);

    EntropyEstimate est;
    std::size_t n_eps = schedule.eps_list.size();
    std::vector<std::vector<double>> raw(n_eps), mono(n_eps);
    for (int n = 0; n <= schedule.n_max; ++n) {
        table.advance_to(std::size_t(n));
        if (n < schedule.n_min) continue;
        for (std::size_t e = 0; e < n_eps; ++e) {
            std::int64_t c = detail::greedy_ball_cover(table, schedule.eps_list[e]);
            raw[e].push_back(double(c));
            double m_prev = mono[e].empty() ? 1.0 : mono[e].back();
            mono[e].push_back(std::max(double(c), m_prev));
        }
    }

    std::size_t n_cells = raw.empty() ? 0 : raw[0].size();
    for (std::size_t e = 0; e < n_eps; ++e) {
        for (std::size_t t = 0; t < n_cells; ++t) {
            GrowthCell cell;
            cell.n = schedule.n_min + int(t);
            cell.eps = schedule.eps_list[e];
            cell.count_raw = raw[e][t];
            cell.count = mono[e][t];
            cell.saturated = mono[e][t] >= double(m);
            if (cell.saturated) est.diagnostics.any_saturated = true;
            if (t > 0 && raw[e][t] < raw[e][t - 1]) est.diagnostics.counts_monotone_in_n = false;
            if (e > 0 && raw[e][t] < raw[e - 1][t]) est.diagnostics.counts_monotone_in_eps = false;
            est.cells.push_back(cell);
        }
    }

    double best = std::numeric_limits<double>::quiet_NaN();
    double prev_slope = -std::numeric_limits<double>::infinity();
    for (std::size_t e = 0; e < n_eps; ++e) {
        EpsilonSlope s;
        s.eps = schedule.eps_list[e];
        std::vector<double> xs, ys;
        for (std::size_t t = 0; t < n_cells; ++t) {
            if (mono[e][t] >= double(m)) continue;  // saturated
            xs.push_back(double(schedule.n_min + int(t)));
            ys.push_back(std::log(mono[e][t]));
        }
        s.cells_used = int(xs.size());
        if (xs.size() >= 3) {
            s.slope = least_squares_slope(xs, ys);
            s.residual = fit_residual_rms(xs, ys, s.slope);
            s.usable = true;
            if (std::isnan(best) || s.slope > best) best = s.slope;
            if (s.slope < prev_slope - 1e-12) est.diagnostics.slopes_monotone_in_eps = false;
            prev_slope = s.slope;
        } else {
            s.note = "fewer than three unsaturated cells";
            est.diagnostics.notes.push_back("eps=" + std::to_string(s.eps) + ": " + s.note);
        }
        est.slopes.push_back(s);
    }
    est.value = best;
    if (std::isnan(best))
        est.diagnostics.notes.push_back("no epsilon row had three unsaturated cells");
    return est;
}

}  // namespace entropy_lab
