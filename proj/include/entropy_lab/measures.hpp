#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "entropy_lab/errors.hpp"
#include "entropy_lab/systems.hpp"

namespace entropy_lab {

// phi(x) = -x log x on (0,1], 0 at x = 0; natural logarithm throughout.
inline double phi(double x) {
    if (x < -1e-12 || x > 1.0 + 1e-12) throw DomainError("phi expects x in [0,1]");
    x = std::clamp(x, 0.0, 1.0);
    if (x == 0.0) return 0.0;
    return -x * std::log(x);
}

inline constexpr double kPhiMax = 0.36787944117144233;  // phi(1/e) = 1/e

struct BernoulliMeasure {
    std::vector<double> p;
};

struct MarkovMeasure {
    std::vector<std::vector<double>> transition;
    std::vector<double> stationary;
};

struct LebesgueCircleMeasure {};

struct InvariantMeasure;

// mu~ = c * delta_infinity + (1-c) * mu on the one-point compactification;
// invariant because X and {infinity} are invariant under the extension.
struct LiftedMeasure {
    std::shared_ptr<InvariantMeasure> base;
    double c = 0.0;
};

struct InvariantMeasure {
    std::variant<BernoulliMeasure, MarkovMeasure, LebesgueCircleMeasure, LiftedMeasure> kind;
};

inline InvariantMeasure bernoulli_measure(std::vector<double> p) {
    if (p.size() < 2) throw DomainError("bernoulli measure needs at least two symbols");
    double sum = 0.0;
    for (double v : p) {
        if (v < 0.0) throw DomainError("bernoulli weights must be nonnegative");
        sum += v;
    }
    if (std::fabs(sum - 1.0) > 1e-12) throw DomainError("bernoulli weights must sum to 1");
    return {BernoulliMeasure{std::move(p)}};
}

inline InvariantMeasure markov_measure(std::vector<std::vector<double>> transition,
                                       std::vector<double> stationary) {
    std::size_t k = transition.size();
    if (k < 2 || stationary.size() != k) throw DomainError("markov measure needs a square chain");
    for (const auto& row : transition) {
        if (row.size() != k) throw DomainError("markov transition matrix must be square");
        double sum = 0.0;
        for (double v : row) {
            if (v < 0.0) throw DomainError("markov transitions must be nonnegative");
            sum += v;
        }
        if (std::fabs(sum - 1.0) > 1e-12) throw DomainError("markov rows must sum to 1");
    }
    for (std::size_t j = 0; j < k; ++j) {
        double v = 0.0;
        for (std::size_t i = 0; i < k; ++i) v += stationary[i] * transition[i][j];
        if (std::fabs(v - stationary[j]) > 1e-10)
            throw DomainError("stationary vector does not satisfy pi P = pi");
    }
    return {MarkovMeasure{std::move(transition), std::move(stationary)}};
}

inline InvariantMeasure lebesgue_circle_measure() { return {LebesgueCircleMeasure{}}; }

inline InvariantMeasure lift_measure(const InvariantMeasure& mu, double c) {
    if (c < 0.0 || c > 1.0) throw DomainError("atom mass c must lie in [0,1]");
    if (std::holds_alternative<LiftedMeasure>(mu.kind))
        throw DomainError("nested lifts are not supported");
    LiftedMeasure lifted;
    lifted.base = std::make_shared<InvariantMeasure>(mu);
    lifted.c = c;
    return {std::move(lifted)};
}

// Depth-one cylinder partition: cells are groups of symbols.
struct SymbolPartition {
    int alphabet_size = 2;
    std::vector<std::vector<int>> cells;
};

// Arc partition of the circle: cell i is [breakpoints[i], breakpoints[i+1])
// with wraparound.
struct ArcPartition {
    std::vector<double> breakpoints;
};

struct FinitePartition {
    std::variant<SymbolPartition, ArcPartition> kind;
    // Cell declared merged with {infinity} on the compactified space
    // (B~ = B union {infinity}); -1 when the partition lives on X itself.
    int infinity_cell = -1;

    std::size_t cell_count() const {
        if (const auto* s = std::get_if<SymbolPartition>(&kind)) return s->cells.size();
        return std::get<ArcPartition>(kind).breakpoints.size();
    }
};

inline FinitePartition symbol_partition(int alphabet_size, std::vector<std::vector<int>> cells) {
    if (alphabet_size < 2) throw DomainError("alphabet size must be at least 2");
    std::vector<int> seen(std::size_t(alphabet_size), 0);
    for (const auto& cell : cells)
        for (int s : cell) {
            if (s < 0 || s >= alphabet_size) throw DomainError("cell symbol outside alphabet");
            if (seen[std::size_t(s)]++) throw DomainError("partition cells must be disjoint");
        }
    for (int c : seen)
        if (!c) throw DomainError("partition cells must cover the alphabet");
    return {SymbolPartition{alphabet_size, std::move(cells)}, -1};
}

inline FinitePartition generator_partition(int alphabet_size) {
    std::vector<std::vector<int>> cells;
    for (int s = 0; s < alphabet_size; ++s) cells.push_back({s});
    return {SymbolPartition{alphabet_size, std::move(cells)}, -1};
}

inline FinitePartition arc_partition(std::vector<double> breakpoints) {
    if (breakpoints.size() < 2) throw DomainError("arc partition needs at least two breakpoints");
    for (double& b : breakpoints) b -= std::floor(b);
    std::sort(breakpoints.begin(), breakpoints.end());
    for (std::size_t i = 1; i < breakpoints.size(); ++i)
        if (breakpoints[i] - breakpoints[i - 1] < 1e-13)
            throw DomainError("arc partition breakpoints must be distinct");
    return {ArcPartition{std::move(breakpoints)}, -1};
}

inline FinitePartition with_infinity_cell(FinitePartition part, int cell_index) {
    if (cell_index < 0 || std::size_t(cell_index) >= part.cell_count())
        throw DomainError("infinity cell index out of range");
    part.infinity_cell = cell_index;
    return part;
}

namespace detail {

inline constexpr std::size_t kRefineCap = std::size_t(1) << 24;

// Streams (index tuple, mu(B)) over the cells B of the refined partition
// A^n that carry positive mass, plus the all-infinity-cell tuple even when
// its mass vanishes (the lifted bookkeeping needs it).
template <typename Fn>
void for_each_refined_mass(const InvariantMeasure& mu, const FinitePartition& part,
                           const MapSpec& map, std::size_t n, Fn&& fn) {
    if (const auto* sp = std::get_if<SymbolPartition>(&part.kind)) {
        if (map.kind != MapKind::FullShift || map.alphabet_size != sp->alphabet_size)
            throw CapabilityError("symbol partitions refine under the matching full shift only");
        std::size_t cells = sp->cells.size();
        double total = 1.0;
        for (std::size_t j = 0; j <= n; ++j) {
            total *= double(cells);
            if (total > double(kRefineCap))
                throw DomainError("refined partition exceeds the enumeration cap");
        }
        std::vector<std::uint8_t> tuple;
        tuple.reserve(n + 1);
        if (const auto* bern = std::get_if<BernoulliMeasure>(&mu.kind)) {
            std::vector<double> cell_mass(cells, 0.0);
            for (std::size_t c = 0; c < cells; ++c)
                for (int s : sp->cells[c]) cell_mass[c] += bern->p[std::size_t(s)];
            // depth-first over index tuples with the running product
            std::function<void(std::size_t, double, bool)> rec = [&](std::size_t j, double mass,
                                                                     bool all_inf) {
                if (j > n) {
                    fn(tuple, mass);
                    return;
                }
                for (std::size_t c = 0; c < cells; ++c) {
                    double m2 = mass * cell_mass[c];
                    bool inf2 = all_inf && int(c) == part.infinity_cell;
                    if (m2 == 0.0 && !inf2) continue;
                    tuple.push_back(std::uint8_t(c));
                    rec(j + 1, m2, inf2);
                    tuple.pop_back();
                }
            };
            rec(0, 1.0, part.infinity_cell >= 0);
            return;
        }
        if (const auto* mk = std::get_if<MarkovMeasure>(&mu.kind)) {
            std::size_t k = std::size_t(sp->alphabet_size);
            if (mk->transition.size() != k)
                throw DomainError("markov chain size does not match the partition alphabet");
            std::function<void(std::size_t, const std::vector<double>&, bool)> rec =
                [&](std::size_t j, const std::vector<double>& v, bool all_inf) {
                    if (j > n) {
                        double mass = 0.0;
                        for (double x : v) mass += x;
                        fn(tuple, mass);
                        return;
                    }
                    for (std::size_t c = 0; c < cells; ++c) {
                        std::vector<double> w(k, 0.0);
                        double any = 0.0;
                        for (int t : sp->cells[c]) {
                            double acc = 0.0;
                            for (std::size_t s = 0; s < k; ++s)
                                acc += v[s] * mk->transition[s][std::size_t(t)];
                            w[std::size_t(t)] = acc;
                            any += acc;
                        }
                        bool inf2 = all_inf && int(c) == part.infinity_cell;
                        if (any == 0.0 && !inf2) continue;
                        tuple.push_back(std::uint8_t(c));
                        rec(j + 1, w, inf2);
                        tuple.pop_back();
                    }
                };
            // level 0 uses the stationary distribution directly
            for (std::size_t c = 0; c < cells; ++c) {
                std::vector<double> v(k, 0.0);
                double any = 0.0;
                for (int s : sp->cells[c]) {
                    v[std::size_t(s)] = mk->stationary[std::size_t(s)];
                    any += v[std::size_t(s)];
                }
                bool inf0 = part.infinity_cell == int(c);
                if (any == 0.0 && !inf0) continue;
                tuple.push_back(std::uint8_t(c));
                rec(1, v, inf0);
                tuple.pop_back();
            }
            return;
        }
        throw CapabilityError("symbol partitions pair with bernoulli or markov measures");
    }

    const auto& ap = std::get<ArcPartition>(part.kind);
    if (map.kind != MapKind::CircleDoubling)
        throw CapabilityError("arc partitions refine under the doubling map only");
    if (!std::holds_alternative<LebesgueCircleMeasure>(mu.kind))
        throw CapabilityError("arc partitions pair with the lebesgue circle measure");

    // arrangement of all pullbacks of the breakpoints up to depth n
    std::vector<double> pts = ap.breakpoints;
    std::size_t level_begin = 0;
    for (std::size_t j = 0; j < n; ++j) {
        std::size_t level_end = pts.size();
        if (level_end > kRefineCap) throw DomainError("refined partition exceeds the enumeration cap");
        for (std::size_t i = level_begin; i < level_end; ++i) {
            pts.push_back(pts[i] / 2.0);
            pts.push_back(pts[i] / 2.0 + 0.5);
        }
        level_begin = level_end;
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](double a, double b) { return std::fabs(a - b) < 1e-14; }),
              pts.end());

    auto locate = [&](double t) -> std::uint8_t {
        // cell index of t in the base partition
        auto it = std::upper_bound(ap.breakpoints.begin(), ap.breakpoints.end(), t);
        if (it == ap.breakpoints.begin()) return std::uint8_t(ap.breakpoints.size() - 1);
        return std::uint8_t(std::distance(ap.breakpoints.begin(), it) - 1);
    };

    std::map<std::vector<std::uint8_t>, double> groups;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double next = (i + 1 < pts.size()) ? pts[i + 1] : pts[0] + 1.0;
        double len = next - pts[i];
        double mid = pts[i] + len / 2.0;
        std::vector<std::uint8_t> tuple(n + 1);
        double t = mid;
        for (std::size_t j = 0; j <= n; ++j) {
            tuple[j] = locate(t - std::floor(t));
            t *= 2.0;
        }
        groups[std::move(tuple)] += len;
    }
    if (part.infinity_cell >= 0) {
        std::vector<std::uint8_t> inf_tuple(n + 1, std::uint8_t(part.infinity_cell));
        groups.emplace(std::move(inf_tuple), 0.0);  // keep the cell even at mass 0
    }
    for (const auto& [tuple, mass] : groups) fn(tuple, mass);
}

inline bool all_infinity_tuple(const std::vector<std::uint8_t>& tuple, int infinity_cell) {
    if (infinity_cell < 0) return false;
    for (std::uint8_t c : tuple)
        if (int(c) != infinity_cell) return false;
    return true;
}

}  // namespace detail

// Cells of the refined partition A^n, materialized as index tuples with
// their masses. Symbol partitions under the full shift realize every index
// tuple; arc partitions enumerate the itineraries the arrangement realizes.
// Small depths only; the entropy path streams instead.
struct RefinedPartitionCell {
    std::vector<std::uint8_t> tuple;
    double mass = 0.0;
};

inline std::vector<RefinedPartitionCell> refine_partition_cells(const InvariantMeasure& mu,
                                                                const FinitePartition& part,
                                                                const MapSpec& map,
                                                                std::size_t n) {
    std::vector<RefinedPartitionCell> out;
    if (std::holds_alternative<SymbolPartition>(part.kind)) {
        std::size_t cells = part.cell_count();
        std::size_t total = 1;
        for (std::size_t j = 0; j <= n; ++j) {
            total *= cells;
            if (total > detail::kRefineCap)
                throw DomainError("refined partition exceeds the enumeration cap");
        }
        // masses per tuple via the stream; zero-mass tuples are still cells
        std::map<std::vector<std::uint8_t>, double> masses;
        detail::for_each_refined_mass(mu, part, map, n,
                                      [&](const std::vector<std::uint8_t>& tuple, double mass) {
                                          masses[tuple] = mass;
                                      });
        std::vector<std::uint8_t> tuple(n + 1, 0);
        for (std::size_t t = 0; t < total; ++t) {
            RefinedPartitionCell cell;
            cell.tuple = tuple;
            auto it = masses.find(tuple);
            cell.mass = (it == masses.end()) ? 0.0 : it->second;
            out.push_back(std::move(cell));
            for (std::size_t k = n + 1; k-- > 0;) {
                if (std::uint8_t(++tuple[k]) < cells) break;
                tuple[k] = 0;
            }
        }
        return out;
    }
    detail::for_each_refined_mass(mu, part, map, n,
                                  [&](const std::vector<std::uint8_t>& tuple, double mass) {
                                      out.push_back({tuple, mass});
                                  });
    return out;
}

// H(A^n) = sum over cells of phi(mu(B)). Throws ConsistencyError when the
// cell masses fail to sum to 1.
inline double partition_entropy(const InvariantMeasure& mu, const FinitePartition& part,
                                const MapSpec& map, std::size_t n) {
    long double h = 0.0L;
    long double total = 0.0L;
    auto add = [&](double mass) {
        total += (long double)mass;
        if (mass > 0.0) h -= (long double)mass * std::log((long double)mass);
    };
    if (const auto* lifted = std::get_if<LiftedMeasure>(&mu.kind)) {
        if (part.infinity_cell < 0)
            throw DomainError("lifted measures need a partition with a declared infinity cell");
        double a = 1.0 - lifted->c;
        detail::for_each_refined_mass(
            *lifted->base, part, map, n,
            [&](const std::vector<std::uint8_t>& tuple, double mass) {
                if (detail::all_infinity_tuple(tuple, part.infinity_cell))
                    add(lifted->c + a * mass);
                else if (a > 0.0)
                    add(a * mass);
            });
    } else {
        detail::for_each_refined_mass(
            mu, part, map, n,
            [&](const std::vector<std::uint8_t>&, double mass) { add(mass); });
    }
    if (std::fabs(double(total - 1.0L)) > 1e-10)
        throw ConsistencyError("refined cell masses sum to " + std::to_string(double(total)) +
                               ", expected 1");
    return double(h);
}

struct MeasureEntropyResult {
    std::vector<double> sequence;  // H(A^0) .. H(A^n_max)
    double value = 0.0;            // H(A^n_max) / (n_max + 1)
    bool subadditive = true;
    std::vector<std::string> notes;
};

// h(T, A) at desk scale: the sequence H(A^n) with the normalized tail value.
inline MeasureEntropyResult measure_entropy_estimate(const InvariantMeasure& mu,
                                                     const FinitePartition& part,
                                                     const MapSpec& map, int n_max) {
    if (n_max < 2) throw DomainError("measure entropy needs n_max >= 2");
    MeasureEntropyResult out;
    for (int n = 0; n <= n_max; ++n)
        out.sequence.push_back(partition_entropy(mu, part, map, std::size_t(n)));
    out.value = out.sequence.back() / double(n_max + 1);
    for (int a = 0; a <= n_max; ++a)
        for (int b = a; a + b <= n_max; ++b) {
            double lhs = out.sequence[std::size_t(a + b)];
            double rhs = out.sequence[std::size_t(a)] + out.sequence[std::size_t(b)];
            if (lhs > rhs + 1e-9) {
                out.subadditive = false;
                out.notes.push_back("subadditivity violated at depths " + std::to_string(a) + "," +
                                    std::to_string(b));
            }
        }
    return out;
}

// The bookkeeping of the measure-lifting identity at depth n:
//   H(A~^n) = b + phi(a) + a H(A^n),  a = 1 - c,
//   b = phi(c + a mu(B_inf^n)) - phi(a mu(B_inf^n)),
// where B_inf^n is the refined cell merged with the atom at infinity.
struct LiftedIdentity {
    double lhs = 0.0;       // H(A~^n) computed directly
    double rhs = 0.0;       // b + phi(a) + a H(A^n)
    double residual = 0.0;  // |lhs - rhs|
    double a = 0.0;
    double b = 0.0;
    double infinity_cell_mass = 0.0;  // mu(B_inf^n) under the base measure
};

inline LiftedIdentity lifted_entropy_identity(const InvariantMeasure& base,
                                              const FinitePartition& part, const MapSpec& map,
                                              std::size_t n, double c) {
    if (part.infinity_cell < 0)
        throw DomainError("identity needs a partition with a declared infinity cell");
    InvariantMeasure lifted = lift_measure(base, c);
    LiftedIdentity out;
    out.a = 1.0 - c;
    out.lhs = partition_entropy(lifted, part, map, n);
    double base_h = partition_entropy(base, part, map, n);
    double m_inf = 0.0;
    detail::for_each_refined_mass(base, part, map, n,
                                  [&](const std::vector<std::uint8_t>& tuple, double mass) {
                                      if (detail::all_infinity_tuple(tuple, part.infinity_cell))
                                          m_inf += mass;
                                  });
    out.infinity_cell_mass = m_inf;
    out.b = phi(c + out.a * m_inf) - phi(out.a * m_inf);
    out.rhs = out.b + phi(out.a) + out.a * base_h;
    out.residual = std::fabs(out.lhs - out.rhs);
    return out;
}

}  // namespace entropy_lab
