#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <string>
#include <vector>

#include "entropy_lab/errors.hpp"

namespace entropy_lab {

// Minimum set cover over a finite witness universe. Greedy gives the usual
// (1 + ln m)-factor upper bound; the exact path runs reductions (forced
// picks, dominated sets, dominated points) to a fixpoint, splits the residual
// into connected components, and finishes each component by branch-and-bound
// with a counting bound and a disjoint-point packing bound. Instances
// exceeding the node budget come back as a certified [lower, upper] interval
// flagged inexact.

struct SetCoverInstance {
    std::size_t n_points = 0;
    std::vector<std::vector<std::int32_t>> sets;  // sorted point ids per set
};

struct SetCoverResult {
    std::int64_t lower_bound = 0;
    std::int64_t upper_bound = 0;
    bool exact = false;
    std::vector<std::int32_t> chosen;  // achieves upper_bound
    std::uint64_t nodes = 0;
    bool budget_exhausted = false;
};

struct SetCoverOptions {
    std::uint64_t node_budget = 10'000'000;
};

namespace detail {

class Bits {
public:
    explicit Bits(std::size_t n = 0) : n_(n), w_((n + 63) / 64, 0ull) {}
    void set(std::size_t i) { w_[i >> 6] |= 1ull << (i & 63); }
    bool test(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1ull; }
    std::size_t size() const { return n_; }

private:
    std::size_t n_;
    std::vector<std::uint64_t> w_;
};

struct Incidence {
    std::vector<std::vector<std::int32_t>> point_sets;  // set ids per point

    static Incidence build(const SetCoverInstance& inst) {
        Incidence inc;
        inc.point_sets.assign(inst.n_points, {});
        for (std::size_t s = 0; s < inst.sets.size(); ++s)
            for (std::int32_t p : inst.sets[s])
                inc.point_sets[std::size_t(p)].push_back(std::int32_t(s));
        return inc;
    }
};

struct SolverState {
    const SetCoverInstance* inst = nullptr;
    const Incidence* inc = nullptr;
    Bits covered;                         // covered or dominated points
    Bits dead;                            // deactivated sets
    std::vector<std::int32_t> live_cand;  // live candidate count per point
    std::vector<std::int32_t> unit_queue;
    std::size_t uncovered = 0;
    bool infeasible = false;
    std::vector<std::int32_t> chosen;

    static SolverState root(const SetCoverInstance& inst, const Incidence& inc) {
        SolverState st;
        st.inst = &inst;
        st.inc = &inc;
        st.covered = Bits(inst.n_points);
        st.dead = Bits(inst.sets.size());
        st.uncovered = inst.n_points;
        st.live_cand.resize(inst.n_points);
        for (std::size_t p = 0; p < inst.n_points; ++p) {
            st.live_cand[p] = std::int32_t(inc.point_sets[p].size());
            if (st.live_cand[p] == 0) st.infeasible = true;
            if (st.live_cand[p] == 1) st.unit_queue.push_back(std::int32_t(p));
        }
        return st;
    }

    void cover_point(std::size_t p) {
        if (!covered.test(p)) {
            covered.set(p);
            --uncovered;
        }
    }

    void kill_set(std::size_t s) {
        if (dead.test(s)) return;
        dead.set(s);
        for (std::int32_t pv : inst->sets[s]) {
            std::size_t p = std::size_t(pv);
            if (covered.test(p)) continue;
            if (--live_cand[p] == 1) unit_queue.push_back(std::int32_t(p));
            if (live_cand[p] == 0) infeasible = true;
        }
    }

    void choose_set(std::size_t s) {
        chosen.push_back(std::int32_t(s));
        for (std::int32_t pv : inst->sets[s]) cover_point(std::size_t(pv));
        dead.set(s);  // members are covered now, counts of theirs are moot
    }

    // Picks every sole-candidate set until the unit queue drains.
    void propagate_forced() {
        while (!unit_queue.empty() && !infeasible) {
            std::size_t p = std::size_t(unit_queue.back());
            unit_queue.pop_back();
            if (covered.test(p)) continue;
            std::int32_t only = -1;
            for (std::int32_t s : inc->point_sets[p])
                if (!dead.test(std::size_t(s))) {
                    only = s;
                    break;
                }
            if (only < 0) {
                infeasible = true;
                return;
            }
            choose_set(std::size_t(only));
        }
    }

    std::vector<std::int32_t> live_candidates(std::size_t p) const {
        std::vector<std::int32_t> out;
        for (std::int32_t s : inc->point_sets[p])
            if (!dead.test(std::size_t(s))) out.push_back(s);
        return out;
    }

    std::vector<std::int32_t> uncovered_part(std::size_t s) const {
        std::vector<std::int32_t> out;
        for (std::int32_t p : inst->sets[s])
            if (!covered.test(std::size_t(p))) out.push_back(p);
        return out;
    }

    // Kills sets whose uncovered part sits inside another live set's part and
    // drops points whose live candidate list contains another point's list
    // (covering the harder point covers them for free). Returns whether
    // anything changed.
    bool reduce_dominated() {
        bool changed = false;
        std::size_t n_sets = inst->sets.size();
        std::vector<std::vector<std::int32_t>> rest(n_sets);
        for (std::size_t s = 0; s < n_sets; ++s)
            if (!dead.test(s)) rest[s] = uncovered_part(s);

        auto contains = [](const std::vector<std::int32_t>& big,
                           const std::vector<std::int32_t>& small) {
            if (small.size() > big.size()) return false;
            std::size_t i = 0;
            for (std::int32_t v : small) {
                while (i < big.size() && big[i] < v) ++i;
                if (i == big.size() || big[i] != v) return false;
                ++i;
            }
            return true;
        };

        for (std::size_t s = 0; s < n_sets; ++s) {
            if (dead.test(s)) continue;
            if (rest[s].empty()) {
                dead.set(s);  // contributes nothing; no counts reference it
                continue;
            }
            std::size_t p0 = std::size_t(rest[s][0]);
            for (std::int32_t o : inc->point_sets[p0]) {
                std::size_t other = std::size_t(o);
                if (other == s || dead.test(other)) continue;
                if (rest[other].size() < rest[s].size()) continue;
                if (rest[other].size() == rest[s].size() && other > s) continue;
                if (contains(rest[other], rest[s])) {
                    kill_set(s);
                    changed = true;
                    break;
                }
            }
        }

        std::vector<std::vector<std::int32_t>> cand(inst->n_points);
        for (std::size_t p = 0; p < inst->n_points; ++p)
            if (!covered.test(p)) cand[p] = live_candidates(p);
        for (std::size_t p = 0; p < inst->n_points; ++p) {
            if (covered.test(p) || cand[p].empty()) continue;
            std::size_t s0 = std::size_t(cand[p][0]);
            for (std::int32_t qv : inst->sets[s0]) {
                std::size_t q = std::size_t(qv);
                if (q == p || covered.test(q)) continue;
                if (cand[q].size() > cand[p].size()) continue;
                if (cand[q].size() == cand[p].size() && q > p) continue;
                if (contains(cand[p], cand[q])) {
                    cover_point(p);  // dominated, needs no explicit cover
                    changed = true;
                    break;
                }
            }
        }
        return changed;
    }

    void reduce_to_fixpoint() {
        propagate_forced();
        while (!infeasible) {
            if (!reduce_dominated()) break;
            propagate_forced();
        }
    }
};

// Greedy packing of pairwise non-co-coverable points; its size lower-bounds
// the residual optimum.
inline std::int64_t packing_bound(const SolverState& st) {
    Bits blocked(st.inst->sets.size());
    std::vector<std::pair<std::int32_t, std::int32_t>> order;  // (degree, point)
    for (std::size_t p = 0; p < st.inst->n_points; ++p)
        if (!st.covered.test(p)) order.push_back({st.live_cand[p], std::int32_t(p)});
    std::sort(order.begin(), order.end());
    std::int64_t packed = 0;
    for (auto [deg, pv] : order) {
        (void)deg;
        std::size_t p = std::size_t(pv);
        bool free = true;
        for (std::int32_t s : st.inc->point_sets[p]) {
            if (!st.dead.test(std::size_t(s)) && blocked.test(std::size_t(s))) {
                free = false;
                break;
            }
        }
        if (!free) continue;
        ++packed;
        for (std::int32_t s : st.inc->point_sets[p])
            if (!st.dead.test(std::size_t(s))) blocked.set(std::size_t(s));
    }
    return packed;
}

inline std::int64_t counting_bound(const SolverState& st) {
    if (st.uncovered == 0) return 0;
    std::size_t largest = 0;
    for (std::size_t s = 0; s < st.inst->sets.size(); ++s) {
        if (st.dead.test(s)) continue;
        std::size_t sz = 0;
        for (std::int32_t p : st.inst->sets[s])
            if (!st.covered.test(std::size_t(p))) ++sz;
        largest = std::max(largest, sz);
    }
    if (largest == 0) return std::int64_t(st.uncovered) + 1;  // infeasible marker
    return std::int64_t((st.uncovered + largest - 1) / largest);
}

struct Search {
    std::uint64_t nodes = 0;
    std::uint64_t budget = 0;
    bool exhausted = false;
    std::int64_t best_ub = 0;
    std::vector<std::int32_t> best_chosen;

    void dfs(SolverState st) {
        if (exhausted) return;
        if (++nodes > budget) {
            exhausted = true;
            return;
        }
        st.reduce_to_fixpoint();
        if (st.infeasible) return;
        if (std::int64_t(st.chosen.size()) >= best_ub) return;
        if (st.uncovered == 0) {
            best_ub = std::int64_t(st.chosen.size());
            best_chosen = st.chosen;
            return;
        }
        std::int64_t lb =
            std::int64_t(st.chosen.size()) + std::max(counting_bound(st), packing_bound(st));
        if (lb >= best_ub) return;

        // branch on the uncovered point with fewest live candidates
        std::size_t pivot = st.inst->n_points;
        std::int32_t pivot_deg = INT32_MAX;
        for (std::size_t p = 0; p < st.inst->n_points; ++p) {
            if (st.covered.test(p)) continue;
            if (st.live_cand[p] < pivot_deg) {
                pivot_deg = st.live_cand[p];
                pivot = p;
            }
        }
        if (pivot == st.inst->n_points) return;
        std::vector<std::int32_t> cands = st.live_candidates(pivot);
        std::stable_sort(cands.begin(), cands.end(), [&](std::int32_t a, std::int32_t b) {
            return st.uncovered_part(std::size_t(a)).size() >
                   st.uncovered_part(std::size_t(b)).size();
        });
        for (std::size_t i = 0; i < cands.size(); ++i) {
            SolverState child = st;
            child.choose_set(std::size_t(cands[i]));
            // sets skipped earlier in this branch may not cover the pivot again
            for (std::size_t j = 0; j < i; ++j) child.kill_set(std::size_t(cands[j]));
            dfs(std::move(child));
            if (exhausted) return;
        }
    }
};

}  // namespace detail

// Deterministic lazy greedy: repeatedly take the set covering the most
// uncovered points, ties broken by lowest set index.
inline std::vector<std::int32_t> greedy_set_cover(const SetCoverInstance& inst) {
    std::vector<bool> covered(inst.n_points, false);
    std::size_t uncovered = inst.n_points;
    using Entry = std::pair<std::int64_t, std::int64_t>;  // (gain, -index)
    std::priority_queue<Entry> heap;
    for (std::size_t s = 0; s < inst.sets.size(); ++s)
        heap.push({std::int64_t(inst.sets[s].size()), -std::int64_t(s)});
    std::vector<std::int32_t> chosen;
    while (uncovered > 0) {
        if (heap.empty())
            throw DomainError("set cover instance is infeasible: a point has no candidate set");
        auto [gain, negidx] = heap.top();
        heap.pop();
        std::size_t s = std::size_t(-negidx);
        std::int64_t fresh = 0;
        for (std::int32_t p : inst.sets[s])
            if (!covered[std::size_t(p)]) ++fresh;
        if (fresh < gain) {  // stale, re-queue with the true gain
            if (fresh > 0) heap.push({fresh, negidx});
            continue;
        }
        if (fresh == 0) continue;
        chosen.push_back(std::int32_t(s));
        for (std::int32_t p : inst.sets[s]) {
            if (!covered[std::size_t(p)]) {
                covered[std::size_t(p)] = true;
                --uncovered;
            }
        }
    }
    return chosen;
}

inline SetCoverResult solve_set_cover(const SetCoverInstance& inst,
                                      const SetCoverOptions& options = {}) {
    for (const auto& s : inst.sets)
        for (std::int32_t p : s)
            if (p < 0 || std::size_t(p) >= inst.n_points)
                throw DomainError("set cover instance references point out of range");

    detail::Incidence inc = detail::Incidence::build(inst);
    for (std::size_t p = 0; p < inst.n_points; ++p)
        if (inc.point_sets[p].empty())
            throw DomainError("set cover instance is infeasible: point " + std::to_string(p) +
                              " has no candidate set");

    std::vector<std::int32_t> greedy = greedy_set_cover(inst);
    std::int64_t ln_floor = std::int64_t(std::ceil(
        double(greedy.size()) /
        (1.0 + std::log(double(std::max<std::size_t>(inst.n_points, 2))))));

    detail::SolverState root = detail::SolverState::root(inst, inc);
    root.reduce_to_fixpoint();
    if (root.infeasible) throw DomainError("set cover instance is infeasible");

    SetCoverResult out;
    out.nodes = 1;
    if (root.uncovered == 0) {
        out.exact = true;
        out.chosen = root.chosen;
        out.lower_bound = out.upper_bound = std::int64_t(root.chosen.size());
        return out;
    }

    // split the residual into connected components of the incidence graph
    std::vector<std::int32_t> comp_of_point(inst.n_points, -1);
    std::vector<std::int32_t> comp_of_set(inst.sets.size(), -1);
    std::int32_t n_comp = 0;
    for (std::size_t seed = 0; seed < inst.n_points; ++seed) {
        if (root.covered.test(seed) || comp_of_point[seed] >= 0) continue;
        std::vector<std::int32_t> stack{std::int32_t(seed)};
        comp_of_point[seed] = n_comp;
        while (!stack.empty()) {
            std::size_t p = std::size_t(stack.back());
            stack.pop_back();
            for (std::int32_t sv : inc.point_sets[p]) {
                std::size_t s = std::size_t(sv);
                if (root.dead.test(s) || comp_of_set[s] >= 0) continue;
                comp_of_set[s] = n_comp;
                for (std::int32_t qv : inst.sets[s]) {
                    std::size_t q = std::size_t(qv);
                    if (!root.covered.test(q) && comp_of_point[q] < 0) {
                        comp_of_point[q] = n_comp;
                        stack.push_back(std::int32_t(qv));
                    }
                }
            }
        }
        ++n_comp;
    }

    std::int64_t total_lb = std::int64_t(root.chosen.size());
    std::int64_t total_ub = std::int64_t(root.chosen.size());
    bool all_exact = true;
    std::uint64_t nodes = 1;
    std::vector<std::int32_t> chosen = root.chosen;

    for (std::int32_t c = 0; c < n_comp; ++c) {
        SetCoverInstance sub;
        std::vector<std::int32_t> point_back, set_back;
        std::vector<std::int32_t> point_fwd(inst.n_points, -1);
        for (std::size_t p = 0; p < inst.n_points; ++p) {
            if (comp_of_point[p] == c) {
                point_fwd[p] = std::int32_t(point_back.size());
                point_back.push_back(std::int32_t(p));
            }
        }
        sub.n_points = point_back.size();
        for (std::size_t s = 0; s < inst.sets.size(); ++s) {
            if (comp_of_set[s] != c) continue;
            std::vector<std::int32_t> members;
            for (std::int32_t pv : inst.sets[s]) {
                std::int32_t f = point_fwd[std::size_t(pv)];
                if (f >= 0) members.push_back(f);
            }
            if (!members.empty()) {
                set_back.push_back(std::int32_t(s));
                sub.sets.push_back(std::move(members));
            }
        }

        detail::Incidence sub_inc = detail::Incidence::build(sub);
        detail::SolverState sub_root = detail::SolverState::root(sub, sub_inc);
        std::vector<std::int32_t> sub_greedy = greedy_set_cover(sub);

        detail::Search search;
        search.budget = std::max<std::uint64_t>(options.node_budget / std::uint64_t(n_comp), 1);
        search.best_ub = std::int64_t(sub_greedy.size()) + 1;
        search.dfs(sub_root);
        nodes += search.nodes;

        std::vector<std::int32_t> sub_chosen = search.best_chosen;
        if (sub_chosen.empty() || sub_greedy.size() < sub_chosen.size()) sub_chosen = sub_greedy;
        std::int64_t sub_ub = std::int64_t(sub_chosen.size());
        std::int64_t sub_lb;
        if (search.exhausted) {
            all_exact = false;
            sub_lb = std::max<std::int64_t>(
                std::max(detail::packing_bound(sub_root), detail::counting_bound(sub_root)), 1);
            sub_lb = std::min(sub_lb, sub_ub);
        } else {
            sub_lb = sub_ub;
        }
        total_lb += sub_lb;
        total_ub += sub_ub;
        for (std::int32_t s : sub_chosen) chosen.push_back(set_back[std::size_t(s)]);
    }

    out.nodes = nodes;
    out.exact = all_exact;
    out.budget_exhausted = !all_exact;
    out.upper_bound = total_ub;
    out.lower_bound = all_exact ? total_ub : std::max(std::min(total_lb, total_ub), ln_floor);
    out.chosen = std::move(chosen);
    std::sort(out.chosen.begin(), out.chosen.end());
    return out;
}

// Exhaustive oracle for small instances (tests); optimum over all subsets.
inline std::int64_t brute_force_minimum_cover(const SetCoverInstance& inst) {
    if (inst.sets.size() > 25) throw DomainError("brute force limited to 25 sets");
    std::size_t k = inst.sets.size();
    std::int64_t best = -1;
    for (std::uint64_t mask = 0; mask < (1ull << k); ++mask) {
        std::vector<bool> covered(inst.n_points, false);
        std::size_t cov = 0;
        for (std::size_t s = 0; s < k; ++s) {
            if (!(mask >> s & 1)) continue;
            for (std::int32_t p : inst.sets[s]) {
                if (!covered[std::size_t(p)]) {
                    covered[std::size_t(p)] = true;
                    ++cov;
                }
            }
        }
        if (cov == inst.n_points) {
            std::int64_t size = __builtin_popcountll(mask);
            if (best < 0 || size < best) best = size;
        }
    }
    if (best < 0) throw DomainError("brute force: instance infeasible");
    return best;
}

}  // namespace entropy_lab
