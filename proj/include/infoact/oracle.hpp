#pragma once

// Brute-force reference computations. Nothing here shares code with the
// solvers it is used to check: no belief filter, no value iteration, no
// memoized belief tree.

#include "infoact/model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <tuple>
#include <vector>

namespace infoact::oracle {

/**
 * Optimal finite-horizon MDP value from every start state, by enumerating all
 * deterministic non-stationary Markov policies and evaluating each one by
 * forward propagation of the state distribution.
 */
template <class Model>
std::vector<double> mdp_by_policy_enumeration(const Model& m, int horizon, std::size_t max_policies = 5'000'000) {
    const auto ns = m.n_states(), na = m.n_actions();
    const std::size_t slots = ns * static_cast<std::size_t>(horizon);
    double count = std::pow(static_cast<double>(na), static_cast<double>(slots));
    if (count > static_cast<double>(max_policies)) throw Error("too many policies to enumerate");
    std::vector<std::size_t> choice(slots, 0); // choice[k * ns + s] = action at step k
    std::vector<double> best(ns, -std::numeric_limits<double>::infinity());
    while (true) {
        for (std::size_t s0 = 0; s0 < ns; ++s0) {
            std::vector<double> dist(ns, 0.0);
            dist[s0] = 1.0;
            double total = 0.0;
            for (int k = 0; k < horizon; ++k) {
                std::vector<double> next(ns, 0.0);
                for (std::size_t s = 0; s < ns; ++s) {
                    if (dist[s] == 0.0) continue;
                    auto a = choice[static_cast<std::size_t>(k) * ns + s];
                    total += dist[s] * m.R(s, a);
                    if (m.is_terminal(s, a)) continue;
                    for (std::size_t s2 = 0; s2 < ns; ++s2) next[s2] += dist[s] * m.T(a, s, s2);
                }
                dist.swap(next);
            }
            best[s0] = std::max(best[s0], total);
        }
        std::size_t i = 0;
        while (i < slots && ++choice[i] == na) choice[i++] = 0;
        if (i == slots) break;
    }
    return best;
}

/**
 * Alpha vectors of every observation-contingent policy tree of depth
 * `horizon`, without pruning. Tree values at b are alpha . b, so the optimal
 * value is the max over this set.
 */
inline std::vector<std::vector<double>> all_policy_tree_alphas(const TabularPomdp& m, int horizon,
                                                               std::size_t max_trees = 5'000'000) {
    const auto ns = m.n_states(), na = m.n_actions(), no = m.n_obs();
    std::vector<std::vector<double>> gamma;
    for (std::size_t a = 0; a < na; ++a) {
        std::vector<double> alpha(ns);
        for (std::size_t s = 0; s < ns; ++s) alpha[s] = m.R(s, a);
        gamma.push_back(std::move(alpha));
    }
    for (int t = 2; t <= horizon; ++t) {
        double count = static_cast<double>(na) * std::pow(static_cast<double>(gamma.size()), static_cast<double>(no));
        if (count > static_cast<double>(max_trees)) throw Error("too many policy trees to enumerate");
        std::vector<std::vector<double>> next;
        next.reserve(static_cast<std::size_t>(count));
        for (std::size_t a = 0; a < na; ++a) {
            std::vector<std::size_t> pick(no, 0); // child subtree per observation
            while (true) {
                std::vector<double> alpha(ns);
                for (std::size_t s = 0; s < ns; ++s) {
                    double v = m.R(s, a);
                    if (!m.is_terminal(s, a))
                        for (std::size_t s2 = 0; s2 < ns; ++s2) {
                            double p = m.T(a, s, s2);
                            if (p == 0.0) continue;
                            for (std::size_t o = 0; o < no; ++o) v += p * m.Z(a, s2, o) * gamma[pick[o]][s2];
                        }
                    alpha[s] = v;
                }
                next.push_back(std::move(alpha));
                std::size_t i = 0;
                while (i < no && ++pick[i] == gamma.size()) pick[i++] = 0;
                if (i == no) break;
            }
        }
        gamma.swap(next);
    }
    return gamma;
}

inline double pomdp_by_policy_trees(const TabularPomdp& m, std::span<const double> belief, int horizon) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& alpha : all_policy_tree_alphas(m, horizon))
        best = std::max(best, std::inner_product(alpha.begin(), alpha.end(), belief.begin(), 0.0));
    return best;
}

/// Best tree whose root action is `action`. Trees are generated in blocks of
/// equal size per root action, in action order.
inline double pomdp_q_by_policy_trees(const TabularPomdp& m, std::span<const double> belief, int horizon,
                                      std::size_t action) {
    auto gamma = all_policy_tree_alphas(m, horizon);
    std::size_t block = gamma.size() / m.n_actions();
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = action * block; i < (action + 1) * block; ++i)
        best = std::max(best, std::inner_product(gamma[i].begin(), gamma[i].end(), belief.begin(), 0.0));
    return best;
}

/**
 * Grid-level simulator of the UAV search, written directly from the problem
 * statement (not from the tabular builder). Beliefs are sets of equally likely
 * car cells, which is exact for a uniform prior.
 */
class UavGridOracle {
public:
    struct Semantics {
        int budget = 5;
        bool corner_detour = false;
    };

    explicit UavGridOracle(Semantics sem) : sem_(sem) {}

    int horizon() const { return sem_.budget + 1; }

    /// Best return from c5 when the car cell is known, over every action sequence.
    double mdp_start_value(int car) const {
        double best = -std::numeric_limits<double>::infinity();
        std::vector<int> seq(horizon(), 0);
        while (true) {
            Uav u{5, false, 0};
            double total = 0.0;
            for (int k = 0; k < horizon(); ++k) {
                auto st = step(u, seq[k], car);
                total += st.reward;
                u = st.next;
                if (st.done) break;
            }
            best = std::max(best, total);
            int i = 0;
            while (i < horizon() && ++seq[i] == 5) seq[i++] = 0;
            if (i == horizon()) break;
        }
        return best;
    }

    /// Optimal value from the uniform prior over the eight non-centre cells.
    double optimal_value() { return optimal(all_cars(), {5, false, 0}, horizon()); }

    /// Value of the MDP-based rule (expected known-car Q restricted to actions
    /// optimal for some candidate car), uniform tie-breaking in expectation.
    double mdp_pomdp_value() { return follow(all_cars(), {5, false, 0}, horizon()); }

    /// First actions the optimal policy may take at the start (argmax set).
    std::vector<int> optimal_first_actions() {
        auto cars = all_cars();
        std::vector<double> q(5);
        for (int a = 0; a < 5; ++a) q[a] = optimal_q(cars, {5, false, 0}, horizon(), a);
        double best = *std::max_element(q.begin(), q.end());
        std::vector<int> out;
        for (int a = 0; a < 5; ++a)
            if (q[a] >= best - 1e-9) out.push_back(a);
        return out;
    }

    /// Whether the MDP-based rule ever executes `up` anywhere in its reachable tree.
    bool mdp_pomdp_ever_goes_up() {
        bool seen = false;
        follow(all_cars(), {5, false, 0}, horizon(), &seen);
        return seen;
    }

private:
    static constexpr int kUp = 4;

    struct Uav {
        int pos;
        bool found;
        int spent;
        auto operator<=>(const Uav&) const = default;
    };
    struct Step {
        Uav next;
        double reward;
        bool done;
    };

    static std::vector<int> all_cars() { return {1, 2, 3, 4, 6, 7, 8, 9}; }

    static int move_cell(int pos, int a) {
        int row = (pos - 1) / 3, col = (pos - 1) % 3;
        if (a == 0 && row > 0) --row;
        if (a == 1 && col < 2) ++col;
        if (a == 2 && row < 2) ++row;
        if (a == 3 && col > 0) --col;
        return row * 3 + col + 1;
    }

    Step step(Uav u, int a, int car) const {
        if (a == kUp) {
            u.spent += 2;
            return {u, -2.0, u.spent > sem_.budget};
        }
        int cell = move_cell(u.pos, a);
        bool corner = cell == 1 || cell == 3 || cell == 7 || cell == 9;
        int cost = (sem_.corner_detour && corner && cell != u.pos) ? 2 : 1;
        double reward = -cost;
        bool hit = cell == car && !u.found;
        if (hit) reward = sem_.corner_detour ? 100.0 - cost : 100.0;
        Uav n{cell, u.found || hit, u.spent + cost};
        bool done = cell == 5 || n.spent > sem_.budget || (sem_.corner_detour && hit);
        return {n, reward, done};
    }

    // Known-car Q by exhaustive recursion over continuations.
    double known_q(int car, Uav u, int t, int a) {
        auto key = std::make_tuple(car, u, t, a);
        if (auto it = known_.find(key); it != known_.end()) return it->second;
        auto st = step(u, a, car);
        double v = st.reward;
        if (!st.done && t > 1) {
            double best = -std::numeric_limits<double>::infinity();
            for (int b = 0; b < 5; ++b) best = std::max(best, known_q(car, st.next, t - 1, b));
            v += best;
        }
        known_.emplace(key, v);
        return v;
    }

    // Groups candidate cars by what the UAV would observe after action a.
    std::map<int, std::vector<int>> split(const std::vector<int>& cars, Uav u, int a) const {
        std::map<int, std::vector<int>> groups;
        for (int car : cars) {
            int obs;
            if (a == kUp) obs = 100 + car;
            else obs = move_cell(u.pos, a) == car ? 1 : 0;
            groups[obs].push_back(car);
        }
        return groups;
    }

    double optimal_q(const std::vector<int>& cars, Uav u, int t, int a) {
        double total = 0.0;
        for (auto& [obs, group] : split(cars, u, a)) {
            double p = static_cast<double>(group.size()) / static_cast<double>(cars.size());
            // deterministic dynamics: every car in the group leads to the same UAV state
            auto st = step(u, a, group.front());
            double r = 0.0;
            for (int car : group) r += step(u, a, car).reward;
            r /= static_cast<double>(group.size());
            double cont = (!st.done && t > 1) ? optimal(group, st.next, t - 1) : 0.0;
            total += p * (r + cont);
        }
        return total;
    }

    double optimal(const std::vector<int>& cars, Uav u, int t) {
        double best = -std::numeric_limits<double>::infinity();
        for (int a = 0; a < 5; ++a) best = std::max(best, optimal_q(cars, u, t, a));
        return best;
    }

    double follow(const std::vector<int>& cars, Uav u, int t, bool* went_up = nullptr) {
        std::vector<char> admitted(5, 0);
        for (int car : cars) {
            double best = -std::numeric_limits<double>::infinity();
            for (int a = 0; a < 5; ++a) best = std::max(best, known_q(car, u, t, a));
            for (int a = 0; a < 5; ++a)
                if (known_q(car, u, t, a) >= best - 1e-9) admitted[a] = 1;
        }
        std::vector<double> value(5, 0.0);
        for (int a = 0; a < 5; ++a)
            for (int car : cars) value[a] += known_q(car, u, t, a) / static_cast<double>(cars.size());
        double best = -std::numeric_limits<double>::infinity();
        for (int a = 0; a < 5; ++a)
            if (admitted[a]) best = std::max(best, value[a]);
        std::vector<int> acts;
        for (int a = 0; a < 5; ++a)
            if (admitted[a] && value[a] >= best - 1e-9) acts.push_back(a);

        double total = 0.0;
        for (int a : acts) {
            if (a == kUp && went_up) *went_up = true;
            double qa = 0.0;
            for (auto& [obs, group] : split(cars, u, a)) {
                double p = static_cast<double>(group.size()) / static_cast<double>(cars.size());
                auto st = step(u, a, group.front());
                double r = 0.0;
                for (int car : group) r += step(u, a, car).reward;
                r /= static_cast<double>(group.size());
                double cont = (!st.done && t > 1) ? follow(group, st.next, t - 1, went_up) : 0.0;
                qa += p * (r + cont);
            }
            total += qa;
        }
        return total / static_cast<double>(acts.size());
    }

    Semantics sem_;
    std::map<std::tuple<int, Uav, int, int>, double> known_;
};

} // namespace infoact::oracle
