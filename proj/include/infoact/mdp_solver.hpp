#pragma once

#include "infoact/model.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <vector>

namespace infoact {

/**
 * Finite-horizon Q/V tables indexed by remaining horizon t = 1..T.
 *
 * opt_actions(t, s) is the full argmax set at tolerance 1e-9; ties are never
 * broken here.
 */
class ValueTable {
public:
    ValueTable() = default;
    ValueTable(int horizon, std::size_t n_states, std::size_t n_actions)
        : horizon_(horizon), n_states_(n_states), n_actions_(n_actions),
          q_(static_cast<std::size_t>(horizon) * n_states * n_actions, 0.0),
          v_(static_cast<std::size_t>(horizon) * n_states, 0.0),
          opt_(static_cast<std::size_t>(horizon) * n_states) {}

    int horizon() const noexcept { return horizon_; }
    std::size_t n_states() const noexcept { return n_states_; }
    std::size_t n_actions() const noexcept { return n_actions_; }

    double q(int t, std::size_t s, std::size_t a) const { return q_[qi(t, s, a)]; }
    /// V[0][s] = 0 by convention.
    double v(int t, std::size_t s) const { return t == 0 ? 0.0 : v_[vi(t, s)]; }
    const std::vector<ActionId>& opt_actions(int t, std::size_t s) const { return opt_[vi(t, s)]; }

    // writable cells, t >= 1
    double& q_cell(int t, std::size_t s, std::size_t a) { return q_[qi(t, s, a)]; }
    double& v_cell(int t, std::size_t s) { return v_[vi(t, s)]; }
    std::vector<ActionId>& opt_cell(int t, std::size_t s) { return opt_[vi(t, s)]; }

    bool is_optimal(int t, std::size_t s, ActionId a) const {
        const auto& set = opt_actions(t, s);
        return std::find(set.begin(), set.end(), a) != set.end();
    }

private:
    std::size_t qi(int t, std::size_t s, std::size_t a) const {
        return (static_cast<std::size_t>(t - 1) * n_states_ + s) * n_actions_ + a;
    }
    std::size_t vi(int t, std::size_t s) const { return static_cast<std::size_t>(t - 1) * n_states_ + s; }

    int horizon_ = 0;
    std::size_t n_states_ = 0;
    std::size_t n_actions_ = 0;
    std::vector<double> q_;
    std::vector<double> v_;
    std::vector<std::vector<ActionId>> opt_;
};

/// Backward induction: Q[t][s][a] = R(s,a) + [not terminal] sum_s' T V[t-1][s'].
template <class Model>
ValueTable solve_mdp(const Model& m, int horizon) {
    const auto ns = m.n_states(), na = m.n_actions();
    ValueTable vt(horizon, ns, na);
    for (int t = 1; t <= horizon; ++t) {
        for (std::size_t s = 0; s < ns; ++s) {
            double best = -std::numeric_limits<double>::infinity();
            for (std::size_t a = 0; a < na; ++a) {
                double q = m.R(s, a);
                if (t > 1 && !m.is_terminal(s, a)) {
                    double cont = 0.0;
                    for (std::size_t s2 = 0; s2 < ns; ++s2) cont += m.T(a, s, s2) * vt.v(t - 1, s2);
                    q += cont;
                }
                vt.q_cell(t, s, a) = q;
                best = std::max(best, q);
            }
            vt.v_cell(t, s) = best;
            auto& opt = vt.opt_cell(t, s);
            for (std::size_t a = 0; a < na; ++a)
                if (vt.q(t, s, a) >= best - kTolerance) opt.emplace_back(a);
        }
    }
    return vt;
}

inline ValueTable solve_mdp(const TabularMdp& m) { return solve_mdp(m, m.horizon); }

/// Union of argmax sets over every (t, s) pair in the table.
inline std::set<ActionId> optimal_action_union(const ValueTable& vt) {
    std::set<ActionId> out;
    for (int t = 1; t <= vt.horizon(); ++t)
        for (std::size_t s = 0; s < vt.n_states(); ++s)
            out.insert(vt.opt_actions(t, s).begin(), vt.opt_actions(t, s).end());
    return out;
}

/**
 * Union of argmax sets over the (t, s) pairs some optimal MDP policy actually
 * visits when started at remaining horizon T from a state in `support`.
 * Every tied action is followed, so this covers all optimal policies.
 */
template <class Model>
std::set<ActionId> reachable_optimal_action_union(const Model& m, const ValueTable& vt,
                                                  const std::vector<std::size_t>& support) {
    const auto ns = m.n_states();
    std::set<ActionId> out;
    std::vector<char> frontier(ns, 0);
    for (auto s : support) frontier[s] = 1;
    for (int t = vt.horizon(); t >= 1; --t) {
        std::vector<char> next(ns, 0);
        for (std::size_t s = 0; s < ns; ++s) {
            if (!frontier[s]) continue;
            for (auto a : vt.opt_actions(t, s)) {
                out.insert(a);
                if (t == 1 || m.is_terminal(s, a.index)) continue;
                for (std::size_t s2 = 0; s2 < ns; ++s2)
                    if (m.T(a.index, s, s2) > 0.0) next[s2] = 1;
            }
        }
        frontier.swap(next);
    }
    return out;
}

/// Smallest gap V[t][s] - Q[t][s][a] over the same pairs as the reachable union;
/// used to flag near-ties for an action outside the union.
template <class Model>
double reachable_optimality_margin(const Model& m, const ValueTable& vt, const std::vector<std::size_t>& support,
                                   ActionId action) {
    const auto ns = m.n_states();
    double margin = std::numeric_limits<double>::infinity();
    std::vector<char> frontier(ns, 0);
    for (auto s : support) frontier[s] = 1;
    for (int t = vt.horizon(); t >= 1; --t) {
        std::vector<char> next(ns, 0);
        for (std::size_t s = 0; s < ns; ++s) {
            if (!frontier[s]) continue;
            margin = std::min(margin, vt.v(t, s) - vt.q(t, s, action.index));
            for (auto a : vt.opt_actions(t, s)) {
                if (t == 1 || m.is_terminal(s, a.index)) continue;
                for (std::size_t s2 = 0; s2 < ns; ++s2)
                    if (m.T(a.index, s, s2) > 0.0) next[s2] = 1;
            }
        }
        frontier.swap(next);
    }
    return margin;
}

} // namespace infoact
