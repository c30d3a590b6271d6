#pragma once

#include "infoact/belief.hpp"
#include "infoact/mdp_solver.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

namespace infoact {

enum class PolicyKind { qmdp, hindsight, exact, fixed_table };
enum class TieRule { lexicographic, uniform };

/**
 * Which actions the MDP-POMDP rule may pick from. `mdp_supported` only admits
 * actions that are MDP-optimal for some state in the belief's support at the
 * current remaining horizon; `unrestricted` ranks every action.
 */
enum class ActionScope { mdp_supported, unrestricted };

inline const char* to_string(PolicyKind k) {
    switch (k) {
    case PolicyKind::qmdp: return "qmdp";
    case PolicyKind::hindsight: return "hindsight";
    case PolicyKind::exact: return "exact";
    case PolicyKind::fixed_table: return "fixed-table";
    }
    return "?";
}
inline const char* to_string(TieRule r) { return r == TieRule::lexicographic ? "lexicographic" : "uniform"; }
inline const char* to_string(ActionScope s) { return s == ActionScope::mdp_supported ? "mdp-supported" : "unrestricted"; }

/// value(a) = sum_s b(s) Q[t][s][a].
inline std::vector<double> mdp_pomdp_action_values(const TabularPomdp& m, const ValueTable& vt, const Belief& b,
                                                   int t_remaining) {
    if (t_remaining < 1 || t_remaining > vt.horizon())
        throw Error("value table solved to horizon " + std::to_string(vt.horizon()) + ", asked for " +
                    std::to_string(t_remaining));
    std::vector<double> values(m.n_actions(), 0.0);
    for (std::size_t s = 0; s < m.n_states(); ++s) {
        if (b[s] == 0.0) continue;
        for (std::size_t a = 0; a < m.n_actions(); ++a) values[a] += b[s] * vt.q(t_remaining, s, a);
    }
    return values;
}

/// Argmax set of the MDP-POMDP rule at (b, t), within 1e-9, in action order.
inline std::vector<ActionId> mdp_pomdp_greedy_set(const TabularPomdp& m, const ValueTable& vt, const Belief& b,
                                                  int t_remaining, ActionScope scope = ActionScope::mdp_supported) {
    auto values = mdp_pomdp_action_values(m, vt, b, t_remaining);
    std::vector<char> admitted(m.n_actions(), scope == ActionScope::unrestricted ? 1 : 0);
    if (scope == ActionScope::mdp_supported) {
        for (std::size_t s = 0; s < m.n_states(); ++s) {
            if (b[s] <= kZeroMass) continue;
            for (auto a : vt.opt_actions(t_remaining, s)) admitted[a.index] = 1;
        }
    }
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < m.n_actions(); ++a)
        if (admitted[a]) best = std::max(best, values[a]);
    std::vector<ActionId> out;
    for (std::size_t a = 0; a < m.n_actions(); ++a)
        if (admitted[a] && values[a] >= best - kTolerance) out.emplace_back(a);
    return out;
}

using PolicyTable = std::unordered_map<BeliefKey, std::vector<ActionId>, BeliefKeyHash>;

/// Action rule over (belief, remaining horizon). Immutable once built.
class PolicySpec {
public:
    static PolicySpec mdp_pomdp(PolicyKind kind, std::shared_ptr<const ValueTable> table,
                                TieRule tie_rule = TieRule::uniform,
                                ActionScope scope = ActionScope::mdp_supported) {
        if (kind != PolicyKind::qmdp && kind != PolicyKind::hindsight)
            throw Error("mdp_pomdp policy must be qmdp or hindsight");
        PolicySpec p;
        p.kind_ = kind;
        p.tie_rule_ = tie_rule;
        p.scope_ = scope;
        p.values_ = std::move(table);
        return p;
    }

    static PolicySpec from_table(PolicyKind kind, std::shared_ptr<const PolicyTable> table,
                                 TieRule tie_rule = TieRule::lexicographic) {
        if (kind != PolicyKind::exact && kind != PolicyKind::fixed_table)
            throw Error("table policy must be exact or fixed-table");
        PolicySpec p;
        p.kind_ = kind;
        p.tie_rule_ = tie_rule;
        p.table_ = std::move(table);
        return p;
    }

    PolicyKind kind() const noexcept { return kind_; }
    TieRule tie_rule() const noexcept { return tie_rule_; }
    ActionScope scope() const noexcept { return scope_; }
    const PolicyTable* table() const noexcept { return table_.get(); }
    const ValueTable* value_table() const noexcept { return values_.get(); }

    /// All actions the rule considers best at (b, t), before tie handling.
    std::vector<ActionId> action_set(const TabularPomdp& m, const Belief& b, int t) const {
        if (values_) return mdp_pomdp_greedy_set(m, *values_, b, t, scope_);
        auto it = table_->find(BeliefKey(b, t));
        if (it == table_->end() || it->second.empty())
            throw Error("policy table has no entry for a reachable belief at horizon " + std::to_string(t));
        return it->second;
    }

    /// Actions actually executed, each with equal weight, after the tie rule.
    std::vector<ActionId> executed(const TabularPomdp& m, const Belief& b, int t) const {
        auto set = action_set(m, b, t);
        if (tie_rule_ == TieRule::lexicographic) set.resize(1);
        return set;
    }

private:
    PolicyKind kind_ = PolicyKind::qmdp;
    TieRule tie_rule_ = TieRule::uniform;
    ActionScope scope_ = ActionScope::mdp_supported;
    std::shared_ptr<const ValueTable> values_;
    std::shared_ptr<const PolicyTable> table_;
};

struct EvalOptions {
    std::size_t node_cap = 1'000'000;
};

namespace detail {

class PolicyEvaluator {
public:
    PolicyEvaluator(const TabularPomdp& m, const PolicySpec& p, EvalOptions opts) : m_(m), p_(p), opts_(opts) {}

    double value(const Belief& b, int t) {
        if (t == 0) return 0.0;
        BeliefKey key(b, t);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        if (memo_.size() >= opts_.node_cap) throw TreeBudgetExceeded(opts_.node_cap);
        auto acts = p_.executed(m_, b, t);
        double total = 0.0;
        for (auto a : acts) total += action_value(b, a, t);
        double v = total / static_cast<double>(acts.size());
        memo_.emplace(std::move(key), v);
        return v;
    }

    double action_value(const Belief& b, ActionId a, int t) {
        double v = belief_reward(m_, b, a);
        if (t > 1)
            for (const auto& br : continuation_branches(m_, b, a)) v += br.prob * value(br.next, t - 1);
        return v;
    }

    std::size_t nodes() const noexcept { return memo_.size(); }

private:
    const TabularPomdp& m_;
    const PolicySpec& p_;
    EvalOptions opts_;
    std::unordered_map<BeliefKey, double, BeliefKeyHash> memo_;
};

} // namespace detail

/**
 * Exact value of a policy by expectimax over its reachable belief tree.
 * Uniform ties average the tied actions' subtree values.
 */
inline double evaluate_policy_exact(const TabularPomdp& m, const PolicySpec& policy, const Belief& b, int t,
                                    EvalOptions opts = {}) {
    detail::PolicyEvaluator eval(m, policy, opts);
    return eval.value(b, t);
}

inline double evaluate_policy_exact(const TabularPomdp& m, const PolicySpec& policy, EvalOptions opts = {}) {
    return evaluate_policy_exact(m, policy, m.start(), m.horizon, opts);
}

/// A node of a policy's reachable belief tree.
struct PolicyNode {
    Belief belief;
    int t_remaining;
    int depth;
    std::vector<ActionId> executed;
};

/// Visits each distinct reachable (belief, horizon) node once, depth-first.
inline void walk_policy_tree(const TabularPomdp& m, const PolicySpec& policy, const Belief& b, int t,
                             const std::function<void(const PolicyNode&)>& visit, EvalOptions opts = {}) {
    std::unordered_map<BeliefKey, char, BeliefKeyHash> seen;
    std::function<void(const Belief&, int, int)> rec = [&](const Belief& bel, int tr, int depth) {
        if (tr == 0) return;
        if (!seen.emplace(BeliefKey(bel, tr), 1).second) return;
        if (seen.size() > opts.node_cap) throw TreeBudgetExceeded(opts.node_cap);
        PolicyNode node{bel, tr, depth, policy.executed(m, bel, tr)};
        visit(node);
        if (tr == 1) return;
        for (auto a : node.executed)
            for (const auto& br : continuation_branches(m, bel, a)) rec(br.next, tr - 1, depth + 1);
    };
    rec(b, t, 0);
}

enum class BoundVariant { qmdp, hindsight };

/// qmdp: max_a sum_s b0(s) Q[T][s][a]; hindsight: sum_s b0(s) V[T][s].
inline double pomdp_upper_bound(const TabularPomdp& m, const ValueTable& vt, BoundVariant variant) {
    auto b0 = m.start();
    if (variant == BoundVariant::hindsight) {
        double v = 0.0;
        for (std::size_t s = 0; s < m.n_states(); ++s) v += b0[s] * vt.v(m.horizon, s);
        return v;
    }
    auto values = mdp_pomdp_action_values(m, vt, b0, m.horizon);
    return *std::max_element(values.begin(), values.end());
}

inline double pomdp_upper_bound(const TabularPomdp& m, BoundVariant variant) {
    return pomdp_upper_bound(m, solve_mdp(m, m.horizon), variant);
}

} // namespace infoact
