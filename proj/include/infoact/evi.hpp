#pragma once

#include "infoact/approx_solvers.hpp"
#include "infoact/exact_solver.hpp"
#include "infoact/mdp_solver.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

namespace infoact {

struct ObservationValue {
    ObsId obs;
    double prob;
    double value; ///< max_a Q*(b^o, a)
};

struct EviResult {
    Belief belief;
    ActionId action_channel;
    int t_remaining = 0;
    double evi = 0.0;
    double baseline = 0.0; ///< V*(b) at the same remaining horizon
    std::vector<ObservationValue> per_observation;
};

/// True when Z[a] is the same point mass for every state: the channel emits one fixed symbol.
inline bool emits_fixed_symbol(const TabularPomdp& m, ActionId a) {
    std::size_t symbol = m.n_obs();
    for (std::size_t s = 0; s < m.n_states(); ++s) {
        auto row = m.observation_row(a.index, s);
        std::size_t hit = m.n_obs();
        for (std::size_t o = 0; o < m.n_obs(); ++o)
            if (std::abs(row[o] - 1.0) <= kZeroMass) hit = o;
        if (hit == m.n_obs()) return false;
        if (symbol == m.n_obs()) symbol = hit;
        if (hit != symbol) return false;
    }
    return true;
}

/**
 * Expected value of information of action a's observation channel at b:
 *   E_{o ~ P(o|b)} [ max_a' Q*(b^o, a') ] - V*(b)
 * with both terms at remaining horizon t. The observation is read on the
 * current state and consumes no time.
 */
inline EviResult expected_value_of_information(ExactSolver& solver, const Belief& b, ActionId a, int t_remaining) {
    const auto& m = solver.model();
    if (emits_fixed_symbol(m, a))
        throw NotObservationBearing("action '" + m.actions[a.index] + "' always emits the same observation");
    EviResult r{b, a, t_remaining, 0.0, 0.0, {}};
    if (t_remaining < 1) return r;
    r.baseline = solver.v_star(b, t_remaining);
    double expected = 0.0;
    for (const auto& br : observation_channel(m, b, a)) {
        double v = solver.v_star(br.next, t_remaining);
        r.per_observation.push_back({br.obs, br.prob, v});
        expected += br.prob * v;
    }
    r.evi = expected - r.baseline;
    return r;
}

inline EviResult expected_value_of_information(const TabularPomdp& m, const Belief& b, ActionId a, int t_remaining,
                                               ExactOptions opts = {}) {
    ExactSolver solver(m, opts);
    return expected_value_of_information(solver, b, a, t_remaining);
}

/**
 * Replaces the max over actions after the observation with the plan that is
 * optimal at b itself. That plan's value is linear in the belief, so averaging
 * over o must give back V*(b) exactly. Returns the difference (should be 0).
 */
inline double fixed_plan_identity(ExactSolver& solver, const Belief& b, ActionId channel, int t_remaining) {
    const auto& m = solver.model();
    auto alpha = solver.plan_alpha(b, t_remaining);
    double mixed = 0.0;
    for (const auto& br : observation_channel(m, b, channel)) {
        double v = 0.0;
        for (std::size_t s = 0; s < m.n_states(); ++s) v += alpha[s] * br.next[s];
        mixed += br.prob * v;
    }
    return mixed - solver.v_star(b, t_remaining);
}

struct EviViolation {
    Belief belief;
    ActionId action;
    int t_remaining;
    double evi;
    double identity_residual;
    std::vector<double> observation_probs;
};

struct EviCheckReport {
    std::size_t beliefs = 0;
    std::size_t checks = 0;
    double min_evi = std::numeric_limits<double>::infinity();
    double max_identity_residual = 0.0;
    std::vector<EviViolation> violations;

    bool passed() const { return violations.empty(); }
};

/// Random belief reachable from b0 by uniformly random actions and sampled observations.
inline std::pair<Belief, int> sample_reachable_belief(const TabularPomdp& m, std::mt19937_64& rng) {
    Belief b = m.start();
    int depth = std::uniform_int_distribution<int>(0, m.horizon - 1)(rng);
    int t = m.horizon;
    for (int d = 0; d < depth && t > 1; ++d) {
        ActionId a(std::uniform_int_distribution<std::size_t>(0, m.n_actions() - 1)(rng));
        auto branches = continuation_branches(m, b, a);
        if (branches.empty()) break;
        std::vector<double> w;
        for (const auto& br : branches) w.push_back(br.prob);
        std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
        b = branches[pick(rng)].next;
        --t;
    }
    return {b, t};
}

/**
 * Numerical check that EVI >= 0 and that the fixed-plan replacement gives 0,
 * on `samples` sampled reachable beliefs and every observation-bearing action.
 */
inline EviCheckReport check_evi_nonneg(const TabularPomdp& m, int samples, std::uint64_t seed, ExactOptions opts = {}) {
    EviCheckReport rep;
    ExactSolver solver(m, opts);
    std::mt19937_64 rng(seed);
    for (int i = 0; i < samples; ++i) {
        auto [b, t] = sample_reachable_belief(m, rng);
        ++rep.beliefs;
        for (std::size_t a = 0; a < m.n_actions(); ++a) {
            if (emits_fixed_symbol(m, ActionId(a))) continue;
            auto r = expected_value_of_information(solver, b, ActionId(a), t);
            double identity = fixed_plan_identity(solver, b, ActionId(a), t);
            ++rep.checks;
            rep.min_evi = std::min(rep.min_evi, r.evi);
            rep.max_identity_residual = std::max(rep.max_identity_residual, std::abs(identity));
            if (r.evi < -kTolerance || std::abs(identity) > kTolerance) {
                EviViolation v{b, ActionId(a), t, r.evi, identity, {}};
                for (const auto& po : r.per_observation) v.observation_probs.push_back(po.prob);
                rep.violations.push_back(std::move(v));
            }
        }
    }
    return rep;
}

struct InformativeActionFinding {
    ActionId action;
    bool never_mdp_optimal = false;
    bool state_preserving = false;
    bool observation_bearing = false;
    bool qualifies = false;
    /// min over visited (t, s) of V - Q for this action; < 1e-6 flags a near-tie.
    double optimality_margin = 0.0;
    /// Whether the action is in some argmax set anywhere in the table, visited or not.
    bool in_global_union = false;
};

inline bool is_state_preserving(const TabularPomdp& m, ActionId a) {
    for (std::size_t s = 0; s < m.n_states(); ++s) {
        double kept = 0.0;
        const auto& label = m.projection_of(s);
        for (std::size_t s2 = 0; s2 < m.n_states(); ++s2)
            if (m.projection_of(s2) == label) kept += m.T(a.index, s, s2);
        if (kept < 1.0 - kTolerance) return false;
    }
    return true;
}

/// Z[a] differs between at least two states.
inline bool is_observation_bearing(const TabularPomdp& m, ActionId a) {
    auto first = m.observation_row(a.index, 0);
    for (std::size_t s = 1; s < m.n_states(); ++s) {
        auto row = m.observation_row(a.index, s);
        for (std::size_t o = 0; o < m.n_obs(); ++o)
            if (std::abs(row[o] - first[o]) > kTolerance) return true;
    }
    return false;
}

inline std::vector<std::size_t> support_of(const Belief& b) {
    std::vector<std::size_t> out;
    for (std::size_t s = 0; s < b.size(); ++s)
        if (b[s] > kZeroMass) out.push_back(s);
    return out;
}

/**
 * Flags informative actions using the MDP solution alone: never chosen by an
 * optimal MDP policy started from supp(b0), leaving the (projected) state
 * unchanged, and carrying state-dependent observations.
 */
inline std::vector<InformativeActionFinding> detect_informative_actions(const TabularPomdp& m, const ValueTable& vt) {
    auto support = support_of(m.start());
    auto used = reachable_optimal_action_union(m, vt, support);
    auto global = optimal_action_union(vt);
    std::vector<InformativeActionFinding> out;
    for (std::size_t a = 0; a < m.n_actions(); ++a) {
        InformativeActionFinding f;
        f.action = ActionId(a);
        f.never_mdp_optimal = !used.contains(ActionId(a));
        f.state_preserving = is_state_preserving(m, ActionId(a));
        f.observation_bearing = is_observation_bearing(m, ActionId(a));
        f.qualifies = f.never_mdp_optimal && f.state_preserving && f.observation_bearing;
        f.optimality_margin = reachable_optimality_margin(m, vt, support, ActionId(a));
        f.in_global_union = global.contains(ActionId(a));
        out.push_back(f);
    }
    return out;
}

inline std::vector<InformativeActionFinding> detect_informative_actions(const TabularPomdp& m) {
    return detect_informative_actions(m, solve_mdp(m, m.horizon));
}

struct SuboptimalityBound {
    enum class Status { holds, violated, vacuous };

    Belief belief;
    ActionId informative_action;
    int t_remaining = 0;
    double evi = 0.0;         ///< at t_remaining - 1
    double action_cost = 0.0; ///< R_B(b, a_I)
    double bound = 0.0;
    double v_star = 0.0;
    double policy_value = 0.0;
    double realized_gap = 0.0;
    Status status = Status::vacuous;
};

inline const char* to_string(SuboptimalityBound::Status s) {
    switch (s) {
    case SuboptimalityBound::Status::holds: return "holds";
    case SuboptimalityBound::Status::violated: return "violated";
    case SuboptimalityBound::Status::vacuous: return "vacuous";
    }
    return "?";
}

/**
 * Lower bound EVI + R_B(b, a_I) on how far the MDP-POMDP policy falls short of
 * V*(b), next to the realized gap. a_I spends one step, so EVI is taken at
 * t_remaining - 1. The caller is expected to pass a qualifying a_I.
 */
inline SuboptimalityBound suboptimality_bound(ExactSolver& solver, const PolicySpec& mdp_pomdp, const Belief& b,
                                              ActionId a_I, int t_remaining, EvalOptions eval = {}) {
    const auto& m = solver.model();
    SuboptimalityBound r;
    r.belief = b;
    r.informative_action = a_I;
    r.t_remaining = t_remaining;
    r.evi = t_remaining > 1 ? expected_value_of_information(solver, b, a_I, t_remaining - 1).evi : 0.0;
    r.action_cost = belief_reward(m, b, a_I);
    r.bound = r.evi + r.action_cost;
    r.v_star = solver.v_star(b, t_remaining);
    r.policy_value = evaluate_policy_exact(m, mdp_pomdp, b, t_remaining, eval);
    r.realized_gap = r.v_star - r.policy_value;
    if (r.bound <= kTolerance)
        r.status = SuboptimalityBound::Status::vacuous;
    else
        r.status = r.realized_gap >= r.bound - kTolerance ? SuboptimalityBound::Status::holds
                                                          : SuboptimalityBound::Status::violated;
    return r;
}

inline SuboptimalityBound suboptimality_bound(const TabularPomdp& m, const Belief& b, ActionId a_I, int t_remaining,
                                              TieRule tie_rule = TieRule::uniform) {
    ExactSolver solver(m);
    auto vt = std::make_shared<const ValueTable>(solve_mdp(m, m.horizon));
    auto policy = PolicySpec::mdp_pomdp(PolicyKind::hindsight, vt, tie_rule);
    return suboptimality_bound(solver, policy, b, a_I, t_remaining);
}

} // namespace infoact
