#pragma once

#include "infoact/approx_solvers.hpp"
#include "infoact/evi.hpp"
#include "infoact/exact_solver.hpp"
#include "infoact/mdp_solver.hpp"

#include <json.hpp>

#include <cstdio>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace infoact {

enum class Verdict { suitable, unsuitable, inconclusive };

inline const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::suitable: return "suitable";
    case Verdict::unsuitable: return "unsuitable";
    case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

struct AnalysisOptions {
    TieRule tie_rule = TieRule::uniform;
    ActionScope scope = ActionScope::mdp_supported;
    std::size_t node_cap = 1'000'000;
    std::string problem_name = "problem";
    std::vector<std::string> notes;
};

struct MdpDigestRow {
    std::string state;
    double value;
    std::vector<std::string> optimal_actions;
};

struct AnalysisReport {
    std::string problem;
    std::size_t n_states = 0, n_actions = 0, n_obs = 0;
    int horizon = 0;
    bool lint_mode = false;
    bool exact_solver_invoked = false;

    std::vector<MdpDigestRow> mdp_digest; // start-support states at full horizon
    double qmdp_bound = 0.0;
    double hindsight_bound = 0.0;

    std::optional<double> v_star;
    std::vector<double> q_star; // at b0
    std::optional<double> mdp_pomdp_value;
    std::optional<double> mdp_pomdp_value_unrestricted;

    std::vector<InformativeActionFinding> findings;
    std::vector<EviResult> evi_table;
    std::vector<SuboptimalityBound> bounds;
    std::size_t bound_nodes_checked = 0;

    Verdict verdict = Verdict::suitable;
    std::vector<std::string> notes;
    std::vector<std::string> action_names;
    std::vector<std::string> obs_names;

    std::vector<std::string> qualifying_actions() const {
        std::vector<std::string> out;
        for (const auto& f : findings)
            if (f.qualifies) out.push_back(action_names[f.action.index]);
        return out;
    }
};

namespace detail {

inline AnalysisReport report_skeleton(const TabularPomdp& m, const ValueTable& vt, const AnalysisOptions& opt) {
    AnalysisReport r;
    r.problem = opt.problem_name;
    r.n_states = m.n_states();
    r.n_actions = m.n_actions();
    r.n_obs = m.n_obs();
    r.horizon = m.horizon;
    r.action_names = m.actions;
    r.obs_names = m.observations;
    auto b0 = m.start();
    for (auto s : support_of(b0)) {
        MdpDigestRow row{m.states[s], vt.v(m.horizon, s), {}};
        for (auto a : vt.opt_actions(m.horizon, s)) row.optimal_actions.push_back(m.actions[a.index]);
        r.mdp_digest.push_back(std::move(row));
    }
    r.qmdp_bound = pomdp_upper_bound(m, vt, BoundVariant::qmdp);
    r.hindsight_bound = pomdp_upper_bound(m, vt, BoundVariant::hindsight);
    r.findings = detect_informative_actions(m, vt);
    r.notes.push_back(std::string("tie rule: ") + to_string(opt.tie_rule));
    r.notes.push_back(std::string("MDP-POMDP action scope: ") + to_string(opt.scope));
    r.notes.push_back("horizon semantics: remaining horizon; the MDP-POMDP rule re-plans every step with Q at the "
                      "remaining horizon");
    r.notes.push_back("informative-action test: never in an MDP argmax set along optimal play from supp(b0); "
                      "identity transition on the state projection; state-dependent observations");
    for (const auto& f : r.findings) {
        if (f.never_mdp_optimal && f.optimality_margin < 1e-6)
            r.notes.push_back("near-tie: '" + m.actions[f.action.index] + "' is within 1e-6 of MDP-optimal");
        if (f.qualifies && f.in_global_union)
            r.notes.push_back("'" + m.actions[f.action.index] +
                              "' is tied-optimal only in states no optimal MDP policy visits from b0");
    }
    for (const auto& n : opt.notes) r.notes.push_back(n);
    return r;
}

} // namespace detail

/**
 * Suitability check from the MDP solution alone. Never builds an
 * OptimalCache; a qualifying informative action makes the verdict
 * inconclusive since its bound needs the POMDP solve.
 */
inline AnalysisReport lint(const TabularPomdp& m, const AnalysisOptions& opt = {}) {
    auto before = OptimalCache::constructed_count();
    auto vt = solve_mdp(m, m.horizon);
    auto r = detail::report_skeleton(m, vt, opt);
    r.lint_mode = true;
    r.verdict = r.qualifying_actions().empty() ? Verdict::suitable : Verdict::inconclusive;
    r.exact_solver_invoked = OptimalCache::constructed_count() != before;
    if (r.exact_solver_invoked) throw AssertionFailure("lint constructed an optimal-value cache");
    return r;
}

/// Full report: exact solve, MDP-POMDP policy value, EVI and bounds.
inline AnalysisReport analyze(const TabularPomdp& m, const AnalysisOptions& opt = {}) {
    auto vt = std::make_shared<const ValueTable>(solve_mdp(m, m.horizon));
    auto r = detail::report_skeleton(m, *vt, opt);
    r.exact_solver_invoked = true;
    const auto b0 = m.start();
    const int T = m.horizon;
    ExactSolver solver(m, {opt.node_cap, true});
    EvalOptions eval{opt.node_cap};

    auto root = solver.solve(b0, T);
    r.v_star = root.value;
    r.q_star = root.q;
    auto policy = PolicySpec::mdp_pomdp(PolicyKind::hindsight, vt, opt.tie_rule, opt.scope);
    r.mdp_pomdp_value = evaluate_policy_exact(m, policy, b0, T, eval);
    if (opt.scope == ActionScope::mdp_supported) {
        auto literal = PolicySpec::mdp_pomdp(PolicyKind::hindsight, vt, opt.tie_rule, ActionScope::unrestricted);
        r.mdp_pomdp_value_unrestricted = evaluate_policy_exact(m, literal, b0, T, eval);
    }

    for (std::size_t a = 0; a < m.n_actions(); ++a) {
        if (!is_observation_bearing(m, ActionId(a))) continue;
        r.evi_table.push_back(expected_value_of_information(solver, b0, ActionId(a), T));
        if (T > 1) r.evi_table.push_back(expected_value_of_information(solver, b0, ActionId(a), T - 1));
    }

    bool unsuitable = false;
    for (const auto& f : r.findings) {
        if (!f.qualifies) continue;
        // the root row is always kept; deeper beliefs only when the bound is informative
        walk_policy_tree(
            m, policy, b0, T,
            [&](const PolicyNode& node) {
                auto sb = suboptimality_bound(solver, policy, node.belief, f.action, node.t_remaining, eval);
                ++r.bound_nodes_checked;
                if (sb.bound > kTolerance) unsuitable = true;
                if (node.depth == 0 || sb.bound > kTolerance) r.bounds.push_back(std::move(sb));
            },
            eval);
    }
    r.verdict = unsuitable ? Verdict::unsuitable : Verdict::suitable;
    return r;
}

inline std::string fixed9(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9f", v);
    return buf;
}

inline nlohmann::json belief_json(const Belief& b) {
    nlohmann::json j = nlohmann::json::array();
    for (double p : b.probs()) j.push_back(p);
    return j;
}

/// Machine-readable record; self-contained, one JSON object per report.
inline nlohmann::json to_json(const AnalysisReport& r) {
    using nlohmann::json;
    json j;
    j["record"] = "analysis";
    j["problem"] = r.problem;
    j["mode"] = r.lint_mode ? "lint" : "analyze";
    j["model"] = {{"states", r.n_states}, {"actions", r.n_actions}, {"observations", r.n_obs}, {"horizon", r.horizon}};
    j["exact_solver_invoked"] = r.exact_solver_invoked;
    json digest = json::array();
    for (const auto& row : r.mdp_digest)
        digest.push_back({{"state", row.state}, {"value", row.value}, {"optimal_actions", row.optimal_actions}});
    j["mdp_start_values"] = digest;
    j["upper_bounds"] = {{"qmdp", r.qmdp_bound}, {"hindsight", r.hindsight_bound}};
    if (r.v_star) j["v_star"] = *r.v_star;
    if (!r.q_star.empty()) {
        json q;
        for (std::size_t a = 0; a < r.q_star.size(); ++a) q[r.action_names[a]] = r.q_star[a];
        j["q_star"] = q;
    }
    if (r.mdp_pomdp_value) j["mdp_pomdp_value"] = *r.mdp_pomdp_value;
    if (r.mdp_pomdp_value_unrestricted) j["mdp_pomdp_value_unrestricted"] = *r.mdp_pomdp_value_unrestricted;
    json findings = json::array();
    for (const auto& f : r.findings)
        findings.push_back({{"action", r.action_names[f.action.index]},
                            {"never_mdp_optimal", f.never_mdp_optimal},
                            {"state_preserving", f.state_preserving},
                            {"observation_bearing", f.observation_bearing},
                            {"qualifies", f.qualifies},
                            {"optimality_margin", f.optimality_margin},
                            {"in_global_argmax_union", f.in_global_union}});
    j["informative_actions"] = findings;
    json evi = json::array();
    for (const auto& e : r.evi_table) {
        json per = json::array();
        for (const auto& po : e.per_observation)
            per.push_back({{"observation", r.obs_names[po.obs.index]}, {"prob", po.prob}, {"value", po.value}});
        evi.push_back({{"channel", r.action_names[e.action_channel.index]},
                       {"t_remaining", e.t_remaining},
                       {"evi", e.evi},
                       {"baseline", e.baseline},
                       {"per_observation", per}});
    }
    j["evi"] = evi;
    json bounds = json::array();
    for (const auto& b : r.bounds)
        bounds.push_back({{"informative_action", r.action_names[b.informative_action.index]},
                          {"belief", belief_json(b.belief)},
                          {"t_remaining", b.t_remaining},
                          {"evi", b.evi},
                          {"action_cost", b.action_cost},
                          {"bound", b.bound},
                          {"v_star", b.v_star},
                          {"policy_value", b.policy_value},
                          {"realized_gap", b.realized_gap},
                          {"status", to_string(b.status)}});
    j["suboptimality_bounds"] = bounds;
    j["bound_nodes_checked"] = r.bound_nodes_checked;
    j["verdict"] = to_string(r.verdict);
    j["notes"] = r.notes;
    return j;
}

inline std::string to_text(const AnalysisReport& r) {
    std::ostringstream out;
    out << (r.lint_mode ? "lint" : "analysis") << " report: " << r.problem << "\n";
    out << "  model: " << r.n_states << " states, " << r.n_actions << " actions, " << r.n_obs
        << " observations, horizon " << r.horizon << "\n";
    out << "  MDP values at start-support states (t = " << r.horizon << "):\n";
    std::size_t shown = 0;
    for (const auto& row : r.mdp_digest) {
        if (++shown > 16) {
            out << "    ... " << r.mdp_digest.size() - 16 << " more\n";
            break;
        }
        out << "    " << row.state << "  V = " << fixed9(row.value) << "  argmax {";
        for (std::size_t i = 0; i < row.optimal_actions.size(); ++i) out << (i ? ", " : "") << row.optimal_actions[i];
        out << "}\n";
    }
    out << "  upper bound (qmdp):       " << fixed9(r.qmdp_bound) << "\n";
    out << "  upper bound (hindsight):  " << fixed9(r.hindsight_bound) << "\n";
    if (r.v_star) out << "  V*(b0):                   " << fixed9(*r.v_star) << "\n";
    for (std::size_t a = 0; a < r.q_star.size(); ++a)
        out << "    Q*(b0, " << r.action_names[a] << ") = " << fixed9(r.q_star[a]) << "\n";
    if (r.mdp_pomdp_value) out << "  MDP-POMDP policy value:   " << fixed9(*r.mdp_pomdp_value) << "\n";
    if (r.mdp_pomdp_value_unrestricted)
        out << "  (unrestricted rule:       " << fixed9(*r.mdp_pomdp_value_unrestricted) << ")\n";
    out << "  informative actions:\n";
    for (const auto& f : r.findings)
        out << "    " << r.action_names[f.action.index] << ": never-MDP-optimal=" << f.never_mdp_optimal
            << " state-preserving=" << f.state_preserving << " observation-bearing=" << f.observation_bearing
            << (f.qualifies ? "  -> INFORMATIVE" : "") << "\n";
    if (!r.evi_table.empty()) out << "  EVI at b0:\n";
    for (const auto& e : r.evi_table)
        out << "    channel " << r.action_names[e.action_channel.index] << ", t = " << e.t_remaining
            << ": EVI = " << fixed9(e.evi) << "\n";
    if (!r.bounds.empty())
        out << "  sub-optimality bounds (" << r.bound_nodes_checked << " MDP-POMDP beliefs checked, "
            << r.bounds.size() << " listed):\n";
    for (const auto& b : r.bounds)
        out << "    a_I = " << r.action_names[b.informative_action.index] << ", t = " << b.t_remaining
            << ": bound = " << fixed9(b.evi) << " + (" << fixed9(b.action_cost) << ") = " << fixed9(b.bound)
            << ", realized gap = " << fixed9(b.realized_gap) << " [" << to_string(b.status) << "]\n";
    out << "  verdict: " << to_string(r.verdict) << "\n";
    for (const auto& n : r.notes) out << "  note: " << n << "\n";
    return out.str();
}

} // namespace infoact
