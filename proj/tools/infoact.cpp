// Command-line front end: solve, eval, analyze, lint, bench, dump.

#include "infoact/bench.hpp"
#include "infoact/infoact.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <memory>
#include <string>

using namespace infoact;
using nlohmann::json;

namespace {

struct Options {
    std::string problem;
    std::optional<int> horizon;
    std::string tie_rule = "uniform";
    std::string scope = "mdp-supported";
    std::uint64_t seed = 1;
    std::size_t node_cap = 1'000'000;
    bool corner_detour = false;
    std::string format = "text";
    double listen_accuracy = 1.0;
    std::string policy = "hindsight";
    bool policy_table = false;
    std::string suite = "all";
};

TieRule tie_rule_of(const Options& o) { return o.tie_rule == "lexicographic" ? TieRule::lexicographic : TieRule::uniform; }
ActionScope scope_of(const Options& o) {
    return o.scope == "unrestricted" ? ActionScope::unrestricted : ActionScope::mdp_supported;
}
bool machine(const Options& o) { return o.format == "machine"; }

std::vector<std::string> toggles(const Options& o) {
    std::vector<std::string> out;
    if (o.problem == "uav-grid")
        out.push_back(o.corner_detour ? "uav-grid semantics: corner-detour (corner entry costs 2, finding ends the episode)"
                                      : "uav-grid semantics: default (every move costs 1)");
    if (o.problem == "tiger") out.push_back("tiger listen accuracy: " + fixed9(o.listen_accuracy));
    if (o.horizon) out.push_back("horizon overridden to " + std::to_string(*o.horizon));
    return out;
}

TabularPomdp load(const Options& o) {
    TabularPomdp m;
    if (o.problem == "tiger") {
        TigerParams p;
        p.listen_accuracy = o.listen_accuracy;
        if (o.horizon) p.horizon = *o.horizon;
        return build_tiger(p);
    }
    if (o.problem == "uav-grid") {
        UavGridParams p;
        p.corner_detour = o.corner_detour;
        m = build_uav_grid(p);
    } else if (o.problem == "random") {
        m = random_pomdp(o.seed, 3, 3, 3, 3);
    } else {
        m = load_problem(o.problem);
    }
    if (o.horizon) {
        if (*o.horizon < 1) throw ValidationError("horizon must be >= 1");
        m.horizon = *o.horizon;
    }
    return m;
}

std::string belief_text(const TabularPomdp& m, const Belief& b) {
    std::string out = "{";
    bool first = true;
    for (std::size_t s = 0; s < b.size(); ++s) {
        if (b[s] <= kZeroMass) continue;
        out += (first ? "" : ", ") + m.states[s] + ": " + fixed9(b[s]);
        first = false;
    }
    return out + "}";
}

int cmd_solve(const Options& o) {
    auto m = load(o);
    ExactSolver solver(m, {o.node_cap, true});
    auto b0 = m.start();
    auto root = solver.solve(b0, m.horizon);
    json rec{{"record", "solve"}, {"problem", o.problem}, {"horizon", m.horizon}, {"v_star", root.value}};
    json q;
    for (std::size_t a = 0; a < m.n_actions(); ++a) q[m.actions[a]] = root.q[a];
    rec["q_star"] = q;
    std::vector<std::string> best;
    for (auto a : root.argmax) best.push_back(m.actions[a.index]);
    rec["argmax"] = best;
    std::vector<std::pair<PolicyNode, CacheEntry>> rows;
    if (o.policy_table) {
        auto policy = solver.extract_policy(tie_rule_of(o));
        walk_policy_tree(m, policy, b0, m.horizon,
                         [&](const PolicyNode& n) { rows.emplace_back(n, solver.solve(n.belief, n.t_remaining)); },
                         {o.node_cap});
    }
    if (machine(o)) {
        json table = json::array();
        for (const auto& [n, e] : rows) {
            std::vector<std::string> acts;
            for (auto a : e.argmax) acts.push_back(m.actions[a.index]);
            table.push_back({{"t_remaining", n.t_remaining}, {"belief", belief_json(n.belief)}, {"value", e.value},
                             {"argmax", acts}});
        }
        if (o.policy_table) rec["policy_table"] = table;
        std::cout << rec.dump() << "\n";
        return 0;
    }
    std::cout << "V*(b0) = " << fixed9(root.value) << "  (horizon " << m.horizon << ")\n";
    for (std::size_t a = 0; a < m.n_actions(); ++a)
        std::cout << "Q*(b0, " << m.actions[a] << ") = " << fixed9(root.q[a]) << "\n";
    if (o.policy_table) {
        std::cout << "optimal policy over reachable beliefs:\n";
        for (const auto& [n, e] : rows) {
            std::cout << "  t=" << n.t_remaining << " " << belief_text(m, n.belief) << " -> ";
            for (std::size_t i = 0; i < e.argmax.size(); ++i)
                std::cout << (i ? " | " : "") << m.actions[e.argmax[i].index];
            std::cout << "  V = " << fixed9(e.value) << "\n";
        }
    }
    return 0;
}

int cmd_eval(const Options& o) {
    auto m = load(o);
    double value = 0.0;
    if (o.policy == "exact") {
        ExactSolver solver(m, {o.node_cap, true});
        value = evaluate_policy_exact(m, solver.extract_policy(tie_rule_of(o)), EvalOptions{o.node_cap});
    } else {
        auto vt = std::make_shared<const ValueTable>(solve_mdp(m, m.horizon));
        auto kind = o.policy == "qmdp" ? PolicyKind::qmdp : PolicyKind::hindsight;
        value = evaluate_policy_exact(m, PolicySpec::mdp_pomdp(kind, vt, tie_rule_of(o), scope_of(o)),
                                      EvalOptions{o.node_cap});
    }
    if (machine(o)) {
        json rec{{"record", "eval"}, {"problem", o.problem}, {"policy", o.policy},  {"tie_rule", o.tie_rule},
                 {"scope", o.scope}, {"horizon", m.horizon},  {"value", value}};
        std::cout << rec.dump() << "\n";
    } else {
        std::cout << o.policy << " policy value = " << fixed9(value) << "  (tie rule " << o.tie_rule << ", scope "
                  << o.scope << ", horizon " << m.horizon << ")\n";
    }
    return 0;
}

AnalysisOptions analysis_options(const Options& o) {
    AnalysisOptions a;
    a.tie_rule = tie_rule_of(o);
    a.scope = scope_of(o);
    a.node_cap = o.node_cap;
    a.problem_name = o.problem;
    a.notes = toggles(o);
    return a;
}

int cmd_report(const Options& o, bool full) {
    auto m = load(o);
    auto r = full ? analyze(m, analysis_options(o)) : lint(m, analysis_options(o));
    if (machine(o))
        std::cout << to_json(r).dump() << "\n";
    else
        std::cout << to_text(r);
    return 0;
}

int cmd_bench(const Options& o) {
    auto results = bench::run(bench::parse_suite(o.suite));
    if (machine(o))
        std::cout << bench::to_json(results).dump() << "\n";
    else
        std::cout << bench::format_text(results);
    return bench::all_passed(results) ? 0 : static_cast<int>(ExitCode::assertion_failed);
}

int cmd_dump(const Options& o) {
    std::cout << serialize_problem(load(o));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Informative-action analysis for finite-horizon POMDPs"};
    app.require_subcommand(1);
    Options o;

    auto add_problem = [&](CLI::App* sub) {
        sub->add_option("problem", o.problem, "problem file, or built-in: tiger, uav-grid, random")->required();
        sub->add_option("--horizon", o.horizon, "override the horizon");
        sub->add_option("--seed", o.seed, "seed for the built-in random model");
        sub->add_option("--node-cap", o.node_cap, "belief-tree node cap");
        sub->add_flag("--corner-detour", o.corner_detour, "uav-grid reference semantics");
        sub->add_option("--listen-accuracy", o.listen_accuracy, "tiger listen accuracy")->check(CLI::Range(0.5, 1.0));
        sub->add_option("--format", o.format)->check(CLI::IsMember({"text", "machine"}));
    };
    auto add_rules = [&](CLI::App* sub) {
        sub->add_option("--tie-rule", o.tie_rule)->check(CLI::IsMember({"lexicographic", "uniform"}));
        sub->add_option("--scope", o.scope, "MDP-POMDP action scope")
            ->check(CLI::IsMember({"mdp-supported", "unrestricted"}));
    };

    auto* solve = app.add_subcommand("solve", "exact V*(b0) and Q*(b0, .)");
    add_problem(solve);
    solve->add_option("--tie-rule", o.tie_rule)->check(CLI::IsMember({"lexicographic", "uniform"}));
    solve->add_flag("--policy-table", o.policy_table, "print the optimal policy over reachable beliefs");

    auto* eval = app.add_subcommand("eval", "exact value of a named policy");
    add_problem(eval);
    add_rules(eval);
    eval->add_option("--policy", o.policy)->check(CLI::IsMember({"qmdp", "hindsight", "exact"}));

    auto* analyze_cmd = app.add_subcommand("analyze", "full report, including the exact solve");
    add_problem(analyze_cmd);
    add_rules(analyze_cmd);

    auto* lint_cmd = app.add_subcommand("lint", "MDP-only suitability check");
    add_problem(lint_cmd);
    add_rules(lint_cmd);

    auto* bench_cmd = app.add_subcommand("bench", "reproduction suite");
    bench_cmd->add_option("--suite", o.suite)->check(CLI::IsMember({"all", "tiger", "uav", "theory"}));
    bench_cmd->add_option("--format", o.format)->check(CLI::IsMember({"text", "machine"}));

    auto* dump = app.add_subcommand("dump", "write the model in the problem file format");
    add_problem(dump);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : static_cast<int>(ExitCode::usage);
    }

    try {
        if (*solve) return cmd_solve(o);
        if (*eval) return cmd_eval(o);
        if (*analyze_cmd) return cmd_report(o, true);
        if (*lint_cmd) return cmd_report(o, false);
        if (*bench_cmd) return cmd_bench(o);
        if (*dump) return cmd_dump(o);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.exit_code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::usage);
    }
    return static_cast<int>(ExitCode::usage);
}
