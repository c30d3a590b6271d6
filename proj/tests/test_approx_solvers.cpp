#include "infoact/approx_solvers.hpp"
#include "infoact/exact_solver.hpp"
#include "infoact/problems.hpp"

#include <gtest/gtest.h>

using namespace infoact;

namespace {

std::shared_ptr<const ValueTable> table_for(const TabularPomdp& m) {
    return std::make_shared<const ValueTable>(solve_mdp(m, m.horizon));
}

} // namespace

TEST(MdpPomdpRule, TigerActionValues) {
    auto m = build_tiger();
    auto vt = table_for(m);
    auto v = mdp_pomdp_action_values(m, *vt, m.start(), 2);
    EXPECT_DOUBLE_EQ(v[0], 50.0);
    EXPECT_DOUBLE_EQ(v[1], 50.0);
    EXPECT_DOUBLE_EQ(v[2], 99.0);
    EXPECT_THROW(mdp_pomdp_action_values(m, *vt, m.start(), 3), Error);
}

TEST(MdpPomdpRule, ScopeDecidesWhetherListenIsGreedy) {
    auto m = build_tiger();
    auto vt = table_for(m);
    auto restricted = mdp_pomdp_greedy_set(m, *vt, m.start(), 2, ActionScope::mdp_supported);
    EXPECT_EQ(restricted, (std::vector<ActionId>{ActionId(0), ActionId(1)}));
    auto literal = mdp_pomdp_greedy_set(m, *vt, m.start(), 2, ActionScope::unrestricted);
    EXPECT_EQ(literal, std::vector<ActionId>{ActionId(2)});
}

TEST(PolicyEvaluation, TigerValues) {
    auto m = build_tiger();
    auto vt = table_for(m);
    for (auto kind : {PolicyKind::qmdp, PolicyKind::hindsight}) {
        EXPECT_DOUBLE_EQ(evaluate_policy_exact(m, PolicySpec::mdp_pomdp(kind, vt, TieRule::uniform)), 50.0);
        EXPECT_DOUBLE_EQ(evaluate_policy_exact(m, PolicySpec::mdp_pomdp(kind, vt, TieRule::lexicographic)), 50.0);
        EXPECT_DOUBLE_EQ(evaluate_policy_exact(
                             m, PolicySpec::mdp_pomdp(kind, vt, TieRule::uniform, ActionScope::unrestricted)),
                         99.0);
    }
}

TEST(PolicyEvaluation, KnownStateMatchesMdp) {
    auto m = build_tiger();
    auto vt = table_for(m);
    auto policy = PolicySpec::mdp_pomdp(PolicyKind::hindsight, vt);
    EXPECT_DOUBLE_EQ(evaluate_policy_exact(m, policy, Belief::point(2, StateId(0)), 2), 100.0);
}

TEST(PolicyEvaluation, UavPointPriorCollapsesToMdp) {
    for (int car : {2, 9}) {
        UavGridParams p;
        p.car_prior.assign(9, 0.0);
        p.car_prior[car - 1] = 1.0;
        auto m = build_uav_grid(p);
        auto vt = table_for(m);
        double mdp = vt->v(m.horizon, *uav_start_state(m, car));
        EXPECT_NEAR(evaluate_policy_exact(m, PolicySpec::mdp_pomdp(PolicyKind::hindsight, vt)), mdp, 1e-9);
        EXPECT_NEAR(v_star(m, m.start(), m.horizon), mdp, 1e-9);
    }
}

TEST(PolicyEvaluation, NodeCap) {
    auto m = build_uav_grid();
    auto policy = PolicySpec::mdp_pomdp(PolicyKind::hindsight, table_for(m));
    EXPECT_THROW(evaluate_policy_exact(m, policy, EvalOptions{3}), TreeBudgetExceeded);
}

TEST(PolicySpec, TableMustCoverReachableBeliefs) {
    auto m = build_tiger();
    auto empty = std::make_shared<const PolicyTable>();
    auto p = PolicySpec::from_table(PolicyKind::fixed_table, empty);
    EXPECT_THROW(evaluate_policy_exact(m, p), Error);
    EXPECT_THROW(PolicySpec::from_table(PolicyKind::qmdp, empty), Error);
    EXPECT_THROW(PolicySpec::mdp_pomdp(PolicyKind::exact, table_for(m)), Error);
}

TEST(PolicySpec, FixedTableListenThenOpen) {
    auto m = build_tiger();
    auto table = std::make_shared<PolicyTable>();
    table->emplace(BeliefKey(m.start(), 2), std::vector<ActionId>{ActionId(2)});
    table->emplace(BeliefKey(Belief::point(2, StateId(0)), 1), std::vector<ActionId>{ActionId(1)});
    table->emplace(BeliefKey(Belief::point(2, StateId(1)), 1), std::vector<ActionId>{ActionId(0)});
    auto p = PolicySpec::from_table(PolicyKind::fixed_table, table);
    EXPECT_DOUBLE_EQ(evaluate_policy_exact(m, p), 99.0);
}

TEST(PolicyTree, TigerHasOneNode) {
    auto m = build_tiger();
    auto policy = PolicySpec::mdp_pomdp(PolicyKind::hindsight, table_for(m));
    int nodes = 0;
    walk_policy_tree(m, policy, m.start(), 2, [&](const PolicyNode& n) {
        ++nodes;
        EXPECT_EQ(n.executed.size(), 2u);
        EXPECT_EQ(n.depth, 0);
    });
    EXPECT_EQ(nodes, 1);
}

TEST(PolicyTree, LexicographicExecutesOneAction) {
    auto m = build_tiger();
    auto policy = PolicySpec::mdp_pomdp(PolicyKind::hindsight, table_for(m), TieRule::lexicographic);
    EXPECT_EQ(policy.executed(m, m.start(), 2), std::vector<ActionId>{ActionId(0)});
}

TEST(UpperBounds, Tiger) {
    auto m = build_tiger();
    EXPECT_DOUBLE_EQ(pomdp_upper_bound(m, BoundVariant::qmdp), 99.0);
    EXPECT_DOUBLE_EQ(pomdp_upper_bound(m, BoundVariant::hindsight), 100.0);
}

TEST(UpperBounds, ChainOnRandomModels) {
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        auto m = random_pomdp(seed, 1 + seed % 4, 1 + (seed / 4) % 4, 1 + (seed / 16) % 4, 1 + seed % 3);
        auto vt = solve_mdp(m, m.horizon);
        double vs = v_star(m, m.start(), m.horizon);
        double q = pomdp_upper_bound(m, vt, BoundVariant::qmdp);
        double h = pomdp_upper_bound(m, vt, BoundVariant::hindsight);
        EXPECT_LE(vs, q + 1e-9) << "seed " << seed;
        EXPECT_LE(q, h + 1e-9) << "seed " << seed;
    }
}

TEST(UpperBounds, PolicyValuesNeverExceedOptimum) {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        auto m = random_pomdp(seed, 3, 3, 2, 3);
        auto vt = table_for(m);
        double vs = v_star(m, m.start(), m.horizon);
        for (auto scope : {ActionScope::mdp_supported, ActionScope::unrestricted})
            for (auto tie : {TieRule::uniform, TieRule::lexicographic})
                EXPECT_LE(evaluate_policy_exact(m, PolicySpec::mdp_pomdp(PolicyKind::qmdp, vt, tie, scope)), vs + 1e-9);
    }
}
