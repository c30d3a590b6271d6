#include "infoact/evi.hpp"
#include "infoact/problems.hpp"

#include <gtest/gtest.h>

using namespace infoact;

TEST(Evi, TigerListenChannel) {
    auto m = build_tiger();
    auto listen = ActionId(2);
    auto r1 = expected_value_of_information(m, m.start(), listen, 1);
    EXPECT_DOUBLE_EQ(r1.evi, 50.0);
    EXPECT_DOUBLE_EQ(r1.baseline, 50.0);
    ASSERT_EQ(r1.per_observation.size(), 2u);
    EXPECT_DOUBLE_EQ(r1.per_observation[0].prob, 0.5);
    EXPECT_DOUBLE_EQ(r1.per_observation[0].value, 100.0);
    EXPECT_DOUBLE_EQ(expected_value_of_information(m, m.start(), listen, 2).evi, 1.0);
    EXPECT_DOUBLE_EQ(expected_value_of_information(m, m.start(), listen, 0).evi, 0.0);
}

TEST(Evi, NoisyListenIsWorthLess) {
    TigerParams p;
    p.listen_accuracy = 0.85;
    auto m = build_tiger(p);
    // either door after hearing: 0.85 * 100 + 0.15 * 0
    EXPECT_NEAR(expected_value_of_information(m, m.start(), ActionId(2), 1).evi, 35.0, 1e-9);
}

TEST(Evi, PointMassAndUninformativeChannelsAreZero) {
    auto m = build_tiger();
    EXPECT_DOUBLE_EQ(expected_value_of_information(m, Belief::point(2, StateId(0)), ActionId(2), 2).evi, 0.0);
    // doors emit a fair coin whatever the state
    EXPECT_DOUBLE_EQ(expected_value_of_information(m, m.start(), ActionId(0), 2).evi, 0.0);
}

TEST(Evi, FixedSymbolChannelIsRejected) {
    TabularPomdp m({"a", "b"}, {"wait"}, {"beep", "none"}, 1);
    for (std::size_t s = 0; s < 2; ++s) {
        m.T(0, s, s) = 1.0;
        m.Z(0, s, 0) = 1.0;
    }
    EXPECT_TRUE(emits_fixed_symbol(m, ActionId(0)));
    EXPECT_FALSE(is_observation_bearing(m, ActionId(0)));
    EXPECT_THROW(expected_value_of_information(m, m.start(), ActionId(0), 1), NotObservationBearing);
    EXPECT_FALSE(emits_fixed_symbol(build_tiger(), ActionId(0)));
}

TEST(Evi, FixedPlanIdentityIsZero) {
    auto m = build_tiger();
    ExactSolver solver(m);
    for (int t : {1, 2}) EXPECT_NEAR(fixed_plan_identity(solver, m.start(), ActionId(2), t), 0.0, 1e-12);
}

TEST(Evi, NonNegativeOnTigerAndUav) {
    TigerParams p;
    p.listen_accuracy = 0.7;
    p.horizon = 4;
    auto tiger = check_evi_nonneg(build_tiger(p), 30, 1);
    EXPECT_TRUE(tiger.passed());
    EXPECT_GT(tiger.checks, 0u);
    auto uav = check_evi_nonneg(build_uav_grid(), 10, 2);
    EXPECT_TRUE(uav.passed());
    EXPECT_GE(uav.min_evi, -1e-9);
    EXPECT_LE(uav.max_identity_residual, 1e-9);
}

TEST(Evi, NonNegativeOnRandomModels) {
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        auto m = random_pomdp(seed, 1 + seed % 4, 1 + (seed / 4) % 3, 2 + seed % 3, 1 + seed % 3);
        auto rep = check_evi_nonneg(m, 5, seed);
        EXPECT_TRUE(rep.passed()) << "seed " << seed << " min " << rep.min_evi;
        EXPECT_EQ(rep.beliefs, 5u);
    }
}

TEST(Detection, TigerFlagsListen) {
    auto f = detect_informative_actions(build_tiger());
    ASSERT_EQ(f.size(), 3u);
    EXPECT_FALSE(f[0].qualifies);
    EXPECT_FALSE(f[0].observation_bearing);
    EXPECT_FALSE(f[1].never_mdp_optimal);
    EXPECT_TRUE(f[2].qualifies);
    EXPECT_TRUE(f[2].state_preserving);
    EXPECT_DOUBLE_EQ(f[2].optimality_margin, 1.0);
    EXPECT_FALSE(f[2].in_global_union);
}

TEST(Detection, UavFlagsUpInBothSemantics) {
    for (bool detour : {false, true}) {
        UavGridParams p;
        p.corner_detour = detour;
        auto f = detect_informative_actions(build_uav_grid(p));
        for (std::size_t a = 0; a < 4; ++a) {
            EXPECT_FALSE(f[a].qualifies);
            EXPECT_FALSE(f[a].state_preserving);
        }
        EXPECT_TRUE(f[uav::up].qualifies) << "detour " << detour;
    }
}

TEST(Detection, MdpOptimalSensingActionDoesNotQualify) {
    // listening pays, so the MDP takes it and it is no longer informative as an informative action
    TigerParams p;
    p.listen_cost = 200.0;
    auto f = detect_informative_actions(build_tiger(p));
    EXPECT_FALSE(f[2].never_mdp_optimal);
    EXPECT_FALSE(f[2].qualifies);
}

TEST(Detection, ProjectionDecidesStatePreservation) {
    auto m = build_uav_grid();
    EXPECT_TRUE(is_state_preserving(m, ActionId(uav::up)));
    m.projection.clear();
    EXPECT_FALSE(is_state_preserving(m, ActionId(uav::up)));
}

TEST(SuboptimalityBound, TigerEquality) {
    auto m = build_tiger();
    auto sb = suboptimality_bound(m, m.start(), ActionId(2), 2);
    EXPECT_DOUBLE_EQ(sb.evi, 50.0);
    EXPECT_DOUBLE_EQ(sb.action_cost, -1.0);
    EXPECT_DOUBLE_EQ(sb.bound, 49.0);
    EXPECT_DOUBLE_EQ(sb.v_star, 99.0);
    EXPECT_DOUBLE_EQ(sb.policy_value, 50.0);
    EXPECT_DOUBLE_EQ(sb.realized_gap, 49.0);
    EXPECT_EQ(sb.status, SuboptimalityBound::Status::holds);
}

TEST(SuboptimalityBound, WorthlessChannelIsVacuous) {
    TigerParams p;
    p.listen_accuracy = 0.5;
    auto m = build_tiger(p);
    auto sb = suboptimality_bound(m, m.start(), ActionId(2), 2);
    EXPECT_DOUBLE_EQ(sb.evi, 0.0);
    EXPECT_DOUBLE_EQ(sb.bound, -1.0);
    EXPECT_EQ(sb.status, SuboptimalityBound::Status::vacuous);
}

TEST(SuboptimalityBound, UavStartBelief) {
    auto m = build_uav_grid();
    auto sb = suboptimality_bound(m, m.start(), ActionId(uav::up), m.horizon);
    EXPECT_NEAR(sb.evi, 2.0, 1e-9);
    EXPECT_NEAR(sb.bound, 0.0, 1e-9);
    EXPECT_NEAR(sb.realized_gap, 96.0 - 1595.0 / 24.0, 1e-9);
    EXPECT_EQ(sb.status, SuboptimalityBound::Status::vacuous);
}

// The bound compares Q*(b, a_I) with V*(b); it says nothing about beliefs where
// the MDP-POMDP policy already plays optimally. Such beliefs exist in the grid.
TEST(SuboptimalityBound, NotUniversalAlongThePolicyTree) {
    auto m = build_uav_grid();
    auto vt = std::make_shared<const ValueTable>(solve_mdp(m, m.horizon));
    auto policy = PolicySpec::mdp_pomdp(PolicyKind::hindsight, vt);
    ExactSolver solver(m);
    int holds = 0, violated = 0;
    walk_policy_tree(m, policy, m.start(), m.horizon, [&](const PolicyNode& n) {
        auto sb = suboptimality_bound(solver, policy, n.belief, ActionId(uav::up), n.t_remaining);
        holds += sb.status == SuboptimalityBound::Status::holds;
        violated += sb.status == SuboptimalityBound::Status::violated;
        EXPECT_GE(sb.realized_gap, -1e-9);
    });
    EXPECT_GT(holds, 0);
    EXPECT_GT(violated, 0);
}
