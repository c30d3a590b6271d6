#include "infoact/exact_solver.hpp"
#include "infoact/oracle.hpp"
#include "infoact/problems.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace infoact;

TEST(ExactSolver, TigerHorizonTwo) {
    auto m = build_tiger();
    ExactSolver solver(m);
    auto e = solver.solve(m.start(), 2);
    EXPECT_DOUBLE_EQ(e.value, 99.0);
    EXPECT_DOUBLE_EQ(e.q[0], 50.0);
    EXPECT_DOUBLE_EQ(e.q[2], 99.0);
    EXPECT_EQ(e.argmax, std::vector<ActionId>{ActionId(2)});
    EXPECT_DOUBLE_EQ(solver.v_star(m.start(), 1), 50.0);
    EXPECT_DOUBLE_EQ(solver.v_star(), 99.0);
    EXPECT_THROW(solver.solve(m.start(), 0), Error);
}

TEST(ExactSolver, NoisyTigerMatchesPolicyTrees) {
    TigerParams p;
    p.listen_accuracy = 0.85;
    p.horizon = 3;
    auto m = build_tiger(p);
    for (double left : {0.5, 0.7, 0.95}) {
        auto b = Belief::normalized({left, 1 - left});
        EXPECT_NEAR(v_star(m, b, 3), oracle::pomdp_by_policy_trees(m, b.probs(), 3), 1e-9);
        for (std::size_t a = 0; a < 3; ++a)
            EXPECT_NEAR(q_star(m, b, ActionId(a), 3), oracle::pomdp_q_by_policy_trees(m, b.probs(), 3, a), 1e-9);
    }
}

TEST(ExactSolver, MatchesPolicyTreesOnRandomModels) {
    std::mt19937_64 rng(42);
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        std::size_t ns = 1 + seed % 3, na = 1 + (seed / 3) % 3, no = 1 + (seed / 9) % 3;
        int t = 1 + static_cast<int>(seed % 3);
        auto m = random_pomdp(seed, ns, na, no, t);
        if (seed % 5 == 0) m.set_terminal(0, 0);
        ExactSolver solver(m);
        EXPECT_NEAR(solver.v_star(), oracle::pomdp_by_policy_trees(m, m.start().probs(), t), 1e-9) << seed;
        std::vector<double> w(ns);
        double total = 0.0;
        for (auto& x : w) total += (x = std::uniform_real_distribution<double>(0.0, 1.0)(rng) + 1e-3);
        auto b = Belief::from_mass(w, total);
        EXPECT_NEAR(solver.v_star(b, t), oracle::pomdp_by_policy_trees(m, b.probs(), t), 1e-9) << seed;
    }
}

TEST(ExactSolver, MemoizationIsTransparent) {
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
        auto m = random_pomdp(seed, 3, 2, 2, 3);
        ExactSolver memo(m, {1'000'000, true}), plain(m, {1'000'000, false});
        EXPECT_EQ(memo.v_star(), plain.v_star());
        EXPECT_EQ(plain.cache_size(), 0u);
        EXPECT_GT(memo.cache_size(), 0u);
    }
}

TEST(ExactSolver, ExtractedPolicyAttainsOptimum) {
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
        auto m = random_pomdp(seed, 3, 3, 2, 3);
        ExactSolver solver(m);
        double vs = solver.v_star();
        for (auto tie : {TieRule::lexicographic, TieRule::uniform})
            EXPECT_NEAR(evaluate_policy_exact(m, solver.extract_policy(tie)), vs, 1e-9);
    }
    auto tiger = build_tiger();
    EXPECT_DOUBLE_EQ(evaluate_policy_exact(tiger, extract_policy(tiger)), 99.0);
}

TEST(ExactSolver, PlanAlphaReproducesValue) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto m = random_pomdp(seed, 3, 2, 3, 3);
        ExactSolver solver(m);
        auto b = m.start();
        auto alpha = solver.plan_alpha(b, 3);
        double dot = 0.0;
        for (std::size_t s = 0; s < 3; ++s) dot += alpha[s] * b[s];
        EXPECT_NEAR(dot, solver.v_star(b, 3), 1e-9);
    }
}

TEST(ExactSolver, UavGridAgreesWithGridOracle) {
    for (bool detour : {false, true}) {
        UavGridParams p;
        p.corner_detour = detour;
        auto m = build_uav_grid(p);
        oracle::UavGridOracle gold({p.budget, detour});
        ExactSolver solver(m);
        auto root = solver.solve(m.start(), m.horizon);
        EXPECT_NEAR(root.value, gold.optimal_value(), 1e-9);
        EXPECT_NEAR(root.value, 96.0, 1e-9);
        EXPECT_EQ(root.argmax, std::vector<ActionId>{ActionId(uav::up)});
    }
}

TEST(ExactSolver, NodeCapAndCacheCounter) {
    auto before = OptimalCache::constructed_count();
    auto m = build_uav_grid();
    ExactSolver solver(m, {5, true});
    EXPECT_EQ(OptimalCache::constructed_count(), before + 1);
    EXPECT_THROW(solver.v_star(), TreeBudgetExceeded);
}

TEST(OptimalCache, WriteOnce) {
    OptimalCache cache;
    BeliefKey key(Belief::uniform(2), 1);
    cache.insert(key, {1.0, {1.0}, {ActionId(0)}});
    EXPECT_EQ(cache.insert(key, {1.0, {1.0}, {ActionId(0)}}).value, 1.0);
    EXPECT_THROW(cache.insert(key, {2.0, {2.0}, {ActionId(0)}}), Error);
}
