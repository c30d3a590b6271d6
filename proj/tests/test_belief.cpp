#include "infoact/belief.hpp"
#include "infoact/problems.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace infoact;

namespace {

Belief random_belief(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.01, 1.0);
    std::vector<double> w(n);
    double total = 0.0;
    for (auto& x : w) total += (x = u(rng));
    return Belief::from_mass(w, total);
}

} // namespace

TEST(BeliefUpdate, PerfectListenRevealsTiger) {
    auto m = build_tiger();
    auto b = belief_update(m, m.start(), ActionId(2), ObsId(0));
    EXPECT_DOUBLE_EQ(b[0], 1.0);
    EXPECT_DOUBLE_EQ(b[1], 0.0);
}

TEST(BeliefUpdate, NoisyListenFollowsBayes) {
    TigerParams p;
    p.listen_accuracy = 0.85;
    auto m = build_tiger(p);
    auto b = belief_update(m, m.start(), ActionId(2), ObsId(0));
    EXPECT_NEAR(b[0], 0.85, 1e-12);
    auto b2 = belief_update(m, b, ActionId(2), ObsId(0));
    EXPECT_NEAR(b2[0], 0.85 * 0.85 / (0.85 * 0.85 + 0.15 * 0.15), 1e-12);
}

TEST(BeliefUpdate, ImpossibleObservationThrows) {
    auto m = build_tiger();
    auto b = Belief::point(2, StateId(0));
    EXPECT_DOUBLE_EQ(observation_prob(m, b, ActionId(2), ObsId(1)), 0.0);
    EXPECT_THROW(belief_update(m, b, ActionId(2), ObsId(1)), ZeroProbabilityObservation);
}

TEST(BeliefReward, Tiger) {
    auto m = build_tiger();
    EXPECT_DOUBLE_EQ(belief_reward(m, m.start(), ActionId(0)), 50.0);
    EXPECT_DOUBLE_EQ(belief_reward(m, m.start(), ActionId(2)), -1.0);
}

TEST(Branches, TerminalMassIsDropped) {
    auto m = build_tiger();
    EXPECT_TRUE(continuation_branches(m, m.start(), ActionId(0)).empty());
    auto listen = continuation_branches(m, m.start(), ActionId(2));
    ASSERT_EQ(listen.size(), 2u);
    EXPECT_DOUBLE_EQ(listen[0].prob + listen[1].prob, 1.0);
}

TEST(BeliefProperties, TotalProbabilityAndNormalization) {
    std::mt19937_64 rng(7);
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        auto m = random_pomdp(seed, 1 + seed % 4, 1 + seed % 3, 1 + seed % 4, 2);
        for (int k = 0; k < 5; ++k) {
            auto b = random_belief(m.n_states(), rng);
            for (std::size_t a = 0; a < m.n_actions(); ++a) {
                double total = 0.0;
                for (std::size_t o = 0; o < m.n_obs(); ++o) {
                    double p = observation_prob(m, b, ActionId(a), ObsId(o));
                    total += p;
                    if (p < kZeroMass) continue;
                    auto next = belief_update(m, b, ActionId(a), ObsId(o));
                    double sum = 0.0;
                    for (double x : next.probs()) {
                        EXPECT_GE(x, 0.0);
                        sum += x;
                    }
                    EXPECT_NEAR(sum, 1.0, 1e-12);
                }
                EXPECT_NEAR(total, 1.0, 1e-12);
            }
        }
    }
}

TEST(BeliefProperties, PosteriorsAverageToPrediction) {
    std::mt19937_64 rng(11);
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        auto m = random_pomdp(seed, 3, 2, 3, 2);
        auto b = random_belief(3, rng);
        for (std::size_t a = 0; a < m.n_actions(); ++a) {
            auto pred = predict(m, b, ActionId(a));
            std::vector<double> mix(3, 0.0);
            for (const auto& br : continuation_branches(m, b, ActionId(a)))
                for (std::size_t s = 0; s < 3; ++s) mix[s] += br.prob * br.next[s];
            for (std::size_t s = 0; s < 3; ++s) EXPECT_NEAR(mix[s], pred[s], 1e-12);
        }
    }
}

TEST(BeliefProperties, ObservationChannelMixesBackToPrior) {
    std::mt19937_64 rng(3);
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        auto m = random_pomdp(seed, 4, 2, 3, 2);
        auto b = random_belief(4, rng);
        for (std::size_t a = 0; a < m.n_actions(); ++a) {
            std::vector<double> mix(4, 0.0);
            for (const auto& br : observation_channel(m, b, ActionId(a)))
                for (std::size_t s = 0; s < 4; ++s) mix[s] += br.prob * br.next[s];
            for (std::size_t s = 0; s < 4; ++s) EXPECT_NEAR(mix[s], b[s], 1e-12);
        }
    }
}

TEST(BeliefProperties, RewardIsLinearInBelief) {
    std::mt19937_64 rng(5);
    auto m = random_pomdp(9, 4, 3, 2, 2);
    for (int k = 0; k < 20; ++k) {
        auto b1 = random_belief(4, rng), b2 = random_belief(4, rng);
        double lam = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        std::vector<double> mix(4);
        for (std::size_t s = 0; s < 4; ++s) mix[s] = lam * b1[s] + (1 - lam) * b2[s];
        auto bm = Belief::normalized(mix);
        for (std::size_t a = 0; a < 3; ++a)
            EXPECT_NEAR(belief_reward(m, bm, ActionId(a)),
                        lam * belief_reward(m, b1, ActionId(a)) + (1 - lam) * belief_reward(m, b2, ActionId(a)), 1e-12);
    }
}

TEST(BeliefKey, EqualityAndHorizon) {
    auto a = Belief::normalized({0.25, 0.75});
    auto b = Belief::normalized({0.25, 0.75});
    auto c = Belief::normalized({0.250001, 0.749999});
    EXPECT_EQ(BeliefKey(a, 2), BeliefKey(b, 2));
    EXPECT_EQ(BeliefKeyHash{}(BeliefKey(a, 2)), BeliefKeyHash{}(BeliefKey(b, 2)));
    EXPECT_NE(BeliefKey(a, 2), BeliefKey(a, 1));
    EXPECT_NE(BeliefKey(a, 2), BeliefKey(c, 2));
}
