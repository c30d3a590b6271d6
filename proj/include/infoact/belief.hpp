#pragma once

#include "infoact/model.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace infoact {

inline double belief_reward(const TabularPomdp& m, const Belief& b, ActionId a) {
    double r = 0.0;
    for (std::size_t s = 0; s < m.n_states(); ++s) r += m.R(s, a.index) * b[s];
    return r;
}

/// Prediction step: sum_s T[a][s][.] b(s), ignoring terminal flags.
inline std::vector<double> predict(const TabularPomdp& m, const Belief& b, ActionId a) {
    std::vector<double> out(m.n_states(), 0.0);
    for (std::size_t s = 0; s < m.n_states(); ++s) {
        if (b[s] == 0.0) continue;
        auto row = m.transition_row(a.index, s);
        for (std::size_t s2 = 0; s2 < m.n_states(); ++s2) out[s2] += row[s2] * b[s];
    }
    return out;
}

inline double observation_prob(const TabularPomdp& m, const Belief& b, ActionId a, ObsId o) {
    auto pred = predict(m, b, a);
    double p = 0.0;
    for (std::size_t s2 = 0; s2 < m.n_states(); ++s2) p += pred[s2] * m.Z(a.index, s2, o.index);
    return p;
}

/// Bayes filter: b'(s') = eta Z[a][s'][o] sum_s T[a][s][s'] b(s).
inline Belief belief_update(const TabularPomdp& m, const Belief& b, ActionId a, ObsId o) {
    auto mass = predict(m, b, a);
    double total = 0.0;
    for (std::size_t s2 = 0; s2 < m.n_states(); ++s2) {
        mass[s2] *= m.Z(a.index, s2, o.index);
        total += mass[s2];
    }
    if (total < kZeroMass)
        throw ZeroProbabilityObservation("observation '" + m.observations[o.index] + "' after action '" +
                                         m.actions[a.index] + "' has zero probability");
    return Belief::from_mass(std::move(mass), total);
}

/// A non-terminal continuation of (b, a): observation, its probability
/// (excluding terminated mass), and the posterior.
struct Branch {
    ObsId obs;
    double prob;
    Belief next;
};

/**
 * Continuation branches after acting. Mass on (s, a) pairs with the terminal
 * flag set is dropped, so the probabilities sum to the surviving mass (<= 1).
 * Branches with probability below kZeroMass are skipped.
 */
inline std::vector<Branch> continuation_branches(const TabularPomdp& m, const Belief& b, ActionId a) {
    const auto ns = m.n_states();
    std::vector<double> pred(ns, 0.0);
    for (std::size_t s = 0; s < ns; ++s) {
        if (b[s] == 0.0 || m.is_terminal(s, a.index)) continue;
        auto row = m.transition_row(a.index, s);
        for (std::size_t s2 = 0; s2 < ns; ++s2) pred[s2] += row[s2] * b[s];
    }
    std::vector<Branch> out;
    for (std::size_t o = 0; o < m.n_obs(); ++o) {
        std::vector<double> mass(ns);
        double total = 0.0;
        for (std::size_t s2 = 0; s2 < ns; ++s2) {
            mass[s2] = pred[s2] * m.Z(a.index, s2, o);
            total += mass[s2];
        }
        if (total < kZeroMass) continue;
        out.push_back({ObsId(o), total, Belief::from_mass(std::move(mass), total)});
    }
    return out;
}

/**
 * Observation channel of an action read on the current state: the action's
 * observation function applied without moving the state. Posteriors mix back
 * to b exactly: sum_o P(o|b) b^o = b.
 */
inline std::vector<Branch> observation_channel(const TabularPomdp& m, const Belief& b, ActionId a) {
    const auto ns = m.n_states();
    std::vector<Branch> out;
    for (std::size_t o = 0; o < m.n_obs(); ++o) {
        std::vector<double> mass(ns);
        double total = 0.0;
        for (std::size_t s = 0; s < ns; ++s) {
            mass[s] = b[s] * m.Z(a.index, s, o);
            total += mass[s];
        }
        if (total < kZeroMass) continue;
        out.push_back({ObsId(o), total, Belief::from_mass(std::move(mass), total)});
    }
    return out;
}

/// Memoization key: belief rounded to 1e-12 per entry plus remaining horizon.
struct BeliefKey {
    std::vector<std::int64_t> quantized;
    int horizon = 0;

    static constexpr double kQuantum = 1e-12;

    BeliefKey() = default;
    BeliefKey(const Belief& b, int t) : horizon(t) {
        quantized.reserve(b.size());
        for (double p : b.probs()) quantized.push_back(std::llround(p / kQuantum));
    }

    bool operator==(const BeliefKey&) const = default;
};

struct BeliefKeyHash {
    std::size_t operator()(const BeliefKey& k) const noexcept {
        std::uint64_t h = 1469598103934665603ull ^ static_cast<std::uint64_t>(k.horizon);
        for (auto q : k.quantized) {
            h ^= static_cast<std::uint64_t>(q) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }
};

} // namespace infoact
