#pragma once

#include "infoact/errors.hpp"

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

namespace infoact {

/// Absolute tolerance for probability sums and value comparisons.
inline constexpr double kTolerance = 1e-9;
/// Mass below which an observation branch is treated as impossible.
inline constexpr double kZeroMass = 1e-12;

template <class Tag>
struct Index {
    std::size_t index = 0;

    constexpr Index() = default;
    constexpr explicit Index(std::size_t i) : index(i) {}
    constexpr auto operator<=>(const Index&) const = default;
};

struct StateTag {};
struct ActionTag {};
struct ObsTag {};

using StateId = Index<StateTag>;
using ActionId = Index<ActionTag>;
using ObsId = Index<ObsTag>;

/**
 * Probability vector over states.
 *
 * Construction through normalized() renormalizes small drift (<= 1e-9) and
 * rejects anything larger, so every Belief in circulation sums to one.
 */
class Belief {
public:
    Belief() = default;

    static Belief normalized(std::vector<double> probs) {
        if (probs.empty())
            throw ValidationError("belief over an empty state set");
        double total = 0.0;
        for (std::size_t s = 0; s < probs.size(); ++s) {
            if (!(probs[s] >= -kTolerance) || !std::isfinite(probs[s]))
                throw ValidationError("belief entry " + std::to_string(s) + " is negative or not finite");
            probs[s] = std::max(0.0, probs[s]);
            total += probs[s];
        }
        if (std::abs(total - 1.0) > kTolerance)
            throw ValidationError("belief sums to " + std::to_string(total) + ", residual " +
                                  std::to_string(std::abs(total - 1.0)));
        for (auto& p : probs) p /= total;
        return Belief(std::move(probs));
    }

    static Belief point(std::size_t n_states, StateId s) {
        std::vector<double> probs(n_states, 0.0);
        probs.at(s.index) = 1.0;
        return Belief(std::move(probs));
    }

    static Belief uniform(std::size_t n_states) {
        return Belief(std::vector<double>(n_states, 1.0 / static_cast<double>(n_states)));
    }

    /// Scales a nonnegative mass vector to sum one. Caller guarantees positive mass.
    static Belief from_mass(std::vector<double> mass, double total) {
        for (auto& p : mass) p /= total;
        return Belief(std::move(mass));
    }

    std::size_t size() const noexcept { return probs_.size(); }
    double operator[](std::size_t s) const { return probs_[s]; }
    double operator[](StateId s) const { return probs_[s.index]; }
    std::span<const double> probs() const noexcept { return probs_; }

    bool is_point_mass() const {
        return std::count_if(probs_.begin(), probs_.end(), [](double p) { return p > kZeroMass; }) == 1;
    }

private:
    explicit Belief(std::vector<double> probs) : probs_(std::move(probs)) {}
    std::vector<double> probs_;
};

/**
 * Finite-horizon tabular POMDP.
 *
 * Tensors are dense and row-major: T[a][s][s'], Z[a][s'][o], R[s][a],
 * terminal[s][a]. The terminal flag fires after executing a in s; no reward
 * and no observation follow it.
 */
struct TabularPomdp {
    std::vector<std::string> states;
    std::vector<std::string> actions;
    std::vector<std::string> observations;
    std::vector<double> transition;      // n_a * n_s * n_s
    std::vector<double> observation_fn;  // n_a * n_s * n_o
    std::vector<double> reward;          // n_s * n_a
    std::vector<unsigned char> terminal; // n_s * n_a
    std::vector<double> initial_belief;  // raw, checked by validate()
    int horizon = 1;
    /// Optional class label per state; actions that keep every state inside its
    /// class count as state preserving. Empty means each state is its own class.
    std::vector<std::string> projection;

    TabularPomdp() = default;

    TabularPomdp(std::vector<std::string> state_names, std::vector<std::string> action_names,
                 std::vector<std::string> obs_names, int horizon_)
        : states(std::move(state_names)), actions(std::move(action_names)),
          observations(std::move(obs_names)), horizon(horizon_) {
        transition.assign(n_actions() * n_states() * n_states(), 0.0);
        observation_fn.assign(n_actions() * n_states() * n_obs(), 0.0);
        reward.assign(n_states() * n_actions(), 0.0);
        terminal.assign(n_states() * n_actions(), 0);
        initial_belief.assign(n_states(), n_states() ? 1.0 / static_cast<double>(n_states()) : 0.0);
    }

    std::size_t n_states() const noexcept { return states.size(); }
    std::size_t n_actions() const noexcept { return actions.size(); }
    std::size_t n_obs() const noexcept { return observations.size(); }

    double& T(std::size_t a, std::size_t s, std::size_t s2) { return transition[(a * n_states() + s) * n_states() + s2]; }
    double T(std::size_t a, std::size_t s, std::size_t s2) const { return transition[(a * n_states() + s) * n_states() + s2]; }
    double& Z(std::size_t a, std::size_t s2, std::size_t o) { return observation_fn[(a * n_states() + s2) * n_obs() + o]; }
    double Z(std::size_t a, std::size_t s2, std::size_t o) const { return observation_fn[(a * n_states() + s2) * n_obs() + o]; }
    double& R(std::size_t s, std::size_t a) { return reward[s * n_actions() + a]; }
    double R(std::size_t s, std::size_t a) const { return reward[s * n_actions() + a]; }
    bool is_terminal(std::size_t s, std::size_t a) const { return terminal[s * n_actions() + a] != 0; }
    void set_terminal(std::size_t s, std::size_t a, bool value = true) { terminal[s * n_actions() + a] = value ? 1 : 0; }

    std::span<const double> transition_row(std::size_t a, std::size_t s) const {
        return {transition.data() + (a * n_states() + s) * n_states(), n_states()};
    }
    std::span<const double> observation_row(std::size_t a, std::size_t s2) const {
        return {observation_fn.data() + (a * n_states() + s2) * n_obs(), n_obs()};
    }

    /// Checked initial belief; throws ValidationError when b0 is malformed.
    Belief start() const { return Belief::normalized(initial_belief); }

    const std::string& projection_of(std::size_t s) const {
        return projection.empty() ? states[s] : projection[s];
    }

    std::optional<std::size_t> state_index(const std::string& name) const { return find(states, name); }
    std::optional<std::size_t> action_index(const std::string& name) const { return find(actions, name); }
    std::optional<std::size_t> obs_index(const std::string& name) const { return find(observations, name); }

private:
    static std::optional<std::size_t> find(const std::vector<std::string>& names, const std::string& name) {
        auto it = std::find(names.begin(), names.end(), name);
        if (it == names.end()) return std::nullopt;
        return static_cast<std::size_t>(it - names.begin());
    }
};

/// Fully observable projection of a POMDP: observations and b0 dropped.
struct TabularMdp {
    std::vector<std::string> states;
    std::vector<std::string> actions;
    std::vector<double> transition;
    std::vector<double> reward;
    std::vector<unsigned char> terminal;
    StateId initial_state;
    int horizon = 1;

    std::size_t n_states() const noexcept { return states.size(); }
    std::size_t n_actions() const noexcept { return actions.size(); }
    double T(std::size_t a, std::size_t s, std::size_t s2) const { return transition[(a * n_states() + s) * n_states() + s2]; }
    double R(std::size_t s, std::size_t a) const { return reward[s * n_actions() + a]; }
    bool is_terminal(std::size_t s, std::size_t a) const { return terminal[s * n_actions() + a] != 0; }
};

inline TabularMdp underlying_mdp(const TabularPomdp& m) {
    TabularMdp mdp;
    mdp.states = m.states;
    mdp.actions = m.actions;
    mdp.transition = m.transition;
    mdp.reward = m.reward;
    mdp.terminal = m.terminal;
    mdp.horizon = m.horizon;
    auto first = std::find_if(m.initial_belief.begin(), m.initial_belief.end(), [](double p) { return p > kZeroMass; });
    mdp.initial_state = StateId(first == m.initial_belief.end() ? 0 : static_cast<std::size_t>(first - m.initial_belief.begin()));
    return mdp;
}

/// One failed invariant, with the indices it concerns and how far off it is.
struct Violation {
    enum class Kind { dimension, names, transition_row, observation_row, probability_range, belief, horizon };
    Kind kind;
    std::string where;
    double residual = 0.0;

    std::string describe() const { return where + " (residual " + std::to_string(residual) + ")"; }
};

inline std::vector<Violation> validate_belief(std::span<const double> probs, const std::string& label = "belief") {
    std::vector<Violation> out;
    double total = 0.0;
    for (std::size_t s = 0; s < probs.size(); ++s) {
        if (probs[s] < 0.0 || probs[s] > 1.0 || !std::isfinite(probs[s]))
            out.push_back({Violation::Kind::belief, label + "[" + std::to_string(s) + "] outside [0,1]",
                           probs[s] < 0.0 ? -probs[s] : probs[s] - 1.0});
        total += probs[s];
    }
    if (std::abs(total - 1.0) > kTolerance)
        out.push_back({Violation::Kind::belief, label + " does not sum to 1", std::abs(total - 1.0)});
    return out;
}

/// Checks every structural invariant; an empty result means the model is valid.
inline std::vector<Violation> validate(const TabularPomdp& m) {
    std::vector<Violation> out;
    const auto ns = m.n_states(), na = m.n_actions(), no = m.n_obs();
    auto names_unique = [&](const std::vector<std::string>& names, const char* what) {
        if (names.empty()) out.push_back({Violation::Kind::names, std::string("no ") + what, 0.0});
        std::unordered_set<std::string> seen;
        for (const auto& n : names)
            if (!seen.insert(n).second)
                out.push_back({Violation::Kind::names, std::string("duplicate ") + what + " name '" + n + "'", 0.0});
    };
    names_unique(m.states, "state");
    names_unique(m.actions, "action");
    names_unique(m.observations, "observation");
    if (m.horizon < 1)
        out.push_back({Violation::Kind::horizon, "horizon " + std::to_string(m.horizon) + " < 1",
                       static_cast<double>(1 - m.horizon)});
    if (m.transition.size() != na * ns * ns || m.observation_fn.size() != na * ns * no ||
        m.reward.size() != ns * na || m.terminal.size() != ns * na || m.initial_belief.size() != ns ||
        (!m.projection.empty() && m.projection.size() != ns)) {
        out.push_back({Violation::Kind::dimension, "tensor dimensions do not match the name lists", 0.0});
        return out;
    }
    for (std::size_t a = 0; a < na; ++a) {
        for (std::size_t s = 0; s < ns; ++s) {
            double total = 0.0;
            for (std::size_t s2 = 0; s2 < ns; ++s2) {
                double p = m.T(a, s, s2);
                if (p < 0.0 || p > 1.0 || !std::isfinite(p))
                    out.push_back({Violation::Kind::probability_range,
                                   "T[" + m.actions[a] + "][" + m.states[s] + "][" + m.states[s2] + "] outside [0,1]", p});
                total += p;
            }
            if (std::abs(total - 1.0) > kTolerance)
                out.push_back({Violation::Kind::transition_row,
                               "T[" + m.actions[a] + "][" + m.states[s] + "] row sums to " + std::to_string(total),
                               std::abs(total - 1.0)});
        }
        for (std::size_t s2 = 0; s2 < ns; ++s2) {
            double total = 0.0;
            for (std::size_t o = 0; o < no; ++o) {
                double p = m.Z(a, s2, o);
                if (p < 0.0 || p > 1.0 || !std::isfinite(p))
                    out.push_back({Violation::Kind::probability_range,
                                   "Z[" + m.actions[a] + "][" + m.states[s2] + "][" + m.observations[o] + "] outside [0,1]", p});
                total += p;
            }
            if (std::abs(total - 1.0) > kTolerance)
                out.push_back({Violation::Kind::observation_row,
                               "Z[" + m.actions[a] + "][" + m.states[s2] + "] row sums to " + std::to_string(total),
                               std::abs(total - 1.0)});
        }
    }
    auto b = validate_belief(m.initial_belief, "start");
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

/// Throws ValidationError listing every violation.
inline void require_valid(const TabularPomdp& m) {
    auto violations = validate(m);
    if (violations.empty()) return;
    std::string msg = "invalid model:";
    for (const auto& v : violations) msg += "\n  " + v.describe();
    throw ValidationError(msg);
}

} // namespace infoact
