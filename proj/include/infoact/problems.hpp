#pragma once

#include "infoact/model.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <random>
#include <string>
#include <tuple>
#include <vector>

namespace infoact {

struct TigerParams {
    double listen_accuracy = 1.0;
    double listen_cost = -1.0;
    double correct_door_reward = 100.0;
    double tiger_door_reward = 0.0;
    double initial_left_prob = 0.5;
    int horizon = 2;
};

/**
 * Two doors, tiger behind one. States {T_L, T_R}; actions {open-left,
 * open-right, listen}; observations {hear-left, hear-right}. Opening a door
 * ends the episode. Listening leaves the state alone and reports the tiger's
 * side with probability listen_accuracy.
 */
inline TabularPomdp build_tiger(const TigerParams& p = {}) {
    if (!(p.listen_accuracy >= 0.5 && p.listen_accuracy <= 1.0))
        throw ValidationError("listen_accuracy must lie in [0.5, 1]");
    if (!(p.initial_left_prob >= 0.0 && p.initial_left_prob <= 1.0))
        throw ValidationError("initial_left_prob must lie in [0, 1]");
    if (p.horizon < 1) throw ValidationError("horizon must be >= 1");

    enum { TL, TR };
    enum { OPEN_LEFT, OPEN_RIGHT, LISTEN };
    enum { HEAR_LEFT, HEAR_RIGHT };
    TabularPomdp m({"T_L", "T_R"}, {"open-left", "open-right", "listen"}, {"hear-left", "hear-right"}, p.horizon);
    for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t s = 0; s < 2; ++s) m.T(a, s, s) = 1.0;
    for (std::size_t a : {OPEN_LEFT, OPEN_RIGHT})
        for (std::size_t s = 0; s < 2; ++s) {
            m.Z(a, s, HEAR_LEFT) = 0.5;
            m.Z(a, s, HEAR_RIGHT) = 0.5;
            m.set_terminal(s, a);
        }
    m.Z(LISTEN, TL, HEAR_LEFT) = p.listen_accuracy;
    m.Z(LISTEN, TL, HEAR_RIGHT) = 1.0 - p.listen_accuracy;
    m.Z(LISTEN, TR, HEAR_RIGHT) = p.listen_accuracy;
    m.Z(LISTEN, TR, HEAR_LEFT) = 1.0 - p.listen_accuracy;

    m.R(TL, OPEN_LEFT) = p.tiger_door_reward;
    m.R(TR, OPEN_LEFT) = p.correct_door_reward;
    m.R(TL, OPEN_RIGHT) = p.correct_door_reward;
    m.R(TR, OPEN_RIGHT) = p.tiger_door_reward;
    m.R(TL, LISTEN) = p.listen_cost;
    m.R(TR, LISTEN) = p.listen_cost;

    m.initial_belief = {p.initial_left_prob, 1.0 - p.initial_left_prob};
    return m;
}

/// Cells are numbered 1..9 row-major; 1 is the north-west corner, 5 the centre.
struct UavGridParams {
    int start = 5;
    /// Prior over the car's cell, index 0 is c1. Empty means uniform over the
    /// eight cells other than the start.
    std::vector<double> car_prior;
    int move_cost = 1;
    int up_cost = 2;
    double find_reward = 100.0;
    int budget = 5;
    /// Reference variant: entering a corner costs 2 and finding the car ends
    /// the episode with reward find_reward minus the entry cost.
    bool corner_detour = false;
    std::size_t state_cap = 1'000'000;
};

namespace uav {

enum Move { north, east, south, west, up };

inline int step_cell(int cell, int move) {
    int r = (cell - 1) / 3, c = (cell - 1) % 3;
    switch (move) {
    case north: if (r > 0) --r; break;
    case south: if (r < 2) ++r; break;
    case west: if (c > 0) --c; break;
    case east: if (c < 2) ++c; break;
    default: break;
    }
    return r * 3 + c + 1;
}

inline bool is_corner(int cell) { return cell == 1 || cell == 3 || cell == 7 || cell == 9; }

struct Cell {
    int car;
    int pos;
    bool found;
    int spent;
    auto operator<=>(const Cell&) const = default;
};

struct Outcome {
    Cell next;
    double reward;
    bool terminal;
};

inline Outcome apply(const UavGridParams& p, const Cell& s, int move) {
    if (move == up) {
        Cell n = s;
        n.spent += p.up_cost;
        return {n, -static_cast<double>(p.up_cost), n.spent > p.budget};
    }
    int cell = step_cell(s.pos, move);
    int cost = (p.corner_detour && is_corner(cell) && cell != s.pos) ? 2 * p.move_cost : p.move_cost;
    Cell n{s.car, cell, s.found, s.spent + cost};
    double reward = -static_cast<double>(cost);
    bool found_now = cell == s.car && !s.found;
    if (found_now) {
        n.found = true;
        reward = p.corner_detour ? p.find_reward - cost : p.find_reward;
    }
    bool terminal = cell == p.start || n.spent > p.budget || (p.corner_detour && found_now);
    return {n, reward, terminal};
}

inline std::string state_name(const Cell& c) {
    return "car" + std::to_string(c.car) + "_at" + std::to_string(c.pos) + (c.found ? "_found" : "_open") + "_b" +
           std::to_string(c.spent);
}

} // namespace uav

/**
 * Budgeted 3x3 search for a parked car. The UAV starts at c5, moves in four
 * directions (walls keep it in place) or goes `up`, which spends the up cost,
 * keeps it in its cell and reveals the car's cell. Every move reports whether
 * the car is in the arrived cell. Entering the car's cell the first time pays
 * find_reward. The episode ends on re-entering c5 or once total cost exceeds
 * the budget. Terminal transitions leave the state unchanged.
 *
 * States are (car cell, uav cell, found, spent) reachable from the start; the
 * state projection used for state preservation is (car cell, uav cell).
 */
inline TabularPomdp build_uav_grid(const UavGridParams& p = {}) {
    if (p.budget < 1) throw ValidationError("budget must be >= 1");
    if (p.start < 1 || p.start > 9) throw ValidationError("start cell must be in 1..9");
    std::vector<double> prior = p.car_prior;
    if (prior.empty()) {
        prior.assign(9, 1.0 / 8.0);
        prior[p.start - 1] = 0.0;
    }
    if (prior.size() != 9) throw ValidationError("car_prior needs 9 entries");
    double total = 0.0;
    for (double q : prior) {
        if (q < 0.0) throw ValidationError("car_prior has a negative entry");
        total += q;
    }
    if (std::abs(total - 1.0) > kTolerance) throw ValidationError("car_prior does not sum to 1");

    using uav::Cell;
    std::map<Cell, std::size_t> index;
    std::vector<Cell> cells;
    std::deque<Cell> queue;
    auto intern = [&](const Cell& c) {
        auto [it, fresh] = index.emplace(c, cells.size());
        if (fresh) {
            cells.push_back(c);
            queue.push_back(c);
            if (cells.size() > p.state_cap) throw StateBlowup(p.state_cap);
        }
        return it->second;
    };
    std::vector<int> car_cells;
    for (int car = 1; car <= 9; ++car)
        if (prior[car - 1] > 0.0) {
            car_cells.push_back(car);
            intern({car, p.start, false, 0});
        }
    while (!queue.empty()) {
        Cell c = queue.front();
        queue.pop_front();
        for (int mv = uav::north; mv <= uav::up; ++mv) {
            auto out = uav::apply(p, c, mv);
            if (!out.terminal) intern(out.next);
        }
    }

    std::vector<std::string> states, projection;
    for (const auto& c : cells) {
        states.push_back(uav::state_name(c));
        projection.push_back("car" + std::to_string(c.car) + "_at" + std::to_string(c.pos));
    }
    std::vector<std::string> obs = {"no-car", "car-here"};
    std::map<int, std::size_t> car_obs;
    for (int car : car_cells) {
        car_obs[car] = obs.size();
        obs.push_back("car-at-c" + std::to_string(car));
    }
    TabularPomdp m(std::move(states), {"north", "east", "south", "west", "up"}, std::move(obs), p.budget + 1);
    m.projection = std::move(projection);

    for (std::size_t s = 0; s < cells.size(); ++s) {
        for (int mv = uav::north; mv <= uav::up; ++mv) {
            auto a = static_cast<std::size_t>(mv);
            auto out = uav::apply(p, cells[s], mv);
            std::size_t next = out.terminal ? s : index.at(out.next);
            m.T(a, s, next) = 1.0;
            m.R(s, a) = out.reward;
            m.set_terminal(s, a, out.terminal);
        }
        const auto& c = cells[s];
        for (int mv = uav::north; mv <= uav::west; ++mv) m.Z(static_cast<std::size_t>(mv), s, c.pos == c.car ? 1 : 0) = 1.0;
        m.Z(uav::up, s, car_obs.at(c.car)) = 1.0;
    }
    m.initial_belief.assign(cells.size(), 0.0);
    for (int car : car_cells) m.initial_belief[index.at({car, p.start, false, 0})] = prior[car - 1];
    return m;
}

/// Index of the start state with the car in `car_cell`, if that car is in the prior's support.
inline std::optional<std::size_t> uav_start_state(const TabularPomdp& m, int car_cell, int start = 5) {
    return m.state_index(uav::state_name({car_cell, start, false, 0}));
}

/**
 * Seeded random POMDP. Rows of T and Z are flat-Dirichlet draws, rewards are
 * uniform in [-1, 1], b0 is uniform, no terminal flags. Same seed and
 * dimensions give bit-identical models.
 */
inline TabularPomdp random_pomdp(std::uint64_t seed, std::size_t n_s, std::size_t n_a, std::size_t n_o, int horizon) {
    if (n_s < 1 || n_a < 1 || n_o < 1 || horizon < 1) throw ValidationError("random_pomdp dimensions must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto simplex = [&](std::size_t k) {
        std::vector<double> w(k);
        double total = 0.0;
        for (auto& x : w) {
            x = -std::log(1.0 - unit(rng));
            total += x;
        }
        for (auto& x : w) x /= total;
        return w;
    };
    auto names = [](char prefix, std::size_t k) {
        std::vector<std::string> out;
        for (std::size_t i = 0; i < k; ++i) out.push_back(std::string(1, prefix) + std::to_string(i));
        return out;
    };
    TabularPomdp m(names('s', n_s), names('a', n_a), names('o', n_o), horizon);
    for (std::size_t a = 0; a < n_a; ++a) {
        for (std::size_t s = 0; s < n_s; ++s) {
            auto row = simplex(n_s);
            for (std::size_t s2 = 0; s2 < n_s; ++s2) m.T(a, s, s2) = row[s2];
        }
        for (std::size_t s2 = 0; s2 < n_s; ++s2) {
            auto row = simplex(n_o);
            for (std::size_t o = 0; o < n_o; ++o) m.Z(a, s2, o) = row[o];
        }
    }
    for (auto& r : m.reward) r = 2.0 * unit(rng) - 1.0;
    return m;
}

} // namespace infoact
