#pragma once

#include "infoact/approx_solvers.hpp"
#include "infoact/belief.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <memory>
#include <unordered_map>
#include <vector>

namespace infoact {

/// V*, Q*(., a) and the argmax set at one (belief, remaining horizon) node.
struct CacheEntry {
    double value = 0.0;
    std::vector<double> q;
    std::vector<ActionId> argmax;
};

/**
 * Write-once map from BeliefKey to CacheEntry.
 *
 * Every construction bumps a process-wide counter so callers can prove that a
 * code path never built one.
 */
class OptimalCache {
public:
    OptimalCache() { constructed_counter().fetch_add(1, std::memory_order_relaxed); }

    const CacheEntry* find(const BeliefKey& key) const {
        auto it = map_.find(key);
        return it == map_.end() ? nullptr : &it->second;
    }

    /// Inserts if absent. A repeat write must carry the same value.
    const CacheEntry& insert(BeliefKey key, CacheEntry entry) {
        double value = entry.value;
        auto [it, fresh] = map_.emplace(std::move(key), std::move(entry));
        if (!fresh && std::abs(it->second.value - value) > kTolerance)
            throw AssertionFailure("optimal-value cache written twice with different values");
        return it->second;
    }

    std::size_t size() const noexcept { return map_.size(); }

    static std::size_t constructed_count() { return constructed_counter().load(std::memory_order_relaxed); }

private:
    static std::atomic<std::size_t>& constructed_counter() {
        static std::atomic<std::size_t> counter{0};
        return counter;
    }

    std::unordered_map<BeliefKey, CacheEntry, BeliefKeyHash> map_;
};

struct ExactOptions {
    std::size_t node_cap = 1'000'000;
    bool memoize = true;
};

/// Optimal finite-horizon POMDP values by memoized expectimax over beliefs.
class ExactSolver {
public:
    explicit ExactSolver(const TabularPomdp& model, ExactOptions opts = {})
        : m_(model), opts_(opts), cache_(std::make_unique<OptimalCache>()) {}

    CacheEntry solve(const Belief& b, int t) {
        if (t < 1) throw Error("remaining horizon must be >= 1");
        BeliefKey key(b, t);
        if (opts_.memoize)
            if (const auto* hit = cache_->find(key)) return *hit;
        if (++expanded_ > opts_.node_cap) throw TreeBudgetExceeded(opts_.node_cap);

        CacheEntry e;
        e.q.resize(m_.n_actions());
        e.value = -std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < m_.n_actions(); ++a) {
            double q = belief_reward(m_, b, ActionId(a));
            if (t > 1)
                for (const auto& br : continuation_branches(m_, b, ActionId(a))) q += br.prob * solve(br.next, t - 1).value;
            e.q[a] = q;
            e.value = std::max(e.value, q);
        }
        for (std::size_t a = 0; a < m_.n_actions(); ++a)
            if (e.q[a] >= e.value - kTolerance) e.argmax.emplace_back(a);
        if (opts_.memoize) return cache_->insert(std::move(key), std::move(e));
        return e;
    }

    double v_star(const Belief& b, int t) { return solve(b, t).value; }
    double q_star(const Belief& b, ActionId a, int t) { return solve(b, t).q.at(a.index); }
    double v_star() { return v_star(m_.start(), m_.horizon); }

    /**
     * Table policy over every belief reachable from b0 when any optimal action
     * may be taken. Each entry stores the full argmax set.
     */
    PolicySpec extract_policy(TieRule tie_rule = TieRule::lexicographic) {
        auto table = std::make_shared<PolicyTable>();
        fill_table(m_.start(), m_.horizon, *table);
        return PolicySpec::from_table(PolicyKind::exact, std::move(table), tie_rule);
    }

    /**
     * Alpha vector of the optimal conditional plan rooted at (b, t): the plan
     * takes the first argmax action and follows the same rule in every child.
     * alpha(s) is the plan's expected return started in s; alpha . b = V*(b, t).
     * Observation branches with zero probability under b get a zero child.
     */
    std::vector<double> plan_alpha(const Belief& b, int t) {
        const auto ns = m_.n_states();
        auto a = solve(b, t).argmax.front().index;
        std::vector<double> alpha(ns, 0.0);
        for (std::size_t s = 0; s < ns; ++s) alpha[s] = m_.R(s, a);
        if (t == 1) return alpha;
        std::vector<std::vector<double>> child(m_.n_obs());
        for (const auto& br : continuation_branches(m_, b, ActionId(a))) child[br.obs.index] = plan_alpha(br.next, t - 1);
        for (std::size_t s = 0; s < ns; ++s) {
            if (m_.is_terminal(s, a)) continue;
            double cont = 0.0;
            for (std::size_t s2 = 0; s2 < ns; ++s2) {
                double p = m_.T(a, s, s2);
                if (p == 0.0) continue;
                for (std::size_t o = 0; o < m_.n_obs(); ++o)
                    if (!child[o].empty()) cont += p * m_.Z(a, s2, o) * child[o][s2];
            }
            alpha[s] += cont;
        }
        return alpha;
    }

    std::size_t nodes_expanded() const noexcept { return expanded_; }
    std::size_t cache_size() const noexcept { return cache_->size(); }
    const TabularPomdp& model() const noexcept { return m_; }

private:
    void fill_table(const Belief& b, int t, PolicyTable& table) {
        if (t == 0) return;
        BeliefKey key(b, t);
        if (table.contains(key)) return;
        auto entry = solve(b, t);
        table.emplace(std::move(key), entry.argmax);
        if (t == 1) return;
        for (auto a : entry.argmax)
            for (const auto& br : continuation_branches(m_, b, a)) fill_table(br.next, t - 1, table);
    }

    const TabularPomdp& m_;
    ExactOptions opts_;
    std::unique_ptr<OptimalCache> cache_;
    std::size_t expanded_ = 0;
};

inline double v_star(const TabularPomdp& m, const Belief& b, int t, ExactOptions opts = {}) {
    return ExactSolver(m, opts).v_star(b, t);
}

inline double q_star(const TabularPomdp& m, const Belief& b, ActionId a, int t, ExactOptions opts = {}) {
    return ExactSolver(m, opts).q_star(b, a, t);
}

inline PolicySpec extract_policy(const TabularPomdp& m, TieRule tie_rule = TieRule::lexicographic,
                                 ExactOptions opts = {}) {
    return ExactSolver(m, opts).extract_policy(tie_rule);
}

} // namespace infoact
