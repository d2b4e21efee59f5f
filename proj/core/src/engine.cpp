#include "epmc/engine.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace epmc::engine {

namespace {

std::vector<std::vector<int>> predecessors(const ParametricMC& mc) {
    std::vector<std::vector<int>> pred(mc.num_states());
    for (int s = 0; s < mc.num_states(); ++s)
        for (const auto& t : mc.transitions[s])
            if (!t.probability.is_zero()) pred[t.target].push_back(s);
    return pred;
}

std::vector<char> flags_from(const std::vector<int>& states, int n) {
    std::vector<char> f(n, 0);
    for (int s : states) f[s] = 1;
    return f;
}

} // namespace

QualitativeResult qualitative_reach(const ParametricMC& mc, const std::vector<char>& target,
                                    const std::vector<char>& blocked) {
    int n = mc.num_states();
    auto pred = predecessors(mc);

    // States that can reach the target without passing through a blocked
    // state (backward closure of the target).
    std::vector<char> can_reach(n, 0);
    std::deque<int> queue;
    for (int s = 0; s < n; ++s)
        if (target[s]) {
            can_reach[s] = 1;
            queue.push_back(s);
        }
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int u : pred[v]) {
            if (can_reach[u] || blocked[u] || target[u]) continue;
            can_reach[u] = 1;
            queue.push_back(u);
        }
    }

    QualitativeResult q;
    q.no.assign(n, 0);
    for (int s = 0; s < n; ++s) q.no[s] = !can_reach[s];

    // Probability-1 states: those that cannot reach a probability-0 state
    // (with targets absorbed).
    std::vector<char> bad = q.no;
    queue.clear();
    for (int s = 0; s < n; ++s)
        if (bad[s]) queue.push_back(s);
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int u : pred[v]) {
            if (bad[u] || target[u]) continue;
            bad[u] = 1;
            queue.push_back(u);
        }
    }
    q.yes.assign(n, 0);
    q.maybe.assign(n, 0);
    for (int s = 0; s < n; ++s) {
        q.yes[s] = !bad[s];
        q.maybe[s] = !q.yes[s] && !q.no[s];
    }
    return q;
}

std::vector<int> pivot_order(const ParametricMC& mc, const std::vector<char>& in_system) {
    int n = mc.num_states();
    std::vector<std::set<int>> nbr(n);
    for (int s = 0; s < n; ++s) {
        if (!in_system[s]) continue;
        for (const auto& t : mc.transitions[s]) {
            if (t.probability.is_zero() || t.target == s || !in_system[t.target]) continue;
            nbr[s].insert(t.target);
            nbr[t.target].insert(s);
        }
    }
    std::vector<char> eliminated(n, 0);
    std::vector<int> order;
    int remaining = 0;
    for (int s = 0; s < n; ++s)
        if (in_system[s]) ++remaining;
    while (remaining > 0) {
        int best = -1;
        std::size_t best_deg = 0;
        for (int s = 0; s < n; ++s) {
            if (!in_system[s] || eliminated[s]) continue;
            std::size_t d = nbr[s].size();
            if (best < 0 || d < best_deg) {
                best = s;
                best_deg = d;
            }
        }
        order.push_back(best);
        eliminated[best] = 1;
        --remaining;
        // simulate fill-in
        for (int a : nbr[best]) nbr[a].erase(best);
        for (int a : nbr[best])
            for (int b : nbr[best])
                if (a != b) nbr[a].insert(b);
        nbr[best].clear();
    }
    return order;
}

RationalFunction solve_linear_system(const ParametricMC& mc, const std::vector<char>& in_system,
                                     const std::vector<RationalFunction>& constant_part,
                                     const std::vector<int>& order, int wanted_state) {
    int n = mc.num_states();
    // Sparse rows x_s = b_s + sum coeff[s][t] * x_t over system states.
    std::vector<std::map<int, RationalFunction>> coeff(n);
    std::vector<RationalFunction> b(n);
    std::vector<std::set<int>> users(n); // states whose row references t

    for (int s = 0; s < n; ++s) {
        if (!in_system[s]) continue;
        b[s] = constant_part[s];
        for (const auto& t : mc.transitions[s]) {
            if (t.probability.is_zero() || !in_system[t.target]) continue;
            auto [it, inserted] = coeff[s].emplace(t.target, t.probability);
            if (!inserted) it->second = it->second + t.probability;
            users[t.target].insert(s);
        }
    }

    auto remove_self_loop = [&](int e) {
        auto self = coeff[e].find(e);
        if (self == coeff[e].end()) return;
        RationalFunction scale = 1 - self->second;
        if (scale.is_zero())
            throw SingularSystem("self-loop probability cancels to 1 at state " + std::to_string(e));
        coeff[e].erase(self);
        users[e].erase(e);
        RationalFunction inv = RationalFunction(1) / scale;
        b[e] = b[e] * inv;
        for (auto& [t, a] : coeff[e]) a = a * inv;
    };

    for (int e : order) {
        if (e == wanted_state) continue;
        remove_self_loop(e);
        // substitute x_e into every row that references it
        std::set<int> referencing = users[e];
        for (int s : referencing) {
            if (s == e) continue;
            auto it = coeff[s].find(e);
            if (it == coeff[s].end()) continue;
            RationalFunction a_se = it->second;
            coeff[s].erase(it);
            if (!b[e].is_zero()) b[s] = b[s] + a_se * b[e];
            for (const auto& [t, a_et] : coeff[e]) {
                auto [jt, inserted] = coeff[s].emplace(t, a_se * a_et);
                if (!inserted) jt->second = jt->second + a_se * a_et;
                if (jt->second.is_zero()) {
                    coeff[s].erase(jt);
                    users[t].erase(s);
                } else {
                    users[t].insert(s);
                }
            }
        }
        users[e].clear();
        coeff[e].clear();
        b[e] = RationalFunction();
    }

    remove_self_loop(wanted_state);
    if (!coeff[wanted_state].empty())
        throw SingularSystem("unexpected residual coefficients after elimination");
    return b[wanted_state];
}

namespace {

RationalFunction reach_in(const ParametricMC& mc, const std::vector<char>& target,
                          const std::vector<char>& blocked) {
    QualitativeResult q = qualitative_reach(mc, target, blocked);
    int init = mc.init;
    if (q.yes[init]) return RationalFunction(1);
    if (q.no[init]) return RationalFunction();

    int n = mc.num_states();
    std::vector<RationalFunction> constant(n);
    for (int s = 0; s < n; ++s) {
        if (!q.maybe[s]) continue;
        for (const auto& t : mc.transitions[s])
            if (q.yes[t.target] && !t.probability.is_zero())
                constant[s] = constant[s] + t.probability;
    }
    auto order = pivot_order(mc, q.maybe);
    return solve_linear_system(mc, q.maybe, constant, order, init);
}

} // namespace

RationalFunction reach_probability(const ParametricMC& mc, const std::vector<int>& target,
                                   const Options& opts) {
    ComputeBudget budget(opts.deadline, opts.term_limit);
    int n = mc.num_states();
    std::vector<char> tf = flags_from(target, n);
    std::vector<char> blocked(n, 0);
    return reach_in(mc, tf, blocked);
}

RationalFunction until_probability(const ParametricMC& mc, const StateFormula& phi1,
                                   const StateFormula& phi2, const Options& opts) {
    ComputeBudget budget(opts.deadline, opts.term_limit);
    int n = mc.num_states();
    auto sat1 = sat_states(mc, phi1);
    auto sat2 = sat_states(mc, phi2);
    std::vector<char> blocked(n, 0);
    for (int s = 0; s < n; ++s) blocked[s] = !sat1[s] && !sat2[s];
    return reach_in(mc, sat2, blocked);
}

RewardResult reach_reward(const ParametricMC& mc, const std::string& structure,
                          const std::vector<int>& target, const Options& opts) {
    ComputeBudget budget(opts.deadline, opts.term_limit);
    auto rit = mc.rewards.find(structure);
    if (rit == mc.rewards.end()) throw UnknownRewardStructure(structure);
    const auto& rho = rit->second;

    int n = mc.num_states();
    std::vector<char> tf = flags_from(target, n);
    std::vector<char> blocked(n, 0);
    QualitativeResult q = qualitative_reach(mc, tf, blocked);
    if (!q.yes[mc.init]) {
        // Target reached with probability < 1: the expected reward is 0 by
        // the adopted convention, with a diagnostic for callers expecting
        // the infinity convention.
        return {RationalFunction(), true};
    }
    if (tf[mc.init]) return {RationalFunction(), false};

    std::vector<char> in_system(n, 0);
    std::vector<RationalFunction> constant(n);
    for (int s = 0; s < n; ++s) {
        if (!q.yes[s] || tf[s]) continue;
        in_system[s] = 1;
        constant[s] = rho[s];
    }
    auto order = pivot_order(mc, in_system);
    return {solve_linear_system(mc, in_system, constant, order, mc.init), false};
}

RationalFunction query_probability(const ParametricMC& mc, const Query& q, const Options& opts) {
    switch (q.kind) {
    case Query::Kind::ProbReach:
    case Query::Kind::ProbUntil: return until_probability(mc, q.phi1, q.phi2, opts);
    case Query::Kind::RewardReach: break;
    }
    throw EngineError("query_probability called with a reward query");
}

RewardResult query_reward(const ParametricMC& mc, const Query& q, const Options& opts) {
    if (q.kind != Query::Kind::RewardReach)
        throw EngineError("query_reward called with a probability query");
    auto sat2 = sat_states(mc, q.phi2);
    std::vector<int> target;
    for (int s = 0; s < mc.num_states(); ++s)
        if (sat2[s]) target.push_back(s);
    return reach_reward(mc, q.reward_structure, target, opts);
}

} // namespace epmc::engine
