#include "epmc/fragments.hpp"

#include <algorithm>
#include <cassert>
#include <set>

namespace epmc::fragments {

bool Fragment::contains(int s) const {
    return std::binary_search(states.begin(), states.end(), s);
}

Fragment make_fragment(const ParametricMC& mc, const std::vector<int>& states) {
    if (states.empty()) throw FragmentError("fragment state set is empty");
    Fragment f;
    f.states = states;
    std::sort(f.states.begin(), f.states.end());
    f.states.erase(std::unique(f.states.begin(), f.states.end()), f.states.end());
    int n = mc.num_states();
    for (int s : f.states)
        if (s < 0 || s >= n) throw FragmentError("fragment state index out of range");
    if (static_cast<int>(f.states.size()) >= n)
        throw FragmentError("fragment must be a proper subset of the state space");

    for (int s : f.states)
        if (mc.is_absorbing(s)) throw AbsorbingInFragment(s);

    // Entry candidates: fragment states with an external predecessor, plus
    // the initial state when it lies inside the fragment.
    std::set<int> entries;
    if (f.contains(mc.init)) entries.insert(mc.init);
    for (int s = 0; s < n; ++s) {
        if (f.contains(s)) continue;
        for (const auto& t : mc.transitions[s])
            if (!t.probability.is_zero() && f.contains(t.target)) entries.insert(t.target);
    }
    if (entries.empty()) throw NoEntryState();
    if (entries.size() > 1) {
        std::string desc;
        for (int e : entries) desc += (desc.empty() ? "" : ", ") + std::to_string(e);
        throw MultipleEntryStates(std::vector<int>(entries.begin(), entries.end()), desc);
    }
    f.entry = *entries.begin();

    for (int z : f.states) {
        bool exits = false;
        for (const auto& t : mc.transitions[z])
            if (!t.probability.is_zero() && !f.contains(t.target)) exits = true;
        if (exits) f.outputs.push_back(z);
    }
    if (f.outputs.empty()) throw NoOutputStates();
    for (int z : f.outputs)
        for (const auto& t : mc.transitions[z])
            if (!t.probability.is_zero() && f.contains(t.target)) throw OutputBackEdge(z, t.target);
    return f;
}

std::string AssociatedMC::output_proposition(int host_state) const {
    return "out" + std::to_string(host_state);
}

AssociatedMC associated_mc(const ParametricMC& mc, const Fragment& f) {
    AssociatedMC a;
    int k = static_cast<int>(f.states.size());
    a.end_state = k;
    a.host_of = f.states;
    a.host_of.push_back(-1);
    for (int i = 0; i < k; ++i) a.index_of[f.states[i]] = i;

    a.mc.init = a.index_of.at(f.entry);
    a.mc.transitions.resize(k + 1);
    std::set<int> outputs(f.outputs.begin(), f.outputs.end());
    for (int i = 0; i < k; ++i) {
        int host = f.states[i];
        if (outputs.count(host)) {
            a.mc.transitions[i].push_back({a.end_state, RationalFunction(1)});
        } else {
            for (const auto& t : mc.transitions[host]) {
                if (t.probability.is_zero()) continue;
                assert(a.index_of.count(t.target)); // interior states stay inside
                a.mc.transitions[i].push_back({a.index_of.at(t.target), t.probability});
            }
        }
    }
    a.mc.transitions[a.end_state].push_back({a.end_state, RationalFunction(1)});

    for (const auto& [name, flags] : mc.labels) {
        std::vector<char> nf(k + 1, 0);
        for (int i = 0; i < k; ++i) nf[i] = flags[f.states[i]];
        a.mc.labels.emplace(name, std::move(nf));
    }
    for (int z : f.outputs) {
        std::vector<char> nf(k + 1, 0);
        nf[a.index_of.at(z)] = 1;
        a.mc.labels.emplace(a.output_proposition(z), std::move(nf));
    }
    {
        std::vector<char> nf(k + 1, 0);
        nf[a.end_state] = 1;
        a.mc.labels.emplace("end", std::move(nf));
    }

    for (const auto& [name, rho] : mc.rewards) {
        std::vector<RationalFunction> nr(k + 1);
        for (int i = 0; i < k; ++i) nr[i] = rho[f.states[i]];
        a.mc.rewards.emplace(name, std::move(nr));
    }

    std::set<Variable> params;
    for (const auto& row : a.mc.transitions)
        for (const auto& t : row) t.probability.collect_variables(params);
    for (const auto& [name, rho] : a.mc.rewards)
        for (const auto& r : rho) r.collect_variables(params);
    a.mc.parameters.assign(params.begin(), params.end());
    for (int i = 0; i <= k; ++i)
        a.mc.state_names.push_back(i == k ? "end" : mc.state_names.empty()
                                                        ? std::to_string(f.states[i])
                                                        : mc.state_names[f.states[i]]);
    return a;
}

AbstractMC induce_abstract(const ParametricMC& mc, const Fragment& f, AbstractMode mode,
                           const std::string& symbol_id, const engine::Options& opts) {
    AbstractMC r;
    int n = mc.num_states();

    // Abstract state ordering: host order with the abstract state taking the
    // entry's position.
    for (int s = 0; s < n; ++s) {
        if (f.contains(s)) {
            if (s == f.entry) {
                r.abstract_state = static_cast<int>(r.host_of.size());
                r.host_of.push_back(-1);
            }
            continue;
        }
        r.host_of.push_back(s);
    }
    for (int i = 0; i < static_cast<int>(r.host_of.size()); ++i)
        if (r.host_of[i] >= 0) r.index_of[r.host_of[i]] = i;
    for (int z : f.states) r.index_of[z] = r.abstract_state;

    // Per-output probabilities and per-structure fragment rewards.
    AssociatedMC assoc = associated_mc(mc, f);
    if (mode == AbstractMode::Computed) {
        for (int z : f.outputs) {
            RationalFunction p = engine::reach_probability(assoc.mc, {assoc.index_of.at(z)}, opts);
            r.output_probabilities.emplace_back(z, std::move(p));
        }
        for (const auto& [name, rho] : mc.rewards) {
            auto res = engine::reach_reward(assoc.mc, name, {assoc.end_state}, opts);
            r.fragment_rewards.emplace(name, std::move(res.value));
        }
    } else {
        int k = static_cast<int>(f.outputs.size());
        RationalFunction sum;
        for (int i = 0; i < k; ++i) {
            RationalFunction p;
            if (i + 1 < k) {
                std::string name = "prob" + symbol_id;
                if (k > 2) name += "_" + std::to_string(i + 1);
                p = RationalFunction::variable(name);
                sum = sum + p;
            } else {
                p = 1 - sum; // complement keeps rows summing to 1
            }
            r.output_probabilities.emplace_back(f.outputs[i], std::move(p));
        }
        for (const auto& [name, rho] : mc.rewards)
            r.fragment_rewards.emplace(name, RationalFunction::variable(name + symbol_id));
    }

    int m = static_cast<int>(r.host_of.size());
    r.mc.init = r.index_of.at(mc.init);
    r.mc.transitions.resize(m);
    for (int i = 0; i < m; ++i) {
        int host = r.host_of[i];
        std::map<int, RationalFunction> row;
        if (host < 0) {
            for (const auto& [z, pz] : r.output_probabilities) {
                for (const auto& t : mc.transitions[z]) {
                    if (t.probability.is_zero()) continue;
                    int img = r.index_of.at(t.target);
                    RationalFunction add = pz * t.probability;
                    auto [it, inserted] = row.emplace(img, add);
                    if (!inserted) it->second = it->second + add;
                }
            }
        } else {
            for (const auto& t : mc.transitions[host]) {
                if (t.probability.is_zero()) continue;
                assert(!f.contains(t.target) || t.target == f.entry);
                int img = r.index_of.at(t.target);
                auto [it, inserted] = row.emplace(img, t.probability);
                if (!inserted) it->second = it->second + t.probability;
            }
        }
        for (auto& [t, p] : row)
            if (!p.is_zero()) r.mc.transitions[i].push_back({t, std::move(p)});
    }

    for (const auto& [name, flags] : mc.labels) {
        std::vector<char> nf(m, 0);
        bool common = true;
        for (int z : f.states) common = common && flags[z];
        for (int i = 0; i < m; ++i) nf[i] = r.host_of[i] < 0 ? common : flags[r.host_of[i]];
        r.mc.labels.emplace(name, std::move(nf));
    }

    for (const auto& [name, rho] : mc.rewards) {
        std::vector<RationalFunction> nr(m);
        for (int i = 0; i < m; ++i)
            nr[i] = r.host_of[i] < 0 ? r.fragment_rewards.at(name) : rho[r.host_of[i]];
        r.mc.rewards.emplace(name, std::move(nr));
    }

    std::set<Variable> params(mc.parameters.begin(), mc.parameters.end());
    for (const auto& row : r.mc.transitions)
        for (const auto& t : row) t.probability.collect_variables(params);
    for (const auto& [name, rho] : r.mc.rewards)
        for (const auto& x : rho) x.collect_variables(params);
    r.mc.parameters.assign(params.begin(), params.end());

    for (int i = 0; i < m; ++i)
        r.mc.state_names.push_back(r.host_of[i] < 0 ? "zbar"
                                   : mc.state_names.empty() ? std::to_string(r.host_of[i])
                                                            : mc.state_names[r.host_of[i]]);
    return r;
}

bool check_until_precondition(const ParametricMC& mc, const Fragment& f, const StateFormula& phi1,
                              const StateFormula& phi2) {
    std::vector<std::string> atoms;
    phi1.collect_atoms(atoms);
    phi2.collect_atoms(atoms);
    for (const auto& a : atoms) {
        auto it = mc.labels.find(a);
        if (it == mc.labels.end()) throw UnknownAtom(a);
        int count = 0;
        for (int z : f.states) count += it->second[z] ? 1 : 0;
        if (count != 0 && count != static_cast<int>(f.states.size())) return false;
    }
    return true;
}

bool check_reward_precondition(const Fragment& f, const std::vector<int>& target) {
    for (int t : target)
        if (f.contains(t)) return false;
    return true;
}

} // namespace epmc::fragments
