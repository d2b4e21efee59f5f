#include "epmc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <sstream>

#include <Eigen/Dense>

namespace epmc::oracle {

ConcreteMC specialize(const ParametricMC& mc, const Valuation& v) {
    ConcreteMC c;
    c.init = mc.init;
    c.transitions.resize(mc.num_states());
    for (int s = 0; s < mc.num_states(); ++s) {
        double sum = 0;
        for (const auto& t : mc.transitions[s]) {
            Rat x = t.probability.evaluate(v);
            if (x < Rat(0) || x > Rat(1))
                throw ValueOutOfRange("P(" + std::to_string(s) + "," + std::to_string(t.target) +
                                      ") = " + x.str() + " outside [0,1]");
            double d = x.to_double();
            sum += d;
            c.transitions[s].emplace_back(t.target, d);
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw ValueOutOfRange("row " + std::to_string(s) + " sums to " + std::to_string(sum));
    }
    c.labels = mc.labels;
    for (const auto& [name, rho] : mc.rewards) {
        std::vector<double> r(mc.num_states());
        for (int s = 0; s < mc.num_states(); ++s) r[s] = rho[s].evaluate(v).to_double();
        c.rewards.emplace(name, std::move(r));
    }
    return c;
}

namespace {

std::vector<char> sat_concrete(const ConcreteMC& c, const StateFormula& f) {
    int n = c.num_states();
    std::vector<char> out(n, 0);
    switch (f.kind()) {
    case StateFormula::Kind::True:
        std::fill(out.begin(), out.end(), 1);
        break;
    case StateFormula::Kind::Atom: {
        auto it = c.labels.find(f.atom_name());
        if (it == c.labels.end()) throw UnknownAtom(f.atom_name());
        out = it->second;
        break;
    }
    case StateFormula::Kind::Not: {
        auto a = sat_concrete(c, f.child(0));
        for (int s = 0; s < n; ++s) out[s] = !a[s];
        break;
    }
    case StateFormula::Kind::And: {
        auto a = sat_concrete(c, f.child(0));
        auto b = sat_concrete(c, f.child(1));
        for (int s = 0; s < n; ++s) out[s] = a[s] && b[s];
        break;
    }
    case StateFormula::Kind::Or: {
        auto a = sat_concrete(c, f.child(0));
        auto b = sat_concrete(c, f.child(1));
        for (int s = 0; s < n; ++s) out[s] = a[s] || b[s];
        break;
    }
    }
    return out;
}

struct Sets {
    std::vector<char> yes, no, maybe;
};

Sets qualitative(const ConcreteMC& c, const std::vector<char>& target,
                 const std::vector<char>& blocked) {
    int n = c.num_states();
    std::vector<std::vector<int>> pred(n);
    for (int s = 0; s < n; ++s)
        for (const auto& [t, p] : c.transitions[s])
            if (p > 0) pred[t].push_back(s);

    std::vector<char> can_reach(n, 0);
    std::deque<int> q;
    for (int s = 0; s < n; ++s)
        if (target[s]) {
            can_reach[s] = 1;
            q.push_back(s);
        }
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (int u : pred[v])
            if (!can_reach[u] && !blocked[u] && !target[u]) {
                can_reach[u] = 1;
                q.push_back(u);
            }
    }
    Sets sets;
    sets.no.assign(n, 0);
    for (int s = 0; s < n; ++s) sets.no[s] = !can_reach[s];
    std::vector<char> bad = sets.no;
    for (int s = 0; s < n; ++s)
        if (bad[s]) q.push_back(s);
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (int u : pred[v])
            if (!bad[u] && !target[u]) {
                bad[u] = 1;
                q.push_back(u);
            }
    }
    sets.yes.assign(n, 0);
    sets.maybe.assign(n, 0);
    for (int s = 0; s < n; ++s) {
        sets.yes[s] = !bad[s];
        sets.maybe[s] = !sets.yes[s] && !sets.no[s];
    }
    return sets;
}

double solve_lu(const ConcreteMC& c, const std::vector<char>& in_system,
                const std::vector<double>& constant, int wanted) {
    std::vector<int> idx(c.num_states(), -1);
    std::vector<int> states;
    for (int s = 0; s < c.num_states(); ++s)
        if (in_system[s]) {
            idx[s] = static_cast<int>(states.size());
            states.push_back(s);
        }
    int m = static_cast<int>(states.size());
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(m, m);
    Eigen::VectorXd b(m);
    for (int i = 0; i < m; ++i) {
        b(i) = constant[states[i]];
        for (const auto& [t, p] : c.transitions[states[i]])
            if (idx[t] >= 0) A(i, idx[t]) -= p;
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    double det = std::abs(lu.determinant());
    if (!(det > 0) || !std::isfinite(det)) throw OracleError("singular linear system");
    Eigen::VectorXd x = lu.solve(b);
    return x(idx[wanted]);
}

double reach_value(const ConcreteMC& c, const std::vector<char>& target,
                   const std::vector<char>& blocked) {
    Sets sets = qualitative(c, target, blocked);
    if (sets.yes[c.init]) return 1.0;
    if (sets.no[c.init]) return 0.0;
    int n = c.num_states();
    std::vector<double> constant(n, 0.0);
    for (int s = 0; s < n; ++s) {
        if (!sets.maybe[s]) continue;
        for (const auto& [t, p] : c.transitions[s])
            if (sets.yes[t]) constant[s] += p;
    }
    return solve_lu(c, sets.maybe, constant, c.init);
}

} // namespace

double numeric_check(const ConcreteMC& c, const Query& q) {
    int n = c.num_states();
    if (q.kind == Query::Kind::RewardReach) {
        auto it = c.rewards.find(q.reward_structure);
        if (it == c.rewards.end()) throw UnknownRewardStructure(q.reward_structure);
        auto target = sat_concrete(c, q.phi2);
        std::vector<char> blocked(n, 0);
        Sets sets = qualitative(c, target, blocked);
        if (!sets.yes[c.init]) return 0.0; // probability < 1 convention
        if (target[c.init]) return 0.0;
        std::vector<char> in_system(n, 0);
        std::vector<double> constant(n, 0.0);
        for (int s = 0; s < n; ++s) {
            if (!sets.yes[s] || target[s]) continue;
            in_system[s] = 1;
            constant[s] = it->second[s];
        }
        return solve_lu(c, in_system, constant, c.init);
    }
    auto sat1 = sat_concrete(c, q.phi1);
    auto sat2 = sat_concrete(c, q.phi2);
    std::vector<char> blocked(n, 0);
    for (int s = 0; s < n; ++s) blocked[s] = !sat1[s] && !sat2[s];
    return reach_value(c, sat2, blocked);
}

Valuation sample_admissible(const std::vector<Variable>& params, std::mt19937_64& rng,
                            const SampleSpec& spec) {
    Valuation v;
    std::set<std::string> in_simplex;
    for (const auto& g : spec.simplex_groups)
        for (const auto& name : g) in_simplex.insert(name);

    std::uniform_real_distribution<double> uni(spec.lo, spec.hi);
    for (const auto& p : params) {
        if (in_simplex.count(p.name())) continue;
        // Dyadic rational close to the uniform draw keeps evaluation exact.
        double d = uni(rng);
        v.set(p, Rat(static_cast<long>(d * (1 << 20)), 1L << 20));
    }
    for (const auto& g : spec.simplex_groups) {
        // Normalized positive weights; exact rational normalization makes the
        // group sum exactly 1.
        std::vector<Rat> w;
        Rat total(0);
        std::uniform_int_distribution<long> wd(1, 1 << 16);
        for (std::size_t i = 0; i < g.size(); ++i) {
            Rat x(wd(rng));
            total += x;
            w.push_back(x);
        }
        for (std::size_t i = 0; i < g.size(); ++i) v.set(Variable(g[i]), w[i] / total);
    }
    return v;
}

FragmentCase random_fragment_model(std::uint64_t seed, int size_bound) {
    if (size_bound < 4) throw OracleError("size_bound must be >= 4");
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 1);
    auto chance = [&](double p) { return std::uniform_real_distribution<double>(0, 1)(rng) < p; };

    // Layout: s0 (exterior entry), fragment z0..z_{k-1} with the last one or
    // two states as outputs, decision state d, absorbing goal and trap.
    int max_interior = std::max(3, size_bound - 4);
    int k = std::uniform_int_distribution<int>(2, std::min(5, max_interior))(rng);
    int outputs = k >= 3 && chance(0.6) ? 2 : 1;
    int frag_lo = 1; // fragment states are 1..k
    int d = k + 1, goal = k + 2, trap = k + 3;
    int n = k + 4;

    FragmentCase fc;
    fc.mc.init = 0;
    fc.mc.transitions.resize(n);
    int param_idx = 0;
    auto fresh_param = [&]() {
        return RationalFunction::variable(Variable("q" + std::to_string(param_idx++)));
    };
    auto add_row = [&](int from, std::vector<std::pair<int, RationalFunction>> entries) {
        std::map<int, RationalFunction> merged;
        for (auto& [t, p] : entries) {
            auto [it, inserted] = merged.emplace(t, p);
            if (!inserted) it->second = it->second + p;
        }
        for (auto& [t, p] : merged)
            if (!p.is_zero()) fc.mc.transitions[from].push_back({t, p});
    };
    auto split2 = [&](int from, int to_a, int to_b) {
        RationalFunction p = chance(0.25)
                                 ? RationalFunction(Rat(std::uniform_int_distribution<long>(1, 7)(rng), 8))
                                 : fresh_param();
        add_row(from, {{to_a, p}, {to_b, 1 - p}});
    };
    auto split3 = [&](int from, int to_a, int to_b, int to_c) {
        RationalFunction p = fresh_param();
        RationalFunction q = fresh_param();
        add_row(from, {{to_a, p}, {to_b, (1 - p) * q}, {to_c, (1 - p) * (1 - q)}});
    };

    // s0 enters the fragment at z0 or skips to the decision state.
    split2(0, frag_lo, d);

    int out1 = frag_lo + k - outputs; // first output state
    int out2 = outputs == 2 ? out1 + 1 : out1;
    int last_interior = out1 - 1;
    for (int z = frag_lo; z <= last_interior; ++z) {
        int next = z + 1;
        bool want_cycle = z > frag_lo && chance(0.45);
        if (z == last_interior && outputs == 2) {
            if (want_cycle) {
                fc.has_cycle = true;
                int back = std::uniform_int_distribution<int>(frag_lo, z - 1)(rng);
                split3(z, out1, back, out2);
            } else {
                split2(z, out1, out2);
            }
        } else if (want_cycle) {
            fc.has_cycle = true;
            int back = std::uniform_int_distribution<int>(frag_lo, z - 1)(rng);
            split3(z, next, back, out1);
        } else {
            split2(z, next, out1);
        }
    }
    // Output states leave the fragment.
    for (int z = out1; z < frag_lo + k; ++z) {
        switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
        case 0: split2(z, d, trap); break;
        case 1: split2(z, goal, d); break;
        default: split2(z, goal, trap); break;
        }
    }
    // Decision state: may re-enter the fragment.
    if (chance(0.5)) {
        split3(d, frag_lo, goal, trap);
    } else {
        split2(d, goal, trap);
    }
    add_row(goal, {{goal, RationalFunction(1)}});
    add_row(trap, {{trap, RationalFunction(1)}});

    for (int z = frag_lo; z < frag_lo + k; ++z) fc.fragment_states.push_back(z);

    // Labels: "a" uniform over the fragment, "goal"/"done" outside, and a
    // deliberately non-uniform "viol" on a single fragment state.
    bool a_on_fragment = chance(0.5);
    std::vector<char> a_flags(n, 0), goal_flags(n, 0), done_flags(n, 0), viol_flags(n, 0);
    for (int z = frag_lo; z < frag_lo + k; ++z) a_flags[z] = a_on_fragment;
    if (a_on_fragment) a_flags[0] = 1;
    if (chance(0.4)) a_flags[d] = 1;
    goal_flags[goal] = 1;
    done_flags[goal] = 1;
    done_flags[trap] = 1;
    viol_flags[frag_lo + std::uniform_int_distribution<int>(0, k - 1)(rng)] = 1;
    fc.mc.labels.emplace("a", std::move(a_flags));
    fc.mc.labels.emplace("goal", std::move(goal_flags));
    fc.mc.labels.emplace("done", std::move(done_flags));
    fc.mc.labels.emplace("viol", std::move(viol_flags));
    fc.non_uniform_atom = "viol";
    fc.violating_reward_target = {frag_lo};

    // Reward structure: small nonnegative constants on transient states.
    std::vector<RationalFunction> rho(n);
    for (int s = 0; s < goal; ++s)
        rho[s] = RationalFunction(Rat(std::uniform_int_distribution<long>(0, 12)(rng), 4));
    fc.mc.rewards.emplace("w", std::move(rho));

    std::set<Variable> params;
    for (const auto& row : fc.mc.transitions)
        for (const auto& t : row) t.probability.collect_variables(params);
    fc.mc.parameters.assign(params.begin(), params.end());
    for (int s = 0; s < n; ++s) fc.mc.state_names.push_back("s" + std::to_string(s));

    fc.until_query = parse_property(a_on_fragment && chance(0.5) ? "P=? [ \"a\" U \"goal\" ]"
                                    : chance(0.5)                ? "P=? [ !\"a\" U \"goal\" ]"
                                                                 : "P=? [ F \"goal\" ]");
    fc.reward_query = parse_property("R{\"w\"}=? [ F \"done\" ]");
    return fc;
}

std::string EquivalenceReport::text() const {
    std::ostringstream os;
    os << (pass ? "PASS" : "FAIL") << " " << name << " samples=" << samples << " tol=" << tol
       << " max_diff=" << max_diff;
    if (!note.empty()) os << " note=" << note;
    return os.str();
}

std::string EquivalenceReport::json() const {
    std::ostringstream os;
    os << "{\"name\":\"" << name << "\",\"pass\":" << (pass ? "true" : "false")
       << ",\"samples\":" << samples << ",\"tol\":" << tol << ",\"max_diff\":" << max_diff
       << ",\"note\":\"" << note << "\"}";
    return os.str();
}

EquivalenceReport equivalence_report(const RationalFunction& symbolic, const ParametricMC& model,
                                     const Query& query, int samples, double tol,
                                     const SampleSpec& spec, std::uint64_t seed) {
    EquivalenceReport rep;
    rep.name = query.text;
    rep.samples = samples;
    rep.tol = tol;
    std::mt19937_64 rng(seed);
    int done = 0, guard = 0;
    while (done < samples && guard < samples * 20) {
        ++guard;
        Valuation v = sample_admissible(model.parameters, rng, spec);
        try {
            double sym = symbolic.evaluate_double(v);
            double num = numeric_check(specialize(model, v), query);
            rep.max_diff = std::max(rep.max_diff, std::abs(sym - num));
            ++done;
        } catch (const DenominatorZeroAtPoint&) {
            // resample
        }
    }
    rep.samples = done;
    rep.pass = done == samples && rep.max_diff <= tol;
    if (done < samples) rep.note = "could not draw enough admissible samples";
    return rep;
}

} // namespace epmc::oracle
