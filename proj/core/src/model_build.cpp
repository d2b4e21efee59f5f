#include <algorithm>
#include <deque>
#include <random>
#include <set>
#include <sstream>

#include "epmc/expr.hpp"
#include "epmc/model.hpp"

namespace epmc {

namespace {

std::string state_desc(const std::vector<VariableDecl>& decls, const std::vector<long>& vals) {
    std::string s = "(";
    for (std::size_t i = 0; i < decls.size(); ++i) {
        if (i) s += ",";
        s += decls[i].name + "=" + std::to_string(vals[i]);
    }
    return s + ")";
}

struct ResolvedConstants {
    std::map<Variable, RationalFunction> substitution; // constants only
    std::set<std::string> parameter_names;
};

ResolvedConstants resolve_constants(const ModelSource& src) {
    ResolvedConstants rc;
    std::set<std::string> declared;
    for (const auto& c : src.constants) {
        if (!declared.insert(c.name).second)
            throw ModelError("constant " + c.name + " declared twice");
        if (!c.value_text) {
            rc.parameter_names.insert(c.name);
            continue;
        }
        RationalFunction value = parse_expression(*c.value_text).substituted(rc.substitution);
        for (const auto& v : value.variables())
            if (!rc.parameter_names.count(v.name()) && !declared.count(v.name()))
                throw UnknownIdentifier(v.name());
        rc.substitution.emplace(Variable(c.name), std::move(value));
    }
    return rc;
}

RationalFunction resolve_expr(const std::string& text, const ResolvedConstants& rc,
                              const std::set<std::string>& module_vars) {
    RationalFunction f = parse_expression(text).substituted(rc.substitution);
    for (const auto& v : f.variables()) {
        if (rc.parameter_names.count(v.name())) continue;
        if (module_vars.count(v.name()))
            throw ModelError("module variable " + v.name() +
                             " used in a probability or reward expression");
        throw UnknownIdentifier(v.name());
    }
    return f;
}

} // namespace

bool ParametricMC::is_absorbing(int s) const {
    const auto& row = transitions[s];
    return row.size() == 1 && row[0].target == s && row[0].probability.is_one();
}

const RationalFunction* ParametricMC::probability(int from, int to) const {
    for (const auto& t : transitions[from])
        if (t.target == to) return &t.probability;
    return nullptr;
}

bool ParametricMC::has_label(const std::string& name, int s) const {
    auto it = labels.find(name);
    return it != labels.end() && it->second[s];
}

std::vector<int> ParametricMC::states_with_label(const std::string& name) const {
    std::vector<int> out;
    auto it = labels.find(name);
    if (it == labels.end()) return out;
    for (int s = 0; s < num_states(); ++s)
        if (it->second[s]) out.push_back(s);
    return out;
}

ParametricMC build_states(const ModelSource& src, const BuildOptions& opts) {
    ResolvedConstants rc = resolve_constants(src);
    std::set<std::string> module_vars;
    for (const auto& v : src.variables)
        if (!module_vars.insert(v.name).second)
            throw ModelError("variable " + v.name + " declared twice");

    // Probability and reward expressions do not depend on the state, so
    // resolve them once up front.
    struct ResolvedCommand {
        const Command* cmd;
        std::vector<std::pair<RationalFunction, const CommandBranch*>> branches;
    };
    std::vector<ResolvedCommand> commands;
    for (const auto& cmd : src.commands) {
        ResolvedCommand r{&cmd, {}};
        for (const auto& br : cmd.branches) {
            RationalFunction p = resolve_expr(br.probability_text, rc, module_vars);
            if (p.is_zero()) continue;
            r.branches.emplace_back(std::move(p), &br);
        }
        commands.push_back(std::move(r));
    }

    std::vector<long> init_vals;
    for (const auto& v : src.variables) init_vals.push_back(v.init);

    std::map<std::vector<long>, int> index_of;
    std::vector<std::vector<long>> states;
    std::deque<int> queue;
    auto intern_state = [&](const std::vector<long>& vals) {
        auto it = index_of.find(vals);
        if (it != index_of.end()) return it->second;
        if (states.size() >= opts.max_states) throw StateSpaceExceeded(opts.max_states);
        int idx = static_cast<int>(states.size());
        states.push_back(vals);
        index_of.emplace(vals, idx);
        queue.push_back(idx);
        return idx;
    };
    intern_state(init_vals);

    ParametricMC mc;
    mc.init = 0;

    while (!queue.empty()) {
        int s = queue.front();
        queue.pop_front();
        std::map<std::string, long> env;
        for (std::size_t i = 0; i < src.variables.size(); ++i)
            env[src.variables[i].name] = states[s][i];

        const ResolvedCommand* enabled = nullptr;
        for (const auto& cand : commands) {
            if (!cand.cmd->guard.evaluate(env)) continue;
            if (enabled) throw OverlappingGuards(state_desc(src.variables, states[s]));
            enabled = &cand;
        }

        std::map<int, RationalFunction> row;
        if (!enabled || enabled->branches.empty()) {
            row.emplace(s, RationalFunction(1)); // deadlock completion
        } else {
            for (const auto& [prob, br] : enabled->branches) {
                std::vector<long> next = states[s];
                if (!br->update_var.empty()) {
                    auto vi = std::find_if(src.variables.begin(), src.variables.end(),
                                           [&](const VariableDecl& d) { return d.name == br->update_var; });
                    if (vi == src.variables.end()) throw UnknownIdentifier(br->update_var);
                    long value = br->update_expr.evaluate(env);
                    if (value < vi->lo || value > vi->hi)
                        throw UpdateOutOfRange(br->update_var, value);
                    next[vi - src.variables.begin()] = value;
                }
                int t = intern_state(next);
                auto [it, inserted] = row.emplace(t, prob);
                if (!inserted) it->second = it->second + prob;
            }
        }

        if (static_cast<int>(mc.transitions.size()) <= s) mc.transitions.resize(s + 1);
        RationalFunction sum;
        for (auto& [t, p] : row) {
            sum = sum + p;
            mc.transitions[s].push_back({t, std::move(p)});
        }
        if (!sum.is_one() &&
            (opts.row_sum_substitution.empty() ||
             !sum.substituted(opts.row_sum_substitution).is_one()))
            throw RowSumNotOne(state_desc(src.variables, states[s]), sum.str());
    }

    int n = static_cast<int>(states.size());
    mc.transitions.resize(n);
    for (int s = 0; s < n; ++s) mc.state_names.push_back(state_desc(src.variables, states[s]));

    for (const auto& l : src.labels) {
        std::vector<char> flags(n, 0);
        for (int s = 0; s < n; ++s) {
            std::map<std::string, long> env;
            for (std::size_t i = 0; i < src.variables.size(); ++i)
                env[src.variables[i].name] = states[s][i];
            flags[s] = l.expr.evaluate(env) ? 1 : 0;
        }
        mc.labels.emplace(l.name, std::move(flags));
    }

    for (const auto& block : src.rewards) {
        std::vector<RationalFunction> rho(n);
        std::vector<std::pair<const RewardItem*, RationalFunction>> items;
        for (const auto& item : block.items)
            items.emplace_back(&item, resolve_expr(item.expr_text, rc, module_vars));
        for (int s = 0; s < n; ++s) {
            std::map<std::string, long> env;
            for (std::size_t i = 0; i < src.variables.size(); ++i)
                env[src.variables[i].name] = states[s][i];
            for (const auto& [item, value] : items)
                if (item->guard.evaluate(env)) rho[s] = rho[s] + value;
        }
        mc.rewards.emplace(block.name, std::move(rho));
    }

    std::set<std::string> used_names(rc.parameter_names);
    for (const auto& name : used_names) mc.parameters.emplace_back(name);
    std::sort(mc.parameters.begin(), mc.parameters.end());
    return mc;
}

std::vector<Diagnostic> validate(const ParametricMC& mc, const ValidateOptions& opts) {
    std::vector<Diagnostic> out;
    int n = mc.num_states();

    for (int s = 0; s < n; ++s) {
        RationalFunction sum;
        for (const auto& t : mc.transitions[s]) sum = sum + t.probability;
        if (!sum.is_one())
            out.push_back({Diagnostic::Kind::RowSumNotOne,
                           "row of state " + std::to_string(s) + " sums to " + sum.str()});
    }

    std::vector<char> reached(n, 0);
    std::deque<int> queue{mc.init};
    reached[mc.init] = 1;
    while (!queue.empty()) {
        int s = queue.front();
        queue.pop_front();
        for (const auto& t : mc.transitions[s]) {
            if (!t.probability.is_zero() && !reached[t.target]) {
                reached[t.target] = 1;
                queue.push_back(t.target);
            }
        }
    }
    for (int s = 0; s < n; ++s)
        if (!reached[s])
            out.push_back({Diagnostic::Kind::Unreachable,
                           "state " + std::to_string(s) + " unreachable from the initial state"});

    // Sampled admissibility checks.
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> dist(opts.lo, opts.hi);
    for (int k = 0; k < opts.samples; ++k) {
        Valuation v;
        for (const auto& p : mc.parameters) v.set(p, dist(rng));
        bool prob_bad = false, reward_bad = false;
        for (int s = 0; s < n && !prob_bad; ++s) {
            for (const auto& t : mc.transitions[s]) {
                Rat x = t.probability.evaluate(v);
                if (x < Rat(0) || x > Rat(1)) {
                    out.push_back({Diagnostic::Kind::ProbabilityOutOfRange,
                                   "P(" + std::to_string(s) + "," + std::to_string(t.target) +
                                       ") = " + std::to_string(x.to_double()) + " at a sampled valuation"});
                    prob_bad = true;
                    break;
                }
            }
        }
        for (const auto& [name, rho] : mc.rewards) {
            for (int s = 0; s < n && !reward_bad; ++s) {
                if (rho[s].evaluate(v) < Rat(0)) {
                    out.push_back({Diagnostic::Kind::NegativeReward,
                                   "reward " + name + " negative in state " + std::to_string(s) +
                                       " at a sampled valuation"});
                    reward_bad = true;
                }
            }
        }
        if (prob_bad || reward_bad) break;
    }
    return out;
}

std::string to_model_text(const ParametricMC& mc, const std::string& module_name,
                          const std::vector<PatternAnnotation>& annotations) {
    std::ostringstream os;
    os << "dtmc\n\n";
    for (const auto& p : mc.parameters) os << "const double " << p.name() << ";\n";
    os << "\n";
    for (const auto& a : annotations) {
        os << "/// " << a.id << ": " << a.pattern_name << "(";
        for (std::size_t i = 0; i < a.actuals.size(); ++i) {
            if (i) os << ",";
            os << a.actuals[i];
        }
        os << ")\n";
    }
    if (!annotations.empty()) os << "\n";

    int n = mc.num_states();
    os << "module " << module_name << "\n";
    os << "  s : [0.." << (n - 1) << "] init " << mc.init << ";\n";
    for (int s = 0; s < n; ++s) {
        os << "  [] s=" << s << " -> ";
        const auto& row = mc.transitions[s];
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << " + ";
            os << "(" << row[i].probability.str() << "):(s'=" << row[i].target << ")";
        }
        os << ";\n";
    }
    os << "endmodule\n\n";

    for (const auto& [name, flags] : mc.labels) {
        std::vector<int> in;
        for (int s = 0; s < n; ++s)
            if (flags[s]) in.push_back(s);
        os << "label \"" << name << "\" = ";
        if (in.empty()) os << "false";
        for (std::size_t i = 0; i < in.size(); ++i) {
            if (i) os << " | ";
            os << "s=" << in[i];
        }
        os << ";\n";
    }

    for (const auto& [name, rho] : mc.rewards) {
        os << "\nrewards \"" << name << "\"\n";
        for (int s = 0; s < n; ++s)
            if (!rho[s].is_zero()) os << "  s=" << s << " : " << rho[s].str() << ";\n";
        os << "endrewards\n";
    }
    return os.str();
}

} // namespace epmc
