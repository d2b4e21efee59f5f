#include "epmc/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

#include "epmc/expr.hpp"

namespace epmc::pipeline {

namespace {

std::set<std::string> used_parameter_names(const ParametricMC& mc) {
    std::set<Variable> vars;
    for (const auto& row : mc.transitions)
        for (const auto& t : row) t.probability.collect_variables(vars);
    for (const auto& [name, rho] : mc.rewards)
        for (const auto& r : rho) r.collect_variables(vars);
    std::set<std::string> names;
    for (const auto& v : vars) names.insert(v.name());
    return names;
}

std::string timestamp() {
    auto now = std::chrono::system_clock::now();
    auto t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

void run_queries(const ParametricMC& mc, const std::vector<Query>& queries, FormulaSet& fs,
                 const CheckOptions& opts) {
    engine::Options eopts{opts.deadline, opts.term_limit};
    int index = 0;
    for (const auto& q : queries) {
        PropertyFormula pf;
        pf.text = q.text;
        pf.name = "P" + std::to_string(++index);
        if (q.is_reward()) {
            auto res = engine::query_reward(mc, q, eopts);
            pf.value = std::move(res.value);
            pf.prob_less_than_one = res.prob_less_than_one;
        } else {
            pf.value = engine::query_probability(mc, q, eopts);
        }
        fs.stage2.push_back(std::move(pf));
    }
}

} // namespace

FormulaSet epmc_check(const ModelSource& src, const patterns::PatternRepository& repo,
                      const std::vector<Query>& queries, const CheckOptions& opts) {
    // Rows may rely on annotation-derived parameter families summing to 1
    // through their pattern closed forms, so resolve those up front and let
    // the state-space builder check row sums modulo that substitution.
    BuildOptions bopts;
    for (const auto& ann : src.annotations) {
        const patterns::PatternDefinition* def = repo.find(ann.pattern_name);
        if (!def) throw UnresolvedAnnotation(ann.id, ann.pattern_name);
        for (const auto& [prop, expr] : def->properties) {
            auto [name, value] = patterns::instantiate(repo, ann, prop);
            bopts.row_sum_substitution.emplace(Variable(name), std::move(value));
        }
    }
    ParametricMC mc = build_states(src, bopts);
    FormulaSet fs;
    fs.model_path = opts.model_path;
    fs.repo_provenance = repo.provenance;
    fs.created_at = timestamp();

    std::set<std::string> used = used_parameter_names(mc);

    std::set<std::string> annotation_ids;
    for (const auto& ann : src.annotations)
        if (!annotation_ids.insert(ann.id).second)
            throw PipelineError("duplicate annotation id '" + ann.id + "'");

    std::set<std::string> assigned;
    for (const auto& ann : src.annotations) {
        const patterns::PatternDefinition* def = repo.find(ann.pattern_name);
        if (!def) throw UnresolvedAnnotation(ann.id, ann.pattern_name);
        for (const auto& [prop, expr] : def->properties) {
            std::string derived = prop + ann.id;
            if (!used.count(derived)) continue;
            auto [name, value] = patterns::instantiate(repo, ann, prop);
            // stage-1 expressions must be over base parameters only
            for (const auto& v : value.variables())
                if (assigned.count(v.name()) || v.name() == name)
                    throw PipelineError("stage-1 expression for " + name +
                                        " references another derived parameter " + v.name());
            assigned.insert(name);
            fs.stage1.emplace_back(std::move(name), std::move(value));
        }
    }

    // A used parameter matching property-name + id for some annotation but
    // not covered by that annotation's pattern is a naming mistake the user
    // should hear about.
    std::set<std::string> all_property_names;
    for (const auto& def : repo.definitions)
        for (const auto& [prop, expr] : def.properties) all_property_names.insert(prop);
    for (const auto& name : used) {
        if (assigned.count(name)) continue;
        for (const auto& ann : src.annotations) {
            if (name.size() <= ann.id.size()) continue;
            if (name.compare(name.size() - ann.id.size(), ann.id.size(), ann.id) != 0) continue;
            std::string base = name.substr(0, name.size() - ann.id.size());
            if (all_property_names.count(base)) throw MissingPatternProperty(name);
        }
    }

    run_queries(mc, queries, fs, opts);
    return fs;
}

FormulaSet mono_check(const ModelSource& src, const std::vector<Query>& queries,
                      const CheckOptions& opts) {
    ParametricMC mc = build_states(src);
    FormulaSet fs;
    fs.model_path = opts.model_path;
    fs.repo_provenance = "";
    fs.created_at = timestamp();
    run_queries(mc, queries, fs, opts);
    return fs;
}

std::map<std::string, double> eval_formula_set(const FormulaSet& fs, const Valuation& base) {
    Valuation v = base;
    for (const auto& [name, expr] : fs.stage1) v.set(name, expr.evaluate(v));
    std::map<std::string, double> out;
    for (const auto& pf : fs.stage2) out[pf.text] = pf.value.evaluate(v).to_double();
    return out;
}

long formula_set_size(const FormulaSet& fs) {
    long size = 0;
    for (const auto& [name, expr] : fs.stage1) size += expr.op_count();
    for (const auto& pf : fs.stage2) size += pf.value.op_count();
    return size;
}

std::string emit_script(const FormulaSet& fs) {
    std::ostringstream os;
    os << "% formula set";
    if (!fs.model_path.empty()) os << " for " << fs.model_path;
    os << "\n";
    if (!fs.repo_provenance.empty()) os << "% repository: " << fs.repo_provenance << "\n";
    for (const auto& [name, expr] : fs.stage1) os << name << " = " << expr.str() << ";\n";
    for (const auto& pf : fs.stage2) {
        os << "% property: " << pf.text << "\n";
        if (pf.prob_less_than_one)
            os << "% note: target reached with probability < 1; value is 0 by convention\n";
        os << pf.name << " = " << pf.value.str() << ";\n";
    }
    return os.str();
}

void emit_script_file(const FormulaSet& fs, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw PipelineError("cannot write script file: " + path);
    out << emit_script(fs);
}

Script parse_script(std::string_view text) {
    Script script;
    std::string pending_property;
    std::size_t i = 0;
    while (i < text.size()) {
        std::size_t e = text.find('\n', i);
        if (e == std::string_view::npos) e = text.size();
        std::string line(text.substr(i, e - i));
        i = e + 1;
        std::size_t a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos) continue;
        if (line[a] == '%') {
            const std::string tag = "% property:";
            if (line.compare(a, tag.size(), tag) == 0) {
                pending_property = line.substr(a + tag.size());
                std::size_t b = pending_property.find_first_not_of(" \t");
                pending_property = b == std::string::npos ? "" : pending_property.substr(b);
            }
            continue;
        }
        auto eq = line.find('=');
        auto sc = line.rfind(';');
        if (eq == std::string::npos || sc == std::string::npos || sc < eq)
            throw SyntaxError("expected 'name = expression;' line", i);
        std::string name = line.substr(a, eq - a);
        while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back()))) name.pop_back();
        Script::Assignment asg;
        asg.name = name;
        asg.value = parse_expression(line.substr(eq + 1, sc - eq - 1));
        asg.property_text = pending_property;
        pending_property.clear();
        script.assignments.push_back(std::move(asg));
    }
    return script;
}

std::map<std::string, double> Script::evaluate(const Valuation& base) const {
    Valuation v = base;
    std::map<std::string, double> out;
    for (const auto& a : assignments) {
        Rat value = a.value.evaluate(v);
        v.set(a.name, value);
        out[a.name] = value.to_double();
    }
    return out;
}

} // namespace epmc::pipeline
