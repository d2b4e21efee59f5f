#include "epmc/patterns.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "epmc/expr.hpp"

namespace epmc::patterns {

const RationalFunction* PatternDefinition::property(const std::string& prop) const {
    for (const auto& [name, expr] : properties)
        if (name == prop) return &expr;
    return nullptr;
}

bool PatternDefinition::has_formal(const std::string& name_) const {
    for (const auto& f : formals)
        if (f == name_) return true;
    return false;
}

const PatternDefinition* PatternRepository::find(const std::string& name) const {
    for (const auto& d : definitions)
        if (d.name == name) return &d;
    return nullptr;
}

void PatternRepository::add(PatternDefinition def) {
    if (find(def.name)) throw PatternError("duplicate pattern name: " + def.name);
    definitions.push_back(std::move(def));
}

PatternRepository parse_repository(std::string_view text) {
    PatternRepository repo;

    // Strip '#' comments and ellipsis lines, preserving offsets.
    std::string clean(text);
    std::size_t i = 0;
    while (i < clean.size()) {
        std::size_t start = i;
        while (i < clean.size() && clean[i] != '\n') ++i;
        std::size_t end = i;
        if (i < clean.size()) ++i;
        std::string_view line(clean.data() + start, end - start);
        std::size_t first = line.find_first_not_of(" \t\r");
        bool ellipsis = first != std::string_view::npos && line.find_first_not_of(". \t\r") == std::string_view::npos && line.find('.') != std::string_view::npos;
        std::size_t hash = line.find('#');
        std::size_t blank_from = std::string_view::npos;
        if (ellipsis)
            blank_from = start + first;
        else if (hash != std::string_view::npos)
            blank_from = start + hash;
        if (blank_from != std::string_view::npos)
            for (std::size_t k = blank_from; k < end; ++k) clean[k] = ' ';
    }

    std::size_t pos = 0;
    auto skip_ws = [&] {
        while (pos < clean.size() && std::isspace(static_cast<unsigned char>(clean[pos]))) ++pos;
    };
    auto ident = [&](const char* what) {
        skip_ws();
        std::size_t start = pos;
        while (pos < clean.size() &&
               (std::isalnum(static_cast<unsigned char>(clean[pos])) || clean[pos] == '_'))
            ++pos;
        if (pos == start) throw SyntaxError(std::string("expected ") + what, pos);
        return clean.substr(start, pos - start);
    };
    auto expect = [&](char c) {
        skip_ws();
        if (pos >= clean.size() || clean[pos] != c)
            throw SyntaxError(std::string("expected '") + c + "' in repository entry", pos);
        ++pos;
    };
    auto until = [&](std::string_view delims) {
        skip_ws();
        std::size_t start = pos;
        int depth = 0;
        while (pos < clean.size()) {
            char c = clean[pos];
            if (c == '(') ++depth;
            if (c == ')') --depth;
            if (depth == 0 && delims.find(c) != std::string_view::npos) break;
            ++pos;
        }
        std::string s = clean.substr(start, pos - start);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
        return s;
    };

    while (true) {
        skip_ws();
        if (pos >= clean.size()) break;
        PatternDefinition def;
        def.name = ident("pattern name");
        expect('(');
        skip_ws();
        if (clean[pos] != ')') {
            while (true) {
                def.formals.push_back(ident("formal parameter"));
                skip_ws();
                if (clean[pos] == ')') break;
                expect(',');
            }
        }
        expect(')');
        expect(':');
        while (true) {
            std::string prop = ident("property name");
            expect('=');
            std::size_t expr_pos = pos;
            std::string expr_text = until(",;");
            RationalFunction expr;
            try {
                expr = parse_expression(expr_text);
            } catch (const SyntaxError& e) {
                throw SyntaxError("in repository expression: " + std::string(e.what()),
                                  expr_pos + e.position);
            }
            for (const auto& v : expr.variables())
                if (!def.has_formal(v.name()))
                    throw UnknownFormalInExpression(def.name, prop, v.name());
            def.properties.emplace_back(std::move(prop), std::move(expr));
            skip_ws();
            if (pos < clean.size() && clean[pos] == ',') {
                ++pos;
                continue;
            }
            expect(';');
            break;
        }
        repo.add(std::move(def));
    }
    repo.provenance = "text";
    return repo;
}

namespace {

std::map<std::string, std::string> parse_query_args(const std::string& q) {
    std::map<std::string, std::string> args;
    std::size_t i = 0;
    while (i < q.size()) {
        std::size_t amp = q.find('&', i);
        if (amp == std::string::npos) amp = q.size();
        std::string kv = q.substr(i, amp - i);
        auto eq = kv.find('=');
        if (eq != std::string::npos) args[kv.substr(0, eq)] = kv.substr(eq + 1);
        i = amp + 1;
    }
    return args;
}

} // namespace

PatternRepository load_repository(const std::string& spec) {
    if (spec.rfind("builtin:", 0) == 0) {
        std::string rest = spec.substr(8);
        std::string kind = rest;
        std::string query;
        auto qm = rest.find('?');
        if (qm != std::string::npos) {
            kind = rest.substr(0, qm);
            query = rest.substr(qm + 1);
        }
        auto args = parse_query_args(query);
        if (kind == "sbs") {
            int n = args.count("n") ? std::stoi(args.at("n")) : 2;
            PatternRepository repo = builtin_sbs(n);
            repo.provenance = spec;
            return repo;
        }
        if (kind == "multitier") {
            int m = args.count("m") ? std::stoi(args.at("m")) : 2;
            int nmax = args.count("nmax") ? std::stoi(args.at("nmax")) : 2;
            PatternRepository repo = builtin_multitier(m, nmax);
            repo.provenance = spec;
            return repo;
        }
        throw PatternError("unknown builtin repository: " + kind);
    }
    std::ifstream in(spec);
    if (!in) throw PatternError("cannot open repository file: " + spec);
    std::stringstream ss;
    ss << in.rdbuf();
    PatternRepository repo = parse_repository(ss.str());
    repo.provenance = spec;
    return repo;
}

std::pair<std::string, RationalFunction> instantiate(const PatternRepository& repo,
                                                     const PatternAnnotation& ann,
                                                     const std::string& property) {
    const PatternDefinition* def = repo.find(ann.pattern_name);
    if (!def) throw UnknownPattern(ann.pattern_name);
    if (ann.actuals.size() != def->formals.size())
        throw ArityMismatch(def->name, def->formals.size(), ann.actuals.size());
    const RationalFunction* expr = def->property(property);
    if (!expr) throw UnknownProperty(def->name, property);
    std::map<Variable, RationalFunction> sub;
    for (std::size_t i = 0; i < def->formals.size(); ++i)
        sub.emplace(Variable(def->formals[i]), parse_expression(ann.actuals[i]));
    return {property + ann.id, expr->substituted(sub)};
}

const char* sbs_kind_name(SBSKind k) {
    switch (k) {
    case SBSKind::SEQ: return "SEQ";
    case SBSKind::PAR: return "PAR";
    case SBSKind::PROB: return "PROB";
    case SBSKind::SEQ_R: return "SEQ_R";
    case SBSKind::SEQ_R1: return "SEQ_R1";
    case SBSKind::PAR_R: return "PAR_R";
    case SBSKind::PROB_R: return "PROB_R";
    case SBSKind::PROB_R1: return "PROB_R1";
    }
    return "?";
}

std::optional<SBSKind> sbs_kind_from(const std::string& name) {
    for (SBSKind k : {SBSKind::SEQ, SBSKind::PAR, SBSKind::PROB, SBSKind::SEQ_R, SBSKind::SEQ_R1,
                      SBSKind::PAR_R, SBSKind::PROB_R, SBSKind::PROB_R1})
        if (name == sbs_kind_name(k)) return k;
    return std::nullopt;
}

const char* server_kind_name(ServerKind k) {
    switch (k) {
    case ServerKind::BASIC: return "BASIC";
    case ServerKind::VIRTUALIZED: return "VIRTUALIZED";
    case ServerKind::VIRTUALIZED_M: return "VIRTUALIZED_M";
    }
    return "?";
}

std::vector<std::string> server_formals(ServerKind kind) {
    switch (kind) {
    case ServerKind::BASIC: return {"p"};
    case ServerKind::VIRTUALIZED: return {"p", "pVM"};
    case ServerKind::VIRTUALIZED_M: return {"p", "pdetect", "pmigrate", "r", "pVM"};
    }
    return {};
}

} // namespace epmc::patterns
