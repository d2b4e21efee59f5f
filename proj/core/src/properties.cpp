#include "epmc/properties.hpp"

#include <cctype>

namespace epmc {

StateFormula StateFormula::truth() {
    return StateFormula();
}

StateFormula StateFormula::atom(std::string name) {
    StateFormula f;
    f.kind_ = Kind::Atom;
    f.atom_ = std::move(name);
    return f;
}

StateFormula StateFormula::negation(StateFormula x) {
    StateFormula f;
    f.kind_ = Kind::Not;
    f.children_.push_back(std::move(x));
    return f;
}

StateFormula StateFormula::conjunction(StateFormula a, StateFormula b) {
    StateFormula f;
    f.kind_ = Kind::And;
    f.children_.push_back(std::move(a));
    f.children_.push_back(std::move(b));
    return f;
}

StateFormula StateFormula::disjunction(StateFormula a, StateFormula b) {
    StateFormula f;
    f.kind_ = Kind::Or;
    f.children_.push_back(std::move(a));
    f.children_.push_back(std::move(b));
    return f;
}

void StateFormula::collect_atoms(std::vector<std::string>& into) const {
    if (kind_ == Kind::Atom) into.push_back(atom_);
    for (const auto& c : children_) c.collect_atoms(into);
}

std::string StateFormula::str() const {
    switch (kind_) {
    case Kind::True: return "true";
    case Kind::Atom: return "\"" + atom_ + "\"";
    case Kind::Not: return "!" + children_[0].str();
    case Kind::And: return "(" + children_[0].str() + " & " + children_[1].str() + ")";
    case Kind::Or: return "(" + children_[0].str() + " | " + children_[1].str() + ")";
    }
    return "?";
}

namespace {

struct PropParser {
    std::string_view text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    bool accept(char c) {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) throw SyntaxError(std::string("expected '") + c + "' in property", pos);
    }

    bool accept_word(std::string_view w) {
        skip_ws();
        if (text.compare(pos, w.size(), w) != 0) return false;
        std::size_t end = pos + w.size();
        if (end < text.size()) {
            char c = text[end];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') return false;
        }
        pos = end;
        return true;
    }

    std::string word() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            ++pos;
        if (pos == start) throw SyntaxError("expected name", pos);
        return std::string(text.substr(start, pos - start));
    }

    std::string atom_name() {
        skip_ws();
        if (accept('"')) {
            std::size_t start = pos;
            while (pos < text.size() && text[pos] != '"') ++pos;
            if (pos >= text.size()) throw SyntaxError("unterminated atom name", start);
            std::string s(text.substr(start, pos - start));
            ++pos;
            return s;
        }
        return word();
    }

    StateFormula parse_formula() { return parse_or(); }

    StateFormula parse_or() {
        StateFormula f = parse_and();
        while (true) {
            skip_ws();
            if (text.compare(pos, 2, "=>") == 0) {
                pos += 2;
                f = StateFormula::disjunction(StateFormula::negation(std::move(f)), parse_and());
            } else if (accept('|')) {
                f = StateFormula::disjunction(std::move(f), parse_and());
            } else {
                return f;
            }
        }
    }

    StateFormula parse_and() {
        StateFormula f = parse_not();
        while (accept('&')) f = StateFormula::conjunction(std::move(f), parse_not());
        return f;
    }

    StateFormula parse_not() {
        if (accept('!')) return StateFormula::negation(parse_not());
        if (accept('(')) {
            StateFormula f = parse_or();
            expect(')');
            return f;
        }
        if (accept_word("true")) return StateFormula::truth();
        return StateFormula::atom(atom_name());
    }

    void reject_bound(const char* op) {
        char c = peek();
        if (c == '>' || c == '<' || (c == '=' && text.compare(pos, 2, "=?") != 0))
            throw UnsupportedOperator(std::string(op) +
                                      " with a probability/reward bound is out of scope; only the "
                                      "quantitative '=?' form is supported");
    }

    void reject_step_bound() {
        skip_ws();
        if (peek() == '<' || peek() == '=')
            throw UnsupportedOperator(
                "bounded operators (U<=k, I=k, C<=k) are out of scope: the two-stage reduction "
                "is not available for bounded until and related time-bounded properties");
    }

    Query parse() {
        Query q;
        skip_ws();
        if (accept_word("P")) {
            reject_bound("P");
            expect('=');
            expect('?');
            expect('[');
            // F phi | phi U phi ; X / U<=k rejected
            if (accept_word("X"))
                throw UnsupportedOperator("the next operator X is out of scope");
            if (accept_word("F")) {
                reject_step_bound();
                q.kind = Query::Kind::ProbReach;
                q.phi1 = StateFormula::truth();
                q.phi2 = parse_formula();
            } else if (accept_word("G")) {
                throw UnsupportedOperator("the globally operator G is out of scope");
            } else {
                q.phi1 = parse_formula();
                if (!accept_word("U")) throw SyntaxError("expected 'U' in until property", pos);
                reject_step_bound();
                q.kind = Query::Kind::ProbUntil;
                q.phi2 = parse_formula();
            }
            expect(']');
        } else if (accept_word("R")) {
            q.kind = Query::Kind::RewardReach;
            if (accept('{')) {
                skip_ws();
                if (peek() == '"') {
                    q.reward_structure = atom_name();
                } else {
                    q.reward_structure = word();
                }
                expect('}');
            }
            reject_bound("R");
            expect('=');
            expect('?');
            expect('[');
            if (accept_word("I") || accept_word("C") || accept_word("S"))
                throw UnsupportedOperator(
                    "instantaneous, cumulative and steady-state reward operators are out of "
                    "scope; only reachability rewards R=?[F phi] are supported");
            if (!accept_word("F")) throw SyntaxError("expected 'F' in reward property", pos);
            q.phi1 = StateFormula::truth();
            q.phi2 = parse_formula();
            expect(']');
        } else {
            throw SyntaxError("property must start with P or R", pos);
        }
        skip_ws();
        if (pos != text.size()) throw SyntaxError("trailing input after property", pos);
        return q;
    }
};

} // namespace

Query parse_property(std::string_view text) {
    PropParser p{text};
    Query q = p.parse();
    q.text = std::string(text);
    // normalize stored text: trim
    while (!q.text.empty() && std::isspace(static_cast<unsigned char>(q.text.front())))
        q.text.erase(q.text.begin());
    while (!q.text.empty() && std::isspace(static_cast<unsigned char>(q.text.back())))
        q.text.pop_back();
    return q;
}

std::vector<Query> parse_property_file(std::string_view text) {
    std::vector<Query> out;
    std::size_t i = 0;
    while (i < text.size()) {
        std::size_t e = text.find('\n', i);
        if (e == std::string_view::npos) e = text.size();
        std::string_view line = text.substr(i, e - i);
        i = e + 1;
        auto hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        std::size_t a = line.find_first_not_of(" \t\r");
        if (a == std::string_view::npos) continue;
        std::size_t b = line.find_last_not_of(" \t\r");
        out.push_back(parse_property(line.substr(a, b - a + 1)));
    }
    return out;
}

namespace {

void check_atoms(const ParametricMC& mc, const StateFormula& f) {
    std::vector<std::string> atoms;
    f.collect_atoms(atoms);
    for (const auto& a : atoms)
        if (!mc.labels.count(a)) throw UnknownAtom(a);
}

std::vector<char> sat_rec(const ParametricMC& mc, const StateFormula& f) {
    int n = mc.num_states();
    std::vector<char> out(n, 0);
    switch (f.kind()) {
    case StateFormula::Kind::True:
        std::fill(out.begin(), out.end(), 1);
        break;
    case StateFormula::Kind::Atom: {
        const auto& flags = mc.labels.at(f.atom_name());
        out = flags;
        break;
    }
    case StateFormula::Kind::Not: {
        auto c = sat_rec(mc, f.child(0));
        for (int s = 0; s < n; ++s) out[s] = !c[s];
        break;
    }
    case StateFormula::Kind::And: {
        auto a = sat_rec(mc, f.child(0));
        auto b = sat_rec(mc, f.child(1));
        for (int s = 0; s < n; ++s) out[s] = a[s] && b[s];
        break;
    }
    case StateFormula::Kind::Or: {
        auto a = sat_rec(mc, f.child(0));
        auto b = sat_rec(mc, f.child(1));
        for (int s = 0; s < n; ++s) out[s] = a[s] || b[s];
        break;
    }
    }
    return out;
}

} // namespace

std::vector<char> sat_states(const ParametricMC& mc, const StateFormula& f) {
    check_atoms(mc, f);
    return sat_rec(mc, f);
}

} // namespace epmc
