#include <cctype>
#include <sstream>

#include "epmc/expr.hpp"
#include "epmc/model.hpp"

namespace epmc {

// ---------------------------------------------------------------------------
// IntExpr / BoolExpr
// ---------------------------------------------------------------------------

IntExpr IntExpr::literal(long v) {
    IntExpr e;
    e.kind_ = Kind::Literal;
    e.value_ = v;
    return e;
}

IntExpr IntExpr::variable(std::string name) {
    IntExpr e;
    e.kind_ = Kind::Var;
    e.var_ = std::move(name);
    return e;
}

IntExpr IntExpr::binary(Kind k, IntExpr lhs, IntExpr rhs) {
    IntExpr e;
    e.kind_ = k;
    e.children_.push_back(std::move(lhs));
    e.children_.push_back(std::move(rhs));
    return e;
}

IntExpr IntExpr::negate(IntExpr x) {
    IntExpr e;
    e.kind_ = Kind::Neg;
    e.children_.push_back(std::move(x));
    return e;
}

long IntExpr::evaluate(const std::map<std::string, long>& vars) const {
    switch (kind_) {
    case Kind::Literal: return value_;
    case Kind::Var: {
        auto it = vars.find(var_);
        if (it == vars.end()) throw UnknownIdentifier(var_);
        return it->second;
    }
    case Kind::Add: return children_[0].evaluate(vars) + children_[1].evaluate(vars);
    case Kind::Sub: return children_[0].evaluate(vars) - children_[1].evaluate(vars);
    case Kind::Mul: return children_[0].evaluate(vars) * children_[1].evaluate(vars);
    case Kind::Neg: return -children_[0].evaluate(vars);
    }
    return 0;
}

std::string IntExpr::str() const {
    switch (kind_) {
    case Kind::Literal: return std::to_string(value_);
    case Kind::Var: return var_;
    case Kind::Add: return "(" + children_[0].str() + "+" + children_[1].str() + ")";
    case Kind::Sub: return "(" + children_[0].str() + "-" + children_[1].str() + ")";
    case Kind::Mul: return "(" + children_[0].str() + "*" + children_[1].str() + ")";
    case Kind::Neg: return "(-" + children_[0].str() + ")";
    }
    return "?";
}

BoolExpr BoolExpr::literal(bool b) {
    BoolExpr e;
    e.kind_ = b ? Kind::True : Kind::False;
    return e;
}

BoolExpr BoolExpr::cmp(CmpOp op, IntExpr lhs, IntExpr rhs) {
    BoolExpr e;
    e.kind_ = Kind::Cmp;
    e.op_ = op;
    e.int_children_.push_back(std::move(lhs));
    e.int_children_.push_back(std::move(rhs));
    return e;
}

BoolExpr BoolExpr::logical(Kind k, BoolExpr lhs, BoolExpr rhs) {
    BoolExpr e;
    e.kind_ = k;
    e.bool_children_.push_back(std::move(lhs));
    e.bool_children_.push_back(std::move(rhs));
    return e;
}

BoolExpr BoolExpr::negate(BoolExpr x) {
    BoolExpr e;
    e.kind_ = Kind::Not;
    e.bool_children_.push_back(std::move(x));
    return e;
}

bool BoolExpr::evaluate(const std::map<std::string, long>& vars) const {
    switch (kind_) {
    case Kind::True: return true;
    case Kind::False: return false;
    case Kind::And: return bool_children_[0].evaluate(vars) && bool_children_[1].evaluate(vars);
    case Kind::Or: return bool_children_[0].evaluate(vars) || bool_children_[1].evaluate(vars);
    case Kind::Not: return !bool_children_[0].evaluate(vars);
    case Kind::Cmp: {
        long a = int_children_[0].evaluate(vars);
        long b = int_children_[1].evaluate(vars);
        switch (op_) {
        case CmpOp::Eq: return a == b;
        case CmpOp::Ne: return a != b;
        case CmpOp::Lt: return a < b;
        case CmpOp::Le: return a <= b;
        case CmpOp::Gt: return a > b;
        case CmpOp::Ge: return a >= b;
        }
    }
    }
    return false;
}

std::string BoolExpr::str() const {
    switch (kind_) {
    case Kind::True: return "true";
    case Kind::False: return "false";
    case Kind::And: return "(" + bool_children_[0].str() + " & " + bool_children_[1].str() + ")";
    case Kind::Or: return "(" + bool_children_[0].str() + " | " + bool_children_[1].str() + ")";
    case Kind::Not: return "!(" + bool_children_[0].str() + ")";
    case Kind::Cmp: {
        const char* op = "=";
        switch (op_) {
        case CmpOp::Eq: op = "="; break;
        case CmpOp::Ne: op = "!="; break;
        case CmpOp::Lt: op = "<"; break;
        case CmpOp::Le: op = "<="; break;
        case CmpOp::Gt: op = ">"; break;
        case CmpOp::Ge: op = ">="; break;
        }
        return int_children_[0].str() + op + int_children_[1].str();
    }
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Model text parser
// ---------------------------------------------------------------------------

namespace {

struct Scanner {
    std::string text; // comments blanked out, annotations extracted
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool eof() {
        skip_ws();
        return pos >= text.size();
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

    void expect(char c, const char* what) {
        if (!accept(c))
            throw SyntaxError(std::string("expected '") + c + "' " + what, pos);
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

    std::string identifier(const char* what) {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            ++pos;
        if (pos == start || std::isdigit(static_cast<unsigned char>(text[start])))
            throw SyntaxError(std::string("expected identifier ") + what, start);
        return text.substr(start, pos - start);
    }

    long integer(const char* what) {
        skip_ws();
        std::size_t start = pos;
        if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == start || (pos == start + 1 && !std::isdigit(static_cast<unsigned char>(text[start]))))
            throw SyntaxError(std::string("expected integer ") + what, start);
        return std::stol(text.substr(start, pos - start));
    }

    std::string quoted_string() {
        skip_ws();
        if (peek() != '"') throw SyntaxError("expected quoted string", pos);
        std::size_t start = ++pos;
        while (pos < text.size() && text[pos] != '"') ++pos;
        if (pos >= text.size()) throw SyntaxError("unterminated string", start);
        std::string s = text.substr(start, pos - start);
        ++pos;
        return s;
    }

    /// Text up to (not including) the next depth-0 "->".
    std::string until_arrow() {
        skip_ws();
        std::size_t start = pos;
        int depth = 0;
        while (pos + 1 < text.size()) {
            char c = text[pos];
            if (c == '(') ++depth;
            if (c == ')') --depth;
            if (depth == 0 && c == '-' && text[pos + 1] == '>') break;
            ++pos;
        }
        if (pos + 1 >= text.size()) throw SyntaxError("expected '->' after guard", start);
        std::string s = text.substr(start, pos - start);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
        if (s.empty()) throw SyntaxError("empty guard", start);
        return s;
    }

    /// Text up to (not including) the next depth-0 occurrence of any
    /// delimiter character. Parentheses nest.
    std::string until(std::string_view delims, const char* what) {
        skip_ws();
        std::size_t start = pos;
        int depth = 0;
        while (pos < text.size()) {
            char c = text[pos];
            if (c == '(') ++depth;
            if (c == ')') {
                if (depth == 0 && delims.find(')') != std::string_view::npos) break;
                --depth;
                if (depth < 0) throw SyntaxError("unbalanced ')'", pos);
            } else if (depth == 0 && delims.find(c) != std::string_view::npos) {
                break;
            }
            ++pos;
        }
        if (pos == start) throw SyntaxError(std::string("expected ") + what, pos);
        std::string s = text.substr(start, pos - start);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
        return s;
    }
};

// Validate an expression's syntax now so errors carry a source position.
void check_expression(const std::string& expr, std::size_t base_pos) {
    try {
        parse_expression(expr);
    } catch (const SyntaxError& e) {
        throw SyntaxError("in expression '" + expr + "': " + e.what(), base_pos + e.position);
    } catch (const DenominatorZero&) {
        // Division by a cancelling denominator is a build-time concern.
    }
}

// --- guard / update expression sub-parsers ---------------------------------

struct GuardParser {
    const std::string& text;
    std::size_t pos = 0;
    std::size_t base;

    GuardParser(const std::string& t, std::size_t base_pos) : text(t), base(base_pos) {}

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

    BoolExpr parse() {
        BoolExpr e = parse_or();
        skip_ws();
        if (pos != text.size()) throw SyntaxError("trailing input in guard", base + pos);
        return e;
    }

    BoolExpr parse_or() {
        BoolExpr e = parse_and();
        while (accept('|')) e = BoolExpr::logical(BoolExpr::Kind::Or, std::move(e), parse_and());
        return e;
    }

    BoolExpr parse_and() {
        BoolExpr e = parse_not();
        while (accept('&')) e = BoolExpr::logical(BoolExpr::Kind::And, std::move(e), parse_not());
        return e;
    }

    BoolExpr parse_not() {
        if (accept('!')) return BoolExpr::negate(parse_not());
        return parse_atom();
    }

    BoolExpr parse_atom() {
        if (accept_word("true")) return BoolExpr::literal(true);
        if (accept_word("false")) return BoolExpr::literal(false);
        if (peek() == '(') {
            // Either a parenthesized boolean or the left side of a comparison.
            std::size_t save = pos;
            ++pos;
            try {
                BoolExpr inner = parse_or();
                if (!accept(')')) throw SyntaxError("expected ')'", base + pos);
                skip_ws();
                char c = peek();
                if (c == '=' || c == '!' || c == '<' || c == '>' || c == '+' || c == '-' || c == '*')
                    throw SyntaxError("not a boolean group", base + pos);
                return inner;
            } catch (const SyntaxError&) {
                pos = save;
            }
        }
        return parse_comparison();
    }

    BoolExpr parse_comparison() {
        IntExpr lhs = parse_int_sum();
        skip_ws();
        BoolExpr::CmpOp op;
        if (accept('=')) {
            op = BoolExpr::CmpOp::Eq;
        } else if (text.compare(pos, 2, "!=") == 0) {
            pos += 2;
            op = BoolExpr::CmpOp::Ne;
        } else if (text.compare(pos, 2, "<=") == 0) {
            pos += 2;
            op = BoolExpr::CmpOp::Le;
        } else if (text.compare(pos, 2, ">=") == 0) {
            pos += 2;
            op = BoolExpr::CmpOp::Ge;
        } else if (accept('<')) {
            op = BoolExpr::CmpOp::Lt;
        } else if (accept('>')) {
            op = BoolExpr::CmpOp::Gt;
        } else {
            throw SyntaxError("expected comparison operator", base + pos);
        }
        return BoolExpr::cmp(op, std::move(lhs), parse_int_sum());
    }

    IntExpr parse_int_sum() {
        IntExpr e = parse_int_product();
        while (true) {
            if (accept('+')) {
                e = IntExpr::binary(IntExpr::Kind::Add, std::move(e), parse_int_product());
            } else if (accept('-')) {
                e = IntExpr::binary(IntExpr::Kind::Sub, std::move(e), parse_int_product());
            } else {
                return e;
            }
        }
    }

    IntExpr parse_int_product() {
        IntExpr e = parse_int_atom();
        while (accept('*')) e = IntExpr::binary(IntExpr::Kind::Mul, std::move(e), parse_int_atom());
        return e;
    }

    IntExpr parse_int_atom() {
        skip_ws();
        if (accept('-')) return IntExpr::negate(parse_int_atom());
        if (accept('(')) {
            IntExpr e = parse_int_sum();
            if (!accept(')')) throw SyntaxError("expected ')' in expression", base + pos);
            return e;
        }
        if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            std::size_t start = pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
            return IntExpr::literal(std::stol(text.substr(start, pos - start)));
        }
        if (pos < text.size() &&
            (std::isalpha(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) {
            std::size_t start = pos;
            while (pos < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
                ++pos;
            return IntExpr::variable(text.substr(start, pos - start));
        }
        throw SyntaxError("expected integer expression", base + pos);
    }
};

BoolExpr parse_guard_text(const std::string& text, std::size_t base_pos) {
    GuardParser p(text, base_pos);
    return p.parse();
}

IntExpr parse_int_text(const std::string& text, std::size_t base_pos) {
    GuardParser p(text, base_pos);
    IntExpr e = p.parse_int_sum();
    p.skip_ws();
    if (p.pos != text.size()) throw SyntaxError("trailing input in update expression", base_pos + p.pos);
    return e;
}

PatternAnnotation parse_annotation(const std::string& line, std::size_t base_pos) {
    Scanner s;
    s.text = line;
    PatternAnnotation ann;
    ann.position = base_pos;
    s.skip_ws();
    std::size_t start = s.pos;
    while (s.pos < s.text.size() && s.text[s.pos] != ':') ++s.pos;
    if (s.pos >= s.text.size()) throw SyntaxError("annotation missing ':'", base_pos);
    ann.id = s.text.substr(start, s.pos - start);
    while (!ann.id.empty() && std::isspace(static_cast<unsigned char>(ann.id.back()))) ann.id.pop_back();
    if (ann.id.empty()) throw SyntaxError("annotation missing id", base_pos);
    ++s.pos;
    ann.pattern_name = s.identifier("for pattern name");
    s.expect('(', "after pattern name");
    if (!s.accept(')')) {
        while (true) {
            std::string arg = s.until(",)", "annotation argument");
            check_expression(arg, base_pos + s.pos - arg.size());
            ann.actuals.push_back(std::move(arg));
            if (s.accept(')')) break;
            s.expect(',', "between annotation arguments");
        }
    }
    if (!s.eof()) throw SyntaxError("trailing input after annotation", base_pos + s.pos);
    return ann;
}

} // namespace

ModelSource parse_model(std::string_view original) {
    ModelSource src;

    // Pass 1: extract /// annotations and // comments (preserving offsets by
    // blanking the stripped characters).
    std::string text(original);
    std::size_t i = 0;
    while (i < text.size()) {
        // find start of line content
        std::size_t line_start = i;
        while (i < text.size() && text[i] != '\n') ++i;
        std::size_t line_end = i;
        if (i < text.size()) ++i;
        std::string_view line(text.data() + line_start, line_end - line_start);
        std::size_t first = line.find_first_not_of(" \t");
        if (first != std::string_view::npos && line.compare(first, 3, "///") == 0) {
            std::string body(line.substr(first + 3));
            src.annotations.push_back(parse_annotation(body, line_start + first + 3));
            for (std::size_t k = line_start; k < line_end; ++k) text[k] = ' ';
            continue;
        }
        auto comment = line.find("//");
        if (comment != std::string_view::npos) {
            std::string body(line.substr(comment + 2));
            std::istringstream is(body);
            std::string tag;
            if (is >> tag && tag == "@range") {
                double lo, hi;
                if (is >> lo >> hi) {
                    src.sample_lo = lo;
                    src.sample_hi = hi;
                }
            }
            for (std::size_t k = line_start + comment; k < line_end; ++k) text[k] = ' ';
        }
    }

    Scanner s;
    s.text = std::move(text);

    if (!s.accept_word("dtmc")) throw SyntaxError("model must start with 'dtmc'", s.pos);

    bool in_module = false;
    while (!s.eof()) {
        if (s.accept_word("const")) {
            if (!s.accept_word("double"))
                throw SyntaxError("only 'const double' declarations are supported", s.pos);
            ConstantDecl d;
            d.position = s.pos;
            d.name = s.identifier("for constant name");
            if (s.accept('=')) {
                std::size_t expr_pos = s.pos;
                d.value_text = s.until(";", "constant value");
                check_expression(*d.value_text, expr_pos);
            }
            s.expect(';', "after constant declaration");
            src.constants.push_back(std::move(d));
        } else if (s.accept_word("module")) {
            if (in_module || !src.module_name.empty())
                throw SyntaxError("unsupported: multiple modules (no synchronization subset)", s.pos);
            src.module_name = s.identifier("for module name");
            in_module = true;
        } else if (in_module && s.accept_word("endmodule")) {
            in_module = false;
        } else if (s.accept_word("label")) {
            LabelDef l;
            l.name = s.quoted_string();
            s.expect('=', "after label name");
            std::size_t expr_pos = s.pos;
            std::string guard = s.until(";", "label expression");
            l.expr = parse_guard_text(guard, expr_pos);
            s.expect(';', "after label definition");
            src.labels.push_back(std::move(l));
        } else if (s.accept_word("rewards")) {
            RewardBlock b;
            b.name = s.quoted_string();
            while (!s.accept_word("endrewards")) {
                if (s.eof()) throw SyntaxError("missing 'endrewards'", s.pos);
                RewardItem item;
                std::size_t guard_pos = s.pos;
                std::string guard = s.until(":", "reward guard");
                item.guard = parse_guard_text(guard, guard_pos);
                s.expect(':', "after reward guard");
                std::size_t expr_pos = s.pos;
                item.expr_text = s.until(";", "reward expression");
                check_expression(item.expr_text, expr_pos);
                s.expect(';', "after reward item");
                b.items.push_back(std::move(item));
            }
            src.rewards.push_back(std::move(b));
        } else if (in_module && s.peek() == '[') {
            Command cmd;
            cmd.position = s.pos;
            s.expect('[', "to open command");
            if (!s.accept(']'))
                throw SyntaxError("action-labelled commands are not supported (synchronization subset)",
                                  s.pos);
            std::size_t guard_pos = s.pos;
            std::string guard = s.until_arrow();
            s.expect('-', "in '->'");
            s.expect('>', "in '->'");
            cmd.guard = parse_guard_text(guard, guard_pos);
            while (true) {
                CommandBranch br;
                std::size_t prob_pos = s.pos;
                br.probability_text = s.until(":", "branch probability");
                check_expression(br.probability_text, prob_pos);
                s.expect(':', "after branch probability");
                s.expect('(', "to open update");
                br.update_var = s.identifier("for updated variable");
                s.expect('\'', "after updated variable");
                s.expect('=', "in update");
                std::size_t upd_pos = s.pos;
                std::string upd = s.until(")", "update expression");
                br.update_expr = parse_int_text(upd, upd_pos);
                s.expect(')', "to close update");
                cmd.branches.push_back(std::move(br));
                if (s.accept(';')) break;
                if (s.accept('&'))
                    throw SyntaxError("multi-variable updates are not supported", s.pos);
                s.expect('+', "between branches");
            }
            src.commands.push_back(std::move(cmd));
        } else if (in_module) {
            // variable declaration: name : [lo..hi] init k;
            VariableDecl v;
            v.name = s.identifier("for variable name");
            s.expect(':', "after variable name");
            s.expect('[', "to open range");
            v.lo = s.integer("for range lower bound");
            s.expect('.', "in '..'");
            s.expect('.', "in '..'");
            v.hi = s.integer("for range upper bound");
            s.expect(']', "to close range");
            if (!s.accept_word("init")) throw SyntaxError("expected 'init'", s.pos);
            v.init = s.integer("for initial value");
            s.expect(';', "after variable declaration");
            if (v.lo > v.hi) throw NonFiniteVariableRange(v.name);
            if (v.init < v.lo || v.init > v.hi)
                throw ModelError("initial value of " + v.name + " outside its range");
            src.variables.push_back(std::move(v));
        } else {
            throw SyntaxError("unexpected input at top level", s.pos);
        }
    }
    if (in_module) throw SyntaxError("missing 'endmodule'", s.pos);
    if (src.module_name.empty()) throw SyntaxError("model has no module", 0);
    if (src.variables.empty()) throw SyntaxError("module declares no variables", 0);
    return src;
}

} // namespace epmc
