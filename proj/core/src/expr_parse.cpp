#include "epmc/expr.hpp"

#include <cctype>
#include <string>

namespace epmc {
namespace {

struct Parser {
    std::string_view text;
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

    void expect(char c) {
        if (!accept(c)) throw SyntaxError(std::string("expected '") + c + "'", pos);
    }

    RationalFunction parse_sum() {
        RationalFunction v = parse_product();
        while (true) {
            if (accept('+')) {
                v = v + parse_product();
            } else if (accept('-')) {
                v = v - parse_product();
            } else {
                return v;
            }
        }
    }

    RationalFunction parse_product() {
        RationalFunction v = parse_unary();
        while (true) {
            if (accept('*')) {
                v = v * parse_unary();
            } else if (accept('/')) {
                RationalFunction d = parse_unary();
                if (d.is_zero()) throw DenominatorZero("right operand of '/' cancels to 0");
                v = v / d;
            } else {
                return v;
            }
        }
    }

    RationalFunction parse_unary() {
        if (accept('-')) return -parse_unary();
        if (accept('+')) return parse_unary();
        return parse_power();
    }

    RationalFunction parse_power() {
        RationalFunction base = parse_atom();
        if (accept('^')) {
            skip_ws();
            std::size_t start = pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
            if (pos == start) throw SyntaxError("expected nonnegative integer exponent", pos);
            int e = std::stoi(std::string(text.substr(start, pos - start)));
            return base.pow(e);
        }
        return base;
    }

    RationalFunction parse_atom() {
        skip_ws();
        if (pos >= text.size()) throw SyntaxError("unexpected end of expression", pos);
        char c = text[pos];
        if (c == '(') {
            ++pos;
            RationalFunction v = parse_sum();
            expect(')');
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
        throw SyntaxError(std::string("unexpected character '") + c + "'", pos);
    }

    RationalFunction parse_number() {
        std::size_t start = pos;
        bool seen_dot = false;
        while (pos < text.size()) {
            char c = text[pos];
            if (std::isdigit(static_cast<unsigned char>(c))) {
                ++pos;
            } else if (c == '.' && !seen_dot) {
                seen_dot = true;
                ++pos;
            } else {
                break;
            }
        }
        std::string_view lit = text.substr(start, pos - start);
        if (lit == ".") throw SyntaxError("malformed number", start);
        return RationalFunction(Rat::from_decimal(lit));
    }

    RationalFunction parse_identifier() {
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            ++pos;
        return RationalFunction::variable(Variable(text.substr(start, pos - start)));
    }
};

} // namespace

RationalFunction parse_expression(std::string_view text) {
    Parser p{text};
    RationalFunction v = p.parse_sum();
    if (!p.eof()) throw SyntaxError("trailing input after expression", p.pos);
    return v;
}

} // namespace epmc
