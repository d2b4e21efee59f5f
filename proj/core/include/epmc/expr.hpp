#ifndef EPMC_EXPR_HPP
#define EPMC_EXPR_HPP

#include <string_view>

#include "epmc/ratfun.hpp"

namespace epmc {

/// Parse an arithmetic expression over numbers (integer or decimal),
/// identifiers, `+ - * / ( )`, unary minus and nonnegative integer exponents
/// `^`, and return its canonical rational function. Throws SyntaxError on
/// malformed input and DenominatorZero when a denominator cancels to the zero
/// polynomial (e.g. "1/(1-1)").
RationalFunction parse_expression(std::string_view text);

} // namespace epmc

#endif
