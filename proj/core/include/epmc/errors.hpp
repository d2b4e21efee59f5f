#ifndef EPMC_ERRORS_HPP
#define EPMC_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace epmc {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed input text. `pos` is a byte offset into the parsed text.
class SyntaxError : public Error {
public:
    SyntaxError(const std::string& msg, std::size_t pos)
        : Error(msg + " (at offset " + std::to_string(pos) + ")"), position(pos) {}
    std::size_t position;
};

class DivisionByZero : public Error {
public:
    DivisionByZero() : Error("division by zero rational function") {}
};

class DenominatorZero : public Error {
public:
    explicit DenominatorZero(const std::string& what_)
        : Error("denominator is identically zero: " + what_) {}
};

class UnboundVariable : public Error {
public:
    explicit UnboundVariable(const std::string& name_)
        : Error("unbound variable: " + name_), name(name_) {}
    std::string name;
};

class DenominatorZeroAtPoint : public Error {
public:
    DenominatorZeroAtPoint() : Error("denominator evaluates to zero at this valuation") {}
};

class UnknownIdentifier : public Error {
public:
    explicit UnknownIdentifier(const std::string& name_)
        : Error("unknown identifier: " + name_), name(name_) {}
    std::string name;
};

class ModelError : public Error {
public:
    explicit ModelError(const std::string& msg) : Error(msg) {}
};

class RowSumNotOne : public ModelError {
public:
    RowSumNotOne(const std::string& state, const std::string& sum)
        : ModelError("transition row of state " + state + " sums to " + sum + ", not 1") {}
};

class OverlappingGuards : public ModelError {
public:
    explicit OverlappingGuards(const std::string& state)
        : ModelError("more than one command enabled in state " + state +
                     " (deterministic choice required)") {}
};

class StateSpaceExceeded : public ModelError {
public:
    explicit StateSpaceExceeded(std::size_t limit)
        : ModelError("state space exceeds limit of " + std::to_string(limit) + " states") {}
};

class NonFiniteVariableRange : public ModelError {
public:
    explicit NonFiniteVariableRange(const std::string& var)
        : ModelError("variable " + var + " has a non-finite range") {}
};

class UpdateOutOfRange : public ModelError {
public:
    UpdateOutOfRange(const std::string& var, long value)
        : ModelError("update drives variable " + var + " out of range (value " +
                     std::to_string(value) + ")") {}
};

class UnsupportedOperator : public Error {
public:
    explicit UnsupportedOperator(const std::string& msg) : Error(msg) {}
};

class UnknownAtom : public Error {
public:
    explicit UnknownAtom(const std::string& name_)
        : Error("unknown atomic proposition: " + name_), name(name_) {}
    std::string name;
};

class FragmentError : public Error {
public:
    explicit FragmentError(const std::string& msg) : Error(msg) {}
};

class EngineError : public Error {
public:
    explicit EngineError(const std::string& msg) : Error(msg) {}
};

class SingularSystem : public EngineError {
public:
    explicit SingularSystem(const std::string& msg) : EngineError(msg) {}
};

class UnknownRewardStructure : public Error {
public:
    explicit UnknownRewardStructure(const std::string& name_)
        : Error("unknown reward structure: " + name_), name(name_) {}
    std::string name;
};

class PatternError : public Error {
public:
    explicit PatternError(const std::string& msg) : Error(msg) {}
};

class PipelineError : public Error {
public:
    explicit PipelineError(const std::string& msg) : Error(msg) {}
};

class OracleError : public Error {
public:
    explicit OracleError(const std::string& msg) : Error(msg) {}
};

class ValueOutOfRange : public OracleError {
public:
    explicit ValueOutOfRange(const std::string& msg) : OracleError(msg) {}
};

/// Cooperative wall-clock timeout (see ComputeBudget in ratfun.hpp).
class TimeoutError : public Error {
public:
    TimeoutError() : Error("computation exceeded its deadline") {}
};

/// A polynomial grew past the configured term limit.
class ResourceLimitError : public Error {
public:
    explicit ResourceLimitError(std::size_t limit)
        : Error("intermediate expression exceeds " + std::to_string(limit) + " terms") {}
};

} // namespace epmc

#endif
