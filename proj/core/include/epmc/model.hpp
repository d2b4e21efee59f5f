#ifndef EPMC_MODEL_HPP
#define EPMC_MODEL_HPP

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "epmc/ratfun.hpp"

namespace epmc {

// ---------------------------------------------------------------------------
// Expressions over module variables (guards and updates)
// ---------------------------------------------------------------------------

class IntExpr {
public:
    enum class Kind { Literal, Var, Add, Sub, Mul, Neg };

    static IntExpr literal(long v);
    static IntExpr variable(std::string name);
    static IntExpr binary(Kind k, IntExpr lhs, IntExpr rhs);
    static IntExpr negate(IntExpr e);

    long evaluate(const std::map<std::string, long>& vars) const; // throws UnknownIdentifier
    std::string str() const;

private:
    Kind kind_ = Kind::Literal;
    long value_ = 0;
    std::string var_;
    std::vector<IntExpr> children_;
};

class BoolExpr {
public:
    enum class Kind { True, False, Cmp, And, Or, Not };
    enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

    static BoolExpr literal(bool b);
    static BoolExpr cmp(CmpOp op, IntExpr lhs, IntExpr rhs);
    static BoolExpr logical(Kind k, BoolExpr lhs, BoolExpr rhs);
    static BoolExpr negate(BoolExpr e);

    bool evaluate(const std::map<std::string, long>& vars) const;
    std::string str() const;

private:
    Kind kind_ = Kind::True;
    CmpOp op_ = CmpOp::Eq;
    std::vector<IntExpr> int_children_;
    std::vector<BoolExpr> bool_children_;
};

// ---------------------------------------------------------------------------
// Model source AST
// ---------------------------------------------------------------------------

struct ConstantDecl {
    std::string name;
    std::optional<std::string> value_text; // absent: unbound model parameter
    std::size_t position = 0;
};

struct VariableDecl {
    std::string name;
    long lo = 0, hi = 0, init = 0;
};

struct CommandBranch {
    std::string probability_text;
    std::string update_var; // empty: keep state
    IntExpr update_expr;
};

struct Command {
    BoolExpr guard;
    std::vector<CommandBranch> branches;
    std::size_t position = 0;
};

struct LabelDef {
    std::string name;
    BoolExpr expr;
};

struct RewardItem {
    BoolExpr guard;
    std::string expr_text;
};

struct RewardBlock {
    std::string name;
    std::vector<RewardItem> items;
};

/// `/// id: pattern_name(actual, ...)` attached to a model. The derived model
/// parameter for a pattern property `prop` is named `prop` + id.
struct PatternAnnotation {
    std::string id;
    std::string pattern_name;
    std::vector<std::string> actuals;
    std::size_t position = 0;
};

struct ModelSource {
    std::string module_name;
    std::vector<ConstantDecl> constants;
    std::vector<VariableDecl> variables;
    std::vector<Command> commands;
    std::vector<LabelDef> labels;
    std::vector<RewardBlock> rewards;
    std::vector<PatternAnnotation> annotations;
    /// Sampling interval for admissibility checks; `// @range lo hi` overrides.
    double sample_lo = 0.01, sample_hi = 0.99;
};

/// Parse the supported model language subset (see README for the grammar).
ModelSource parse_model(std::string_view text);

// ---------------------------------------------------------------------------
// Explicit-state parametric Markov chain
// ---------------------------------------------------------------------------

struct Transition {
    int target = 0;
    RationalFunction probability;
};

/// Explicit parametric MC. Immutable after construction; every state is
/// reachable from `init` and every row sums to 1 symbolically.
struct ParametricMC {
    int init = 0;
    std::vector<std::vector<Transition>> transitions;        // per source, by target
    std::map<std::string, std::vector<char>> labels;         // label -> per-state flag
    std::map<std::string, std::vector<RationalFunction>> rewards;
    std::vector<Variable> parameters;                        // sorted by name
    std::vector<std::string> state_names;

    int num_states() const { return static_cast<int>(transitions.size()); }
    bool is_absorbing(int s) const;
    const RationalFunction* probability(int from, int to) const;
    bool has_label(const std::string& name, int s) const;
    std::vector<int> states_with_label(const std::string& name) const;
};

struct BuildOptions {
    std::size_t max_states = 1'000'000;
    /// Known definitions of annotation-derived parameters. A row whose
    /// symbolic sum is not literally 1 is still accepted when it becomes 1
    /// under this substitution (e.g. outcome-probability families that sum to
    /// 1 only through their pattern closed forms).
    std::map<Variable, RationalFunction> row_sum_substitution;
};

/// Explicit reachable state space of a parsed model. States with no enabled
/// command become absorbing via an implicit self-loop.
ParametricMC build_states(const ModelSource& src, const BuildOptions& opts = {});

struct Diagnostic {
    enum class Kind { Unreachable, RowSumNotOne, NegativeReward, ProbabilityOutOfRange };
    Kind kind;
    std::string message;
};

struct ValidateOptions {
    int samples = 20;
    double lo = 0.01, hi = 0.99;
    std::uint64_t seed = 1;
};

/// Row sums, reachability and sampled reward/probability range checks.
/// An empty result means no problems found.
std::vector<Diagnostic> validate(const ParametricMC& mc, const ValidateOptions& opts = {});

/// Serialize an explicit MC back to model-language text (one state variable,
/// one command per state). Used by the benchmark generators.
std::string to_model_text(const ParametricMC& mc, const std::string& module_name,
                          const std::vector<PatternAnnotation>& annotations = {});

} // namespace epmc

#endif
