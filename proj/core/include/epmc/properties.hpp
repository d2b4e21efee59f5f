#ifndef EPMC_PROPERTIES_HPP
#define EPMC_PROPERTIES_HPP

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "epmc/model.hpp"

namespace epmc {

/// Propositional state formula over atomic propositions (model labels).
class StateFormula {
public:
    enum class Kind { True, Atom, Not, And, Or };

    static StateFormula truth();
    static StateFormula atom(std::string name);
    static StateFormula negation(StateFormula f);
    static StateFormula conjunction(StateFormula a, StateFormula b);
    static StateFormula disjunction(StateFormula a, StateFormula b);

    Kind kind() const { return kind_; }
    const std::string& atom_name() const { return atom_; }
    const StateFormula& child(int i) const { return children_[i]; }

    void collect_atoms(std::vector<std::string>& into) const;
    std::string str() const;

private:
    Kind kind_ = Kind::True;
    std::string atom_;
    std::vector<StateFormula> children_;
};

/// Quantitative query: P=? [ phi1 U phi2 ], P=? [ F phi ] or
/// R{"name"}=? [ F phi ]. Only unbounded, non-nested forms.
struct Query {
    enum class Kind { ProbUntil, ProbReach, RewardReach };
    Kind kind = Kind::ProbReach;
    StateFormula phi1; // `true` for ProbReach / RewardReach
    StateFormula phi2;
    std::string reward_structure; // RewardReach only
    std::string text;             // original source text

    bool is_reward() const { return kind == Kind::RewardReach; }
};

/// Throws SyntaxError on malformed input and UnsupportedOperator for the
/// out-of-scope forms (X, bounded until, I=k, C<=k, S, and P/R with a bound).
Query parse_property(std::string_view text);

/// One query per non-empty line; '#' starts a comment.
std::vector<Query> parse_property_file(std::string_view text);

/// Exact satisfaction set; throws UnknownAtom for undeclared propositions.
std::vector<char> sat_states(const ParametricMC& mc, const StateFormula& f);

} // namespace epmc

#endif
