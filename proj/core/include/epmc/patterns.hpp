#ifndef EPMC_PATTERNS_HPP
#define EPMC_PATTERNS_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "epmc/model.hpp"
#include "epmc/oracle.hpp"

namespace epmc::patterns {

class UnknownPattern : public PatternError {
public:
    explicit UnknownPattern(const std::string& name_)
        : PatternError("unknown pattern: " + name_), name(name_) {}
    std::string name;
};

class ArityMismatch : public PatternError {
public:
    ArityMismatch(const std::string& pattern, std::size_t expected, std::size_t got)
        : PatternError("pattern " + pattern + " expects " + std::to_string(expected) +
                       " arguments, got " + std::to_string(got)) {}
};

class UnknownProperty : public PatternError {
public:
    UnknownProperty(const std::string& pattern, const std::string& prop)
        : PatternError("pattern " + pattern + " has no property '" + prop + "'") {}
};

class UnknownFormalInExpression : public PatternError {
public:
    UnknownFormalInExpression(const std::string& pattern, const std::string& prop,
                              const std::string& var)
        : PatternError("expression for " + pattern + "." + prop + " uses '" + var +
                       "', which is not a formal parameter"),
          name(var) {}
    std::string name;
};

/// Named bundle of closed-form QoS expressions over an ordered formal
/// parameter list.
struct PatternDefinition {
    std::string name;
    std::vector<std::string> formals;
    std::vector<std::pair<std::string, RationalFunction>> properties; // ordered

    const RationalFunction* property(const std::string& prop) const;
    bool has_formal(const std::string& name_) const;
};

struct PatternRepository {
    std::vector<PatternDefinition> definitions; // ordered
    std::string provenance;

    const PatternDefinition* find(const std::string& name) const;
    void add(PatternDefinition def); // throws PatternError on duplicate names
};

/// Repository text format: entries `Name(f1,...,fk): prop=expr, ...;`
/// with `#` comments; lines of just `...` are tolerated as ellipses.
PatternRepository parse_repository(std::string_view text);

/// Load from a `builtin:sbs?n=K` / `builtin:multitier?m=K&nmax=J` spec or
/// from a repository file path.
PatternRepository load_repository(const std::string& spec);

// ---------------------------------------------------------------------------
// Builtin repositories
// ---------------------------------------------------------------------------

/// Service patterns for operations backed by n alternative services:
/// SEQ, PAR, PROB, SEQ_R, SEQ_R1, PAR_R, PROB_R, PROB_R1, each with
/// properties prob/cost/time over formals p_i, c_i, t_i (plus branch
/// probabilities x_i and retry probabilities r or r_i where applicable).
PatternRepository builtin_sbs(int n, int max_n = 8);

/// Server patterns BASIC, VIRTUALIZED, VIRTUALIZED_M for every hosted-tier
/// shape (n_1,...,n_k) with 1 <= k <= m and n_i <= n_max. Entry names carry
/// the shape (e.g. VIRTUALIZED_2_1); properties are the b-vector outcome
/// probabilities named p_<digits> with '2' standing for "2 or more"
/// (e.g. p_02).
PatternRepository builtin_multitier(int m, int n_max);

// ---------------------------------------------------------------------------
// Instantiation
// ---------------------------------------------------------------------------

/// Substitute the annotation's actual expressions for the pattern's formals
/// in `property`; returns the derived model parameter name (property + id)
/// and the canonical expression.
std::pair<std::string, RationalFunction> instantiate(const PatternRepository& repo,
                                                     const PatternAnnotation& ann,
                                                     const std::string& property);

// ---------------------------------------------------------------------------
// Pattern operational semantics (verification oracle models)
// ---------------------------------------------------------------------------

enum class SBSKind { SEQ, PAR, PROB, SEQ_R, SEQ_R1, PAR_R, PROB_R, PROB_R1 };

const char* sbs_kind_name(SBSKind k);
std::optional<SBSKind> sbs_kind_from(const std::string& name);

/// Formal parameter names of the builtin SBS patterns, in order
/// (e.g. SEQ_R with n=2: p1,c1,t1,p2,c2,t2,r).
std::vector<std::string> sbs_formals(SBSKind kind, int n);

/// Explicit MC of a pattern in associated-MC shape (absorbing end state).
/// `success_target` is the success output; prob = P(F success), and
/// cost/time are the rewards cumulated to the end state.
struct PatternModel {
    ParametricMC mc;
    int success_state = 0;
    int end_state = 0;
};

/// For the PROB family the last branch probability is 1 - x_1 - ... - x_{n-1}
/// so rows sum to 1 symbolically; closed forms must be compared under the
/// same substitution.
PatternModel sbs_pattern_mc(SBSKind kind, int n);

enum class ServerKind { BASIC, VIRTUALIZED, VIRTUALIZED_M };

const char* server_kind_name(ServerKind k);

/// Explicit MC of a server pattern for the hosted-instance shape `counts`;
/// for each b-vector the matching absorbing outcome state carries the label
/// `p_<digits>` (missing outcomes have probability 0).
struct ServerModel {
    ParametricMC mc;
    std::vector<std::string> outcome_labels; // all 3^k b-vector labels
};

ServerModel multitier_pattern_mc(ServerKind kind, const std::vector<int>& counts);

/// Formal parameter names used by the builtin multitier patterns, in order.
std::vector<std::string> server_formals(ServerKind kind);

// ---------------------------------------------------------------------------
// Repository verification (closed forms vs. operational semantics)
// ---------------------------------------------------------------------------

struct VerifyOptions {
    int samples = 50;
    double tol = 1e-9;
    std::uint64_t seed = 2024;
};

struct VerifyResult {
    bool pass = true;
    std::vector<std::string> lines;    // one line per check
    std::vector<std::string> failures; // subset describing failures
};

/// Checks a repository entry-by-entry against engine results on the pattern
/// semantics MCs: canonical equality where the pattern shape is recognized,
/// plus sampled numeric agreement; multitier entries additionally verify the
/// sum-to-1 normalization across b-vectors.
VerifyResult verify_repository(const PatternRepository& repo, const VerifyOptions& opts = {});

} // namespace epmc::patterns

#endif
