#ifndef EPMC_ORACLE_HPP
#define EPMC_ORACLE_HPP

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "epmc/model.hpp"
#include "epmc/properties.hpp"

namespace epmc::oracle {

/// A parametric MC specialized at a concrete valuation.
struct ConcreteMC {
    int init = 0;
    std::vector<std::vector<std::pair<int, double>>> transitions;
    std::map<std::string, std::vector<char>> labels;
    std::map<std::string, std::vector<double>> rewards;

    int num_states() const { return static_cast<int>(transitions.size()); }
};

/// Throws ValueOutOfRange when a transition evaluates outside [0,1] or a row
/// sum drifts beyond 1e-12 from 1.
ConcreteMC specialize(const ParametricMC& mc, const Valuation& v);

/// Ground-truth value of a query on a concrete chain. Solves the reachability
/// and reward linear systems with double-precision LU (partial pivoting);
/// reward queries use the same "0 when reached with probability < 1"
/// convention as the symbolic engine.
double numeric_check(const ConcreteMC& cmc, const Query& q);

// ---------------------------------------------------------------------------
// Admissible-valuation sampling
// ---------------------------------------------------------------------------

struct SampleSpec {
    double lo = 0.01, hi = 0.99;
    /// Parameter groups constrained to sum to 1 (e.g. branch probabilities);
    /// sampled by exact normalization, other parameters iid uniform (lo, hi).
    std::vector<std::vector<std::string>> simplex_groups;
};

Valuation sample_admissible(const std::vector<Variable>& params, std::mt19937_64& rng,
                            const SampleSpec& spec = {});

// ---------------------------------------------------------------------------
// Random fragment models (drive the reduction property suites)
// ---------------------------------------------------------------------------

struct FragmentCase {
    ParametricMC mc;
    std::vector<int> fragment_states;
    Query until_query;  // precondition holds by construction
    Query reward_query; // target avoids the fragment by construction
    bool has_cycle = false;
    /// Atom held by exactly one fragment state: using it in a formula must be
    /// rejected by the until-precondition check.
    std::string non_uniform_atom;
    /// Target set intersecting the fragment: must be rejected by the
    /// reward-precondition check.
    std::vector<int> violating_reward_target;
};

/// Deterministic per seed. size_bound >= 4 bounds the total state count.
FragmentCase random_fragment_model(std::uint64_t seed, int size_bound);

// ---------------------------------------------------------------------------
// Equivalence reports
// ---------------------------------------------------------------------------

struct EquivalenceReport {
    std::string name;
    int samples = 0;
    double tol = 0.0;
    double max_diff = 0.0;
    bool pass = false;
    std::string note;

    std::string text() const;
    std::string json() const;
};

/// Max |symbolic(v) - numeric_check(model at v, query)| over sampled
/// admissible valuations.
EquivalenceReport equivalence_report(const RationalFunction& symbolic, const ParametricMC& model,
                                     const Query& query, int samples, double tol,
                                     const SampleSpec& spec = {}, std::uint64_t seed = 12345);

} // namespace epmc::oracle

#endif
