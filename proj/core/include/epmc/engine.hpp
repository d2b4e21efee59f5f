#ifndef EPMC_ENGINE_HPP
#define EPMC_ENGINE_HPP

#include <chrono>
#include <optional>
#include <vector>

#include "epmc/model.hpp"
#include "epmc/properties.hpp"

namespace epmc::engine {

/// Graph-level precomputation on the digraph of transitions that are not
/// identically zero. Parametric transitions are assumed strictly positive at
/// admissible valuations (all probability-like parameters strictly inside
/// (0,1)); results are valid on that region only.
struct QualitativeResult {
    std::vector<char> yes;   // probability 1
    std::vector<char> no;    // probability 0
    std::vector<char> maybe; // remainder
};

struct Options {
    std::optional<std::chrono::steady_clock::time_point> deadline;
    std::size_t term_limit = ComputeBudget::kDefaultTermLimit;
};

QualitativeResult qualitative_reach(const ParametricMC& mc, const std::vector<char>& target,
                                    const std::vector<char>& blocked);

/// Deterministic elimination ordering over the maybe-states: greedy minimum
/// degree on the (undirected) transition graph, ties broken by state index.
std::vector<int> pivot_order(const ParametricMC& mc, const std::vector<char>& maybe);

/// Probability of reaching `target` from the initial state, as a canonical
/// rational function of the model parameters.
RationalFunction reach_probability(const ParametricMC& mc, const std::vector<int>& target,
                                   const Options& opts = {});

/// P=? [ phi1 U phi2 ].
RationalFunction until_probability(const ParametricMC& mc, const StateFormula& phi1,
                                   const StateFormula& phi2, const Options& opts = {});

struct RewardResult {
    RationalFunction value;
    /// Set when the target is reached with probability < 1 from the initial
    /// state; the value is then the constant 0 by convention.
    bool prob_less_than_one = false;
};

/// Expected reward cumulated until first reaching `target`.
RewardResult reach_reward(const ParametricMC& mc, const std::string& structure,
                          const std::vector<int>& target, const Options& opts = {});

RationalFunction query_probability(const ParametricMC& mc, const Query& q, const Options& opts = {});
RewardResult query_reward(const ParametricMC& mc, const Query& q, const Options& opts = {});

/// Internal solver, exposed for the pivot-order-independence tests: solves the
/// standard reachability / reward linear system by exact Gaussian elimination
/// over the rational-function field, eliminating states in `order`.
RationalFunction solve_linear_system(const ParametricMC& mc, const std::vector<char>& in_system,
                                     const std::vector<RationalFunction>& constant_part,
                                     const std::vector<int>& order, int wanted_state);

} // namespace epmc::engine

#endif
