#ifndef EPMC_FRAGMENTS_HPP
#define EPMC_FRAGMENTS_HPP

#include <map>
#include <string>
#include <vector>

#include "epmc/engine.hpp"
#include "epmc/model.hpp"
#include "epmc/properties.hpp"

namespace epmc::fragments {

class MultipleEntryStates : public FragmentError {
public:
    MultipleEntryStates(std::vector<int> entries_, const std::string& desc)
        : FragmentError("fragment has multiple entry states: " + desc), entries(std::move(entries_)) {}
    std::vector<int> entries;
};

class NoEntryState : public FragmentError {
public:
    NoEntryState() : FragmentError("fragment has no entry state") {}
};

class NoOutputStates : public FragmentError {
public:
    NoOutputStates() : FragmentError("fragment has no output states") {}
};

class OutputBackEdge : public FragmentError {
public:
    OutputBackEdge(int from_, int to_)
        : FragmentError("output state " + std::to_string(from_) +
                        " transitions back into the fragment (to state " + std::to_string(to_) + ")"),
          from(from_), to(to_) {}
    int from, to;
};

class AbsorbingInFragment : public FragmentError {
public:
    explicit AbsorbingInFragment(int state_)
        : FragmentError("state " + std::to_string(state_) + " is absorbing; fragments contain only "
                        "transient states"),
          state(state_) {}
    int state;
};

/// Single-entry multi-exit state subset of a host chain. `states` and
/// `outputs` are sorted host state indices.
struct Fragment {
    std::vector<int> states;
    int entry = 0;
    std::vector<int> outputs;

    bool contains(int s) const;
};

/// Validate a state subset as a fragment. The initial state may belong to the
/// fragment only as its entry; it always counts as an entry candidate since
/// runs begin there.
Fragment make_fragment(const ParametricMC& mc, const std::vector<int>& states);

/// The fragment plus a fresh absorbing end state: outputs (and the end state)
/// move to the end state with probability 1, interior transitions are copied,
/// and each output state z gains the fresh proposition "out<z>" while the end
/// state carries "end". Host rewards are inherited on fragment states.
struct AssociatedMC {
    ParametricMC mc;
    int end_state = 0;
    std::vector<int> host_of;    // associated index -> host index (-1 for end)
    std::map<int, int> index_of; // host index -> associated index

    std::string output_proposition(int host_state) const;
};

AssociatedMC associated_mc(const ParametricMC& mc, const Fragment& f);

enum class AbstractMode {
    /// Per-output probabilities and per-structure rewards become fresh
    /// parameters (the stage-2 view). With k outputs the first k-1 get fresh
    /// names and the last is their complement, so rows still sum to 1.
    Symbolic,
    /// Probabilities and rewards are computed on the associated MC.
    Computed,
};

struct AbstractMC {
    ParametricMC mc;
    int abstract_state = 0;
    std::vector<int> host_of;    // abstract index -> host index (-1 for the abstract state)
    std::map<int, int> index_of; // host index -> abstract index (fragment states map to abstract_state)
    std::vector<std::pair<int, RationalFunction>> output_probabilities; // (host output state, prob_z)
    std::map<std::string, RationalFunction> fragment_rewards;           // structure -> reward of z-bar
};

/// Collapse the fragment to a single state per the induced-abstraction rules:
/// P'(z-bar, s') = sum_z prob_z P(z, s'), P'(s, z-bar) = P(s, z0), and the
/// abstract state is labelled with the propositions common to the whole
/// fragment and carries the fragment's cumulative reward per structure.
/// In Symbolic mode fresh names follow the property-name + id convention
/// ("prob" + id, structure name + id).
AbstractMC induce_abstract(const ParametricMC& mc, const Fragment& f, AbstractMode mode,
                           const std::string& symbol_id = "F", const engine::Options& opts = {});

/// True iff every atomic proposition of phi1/phi2 holds on all fragment
/// states or on none (the until-reduction precondition).
bool check_until_precondition(const ParametricMC& mc, const Fragment& f, const StateFormula& phi1,
                              const StateFormula& phi2);

/// True iff the target set avoids the fragment (the reward-reduction
/// precondition).
bool check_reward_precondition(const Fragment& f, const std::vector<int>& target);

} // namespace epmc::fragments

#endif
