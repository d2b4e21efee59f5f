#include <cassert>
#include <functional>
#include <map>
#include <set>

#include "epmc/patterns.hpp"

namespace epmc::patterns {

namespace {

RationalFunction var(const std::string& name) {
    return RationalFunction::variable(Variable(name));
}

RationalFunction var(const std::string& base, int i) {
    return var(base + std::to_string(i));
}

void finish(ParametricMC& mc) {
    std::set<Variable> params;
    for (const auto& row : mc.transitions)
        for (const auto& t : row) t.probability.collect_variables(params);
    for (const auto& [name, rho] : mc.rewards)
        for (const auto& r : rho) r.collect_variables(params);
    mc.parameters.assign(params.begin(), params.end());
    if (mc.state_names.empty())
        for (int s = 0; s < mc.num_states(); ++s) mc.state_names.push_back("s" + std::to_string(s));
}

// Branch probability of invoking service i in the PROB family: the last
// branch is the complement so rows sum to 1 symbolically.
RationalFunction branch_prob(int i, int n) {
    if (i < n - 1) return var("x", i + 1);
    RationalFunction rest(1);
    for (int j = 1; j < n; ++j) rest = rest - var("x", j);
    return rest;
}

} // namespace

PatternModel sbs_pattern_mc(SBSKind kind, int n) {
    if (n < 1) throw PatternError("service count must be >= 1");
    PatternModel pm;
    ParametricMC& mc = pm.mc;
    bool prob_family = kind == SBSKind::PROB || kind == SBSKind::PROB_R || kind == SBSKind::PROB_R1;
    bool par_family = kind == SBSKind::PAR || kind == SBSKind::PAR_R;

    // State layout, per kind:
    //   pick (PROB family only), invocation states, per-service retry
    //   decisions (R1 kinds), shared retry decision (_R kinds), succ, fail,
    //   end.
    int pick = prob_family ? 0 : -1;
    int inv0 = prob_family ? 1 : 0;
    int after_inv = inv0 + n;
    bool per_service_retry = kind == SBSKind::SEQ_R1 || kind == SBSKind::PROB_R1;
    bool shared_retry = kind == SBSKind::SEQ_R || kind == SBSKind::PAR_R || kind == SBSKind::PROB_R;
    int dec0 = per_service_retry ? after_inv : -1;
    int shared_dec = shared_retry ? after_inv : -1;
    int after_dec = after_inv + (per_service_retry ? n : 0) + (shared_retry ? 1 : 0);
    int succ = after_dec, fail = succ + 1, end = fail + 1;
    int total = end + 1;

    mc.init = prob_family ? pick : inv0;
    mc.transitions.resize(total);

    auto go = [&](int from, int to, RationalFunction p) {
        mc.transitions[from].push_back({to, std::move(p)});
    };

    if (prob_family)
        for (int i = 0; i < n; ++i) go(pick, inv0 + i, branch_prob(i, n));

    for (int i = 0; i < n; ++i) {
        RationalFunction p = var("p", i + 1);
        int on_fail;
        if (prob_family) {
            on_fail = per_service_retry ? dec0 + i : (shared_retry ? shared_dec : fail);
        } else if (per_service_retry) {
            on_fail = dec0 + i;
        } else if (i + 1 < n) {
            on_fail = inv0 + i + 1; // try the next service
        } else {
            on_fail = shared_retry ? shared_dec : fail;
        }
        go(inv0 + i, succ, p);
        go(inv0 + i, on_fail, 1 - p);
    }

    if (per_service_retry) {
        for (int i = 0; i < n; ++i) {
            RationalFunction r = var("r", i + 1);
            go(dec0 + i, inv0 + i, r); // re-invoke the same service
            int on_give_up;
            if (prob_family) {
                on_give_up = fail;
            } else {
                on_give_up = i + 1 < n ? inv0 + i + 1 : fail;
            }
            go(dec0 + i, on_give_up, 1 - r);
        }
    }
    if (shared_retry) {
        RationalFunction r = var("r");
        go(shared_dec, mc.init, r); // restart the whole pattern
        go(shared_dec, fail, 1 - r);
    }
    go(succ, end, RationalFunction(1));
    go(fail, end, RationalFunction(1));
    go(end, end, RationalFunction(1));

    // Rewards. PAR invokes everything at once: the whole cost is charged up
    // front and execution time accrues as the increment over the previous
    // (faster) service, assuming t1 <= ... <= tn.
    std::vector<RationalFunction> cost(total), time(total);
    if (par_family) {
        RationalFunction all_costs;
        for (int i = 0; i < n; ++i) all_costs = all_costs + var("c", i + 1);
        cost[inv0] = all_costs;
        time[inv0] = var("t", 1);
        for (int i = 1; i < n; ++i) time[inv0 + i] = var("t", i + 1) - var("t", i);
    } else {
        for (int i = 0; i < n; ++i) {
            cost[inv0 + i] = var("c", i + 1);
            time[inv0 + i] = var("t", i + 1);
        }
    }
    mc.rewards.emplace("cost", std::move(cost));
    mc.rewards.emplace("time", std::move(time));

    std::vector<char> succ_flags(total, 0), end_flags(total, 0);
    succ_flags[succ] = 1;
    end_flags[end] = 1;
    mc.labels.emplace("succ", std::move(succ_flags));
    mc.labels.emplace("end", std::move(end_flags));

    pm.success_state = succ;
    pm.end_state = end;
    finish(mc);
    return pm;
}

// ---------------------------------------------------------------------------
// Server patterns
// ---------------------------------------------------------------------------

namespace {

// Key for the instance-by-instance survivor-counting walk.
struct WalkState {
    int phase;              // 0 = VM survival, 1 = migration entry, 2 = post-migration VM step
    int tier, instance;     // position within the shape
    std::vector<int> count; // per-tier survivors, saturated at 2

    bool operator<(const WalkState& o) const {
        if (phase != o.phase) return phase < o.phase;
        if (tier != o.tier) return tier < o.tier;
        if (instance != o.instance) return instance < o.instance;
        return count < o.count;
    }
};

} // namespace

ServerModel multitier_pattern_mc(ServerKind kind, const std::vector<int>& counts) {
    if (counts.empty()) throw PatternError("server pattern needs at least one tier");
    for (int c : counts)
        if (c < 1) throw PatternError("tier instance counts must be >= 1");
    int k = static_cast<int>(counts.size());

    ServerModel sm;
    ParametricMC& mc = sm.mc;

    // States are created on demand: 0 is the start, then outcome states per
    // reached b-vector, walk states, and a final absorbing end state.
    std::map<WalkState, int> walk_index;
    std::map<std::vector<int>, int> outcome_index;
    std::vector<std::vector<Transition>> rows;
    rows.emplace_back(); // start

    auto new_state = [&] {
        rows.emplace_back();
        return static_cast<int>(rows.size()) - 1;
    };
    std::vector<std::pair<std::vector<int>, int>> outcomes;
    auto outcome = [&](const std::vector<int>& b) {
        auto it = outcome_index.find(b);
        if (it != outcome_index.end()) return it->second;
        int s = new_state();
        outcome_index.emplace(b, s);
        outcomes.emplace_back(b, s);
        return s;
    };

    // Advance past the current instance: move to the next walk state or, at
    // the end of the shape, to the outcome for the accumulated counts.
    std::function<int(WalkState)> walk_state_index = [&](WalkState w) -> int {
        auto it = walk_index.find(w);
        if (it != walk_index.end()) return it->second;
        int s = new_state();
        walk_index.emplace(w, s);
        return s;
    };
    auto advance = [&](int base_phase, int tier, int instance, std::vector<int> count) -> int {
        ++instance;
        while (tier < k && instance >= counts[tier]) {
            ++tier;
            instance = 0;
        }
        if (tier >= k) return outcome(count);
        return walk_state_index({base_phase, tier, instance, std::move(count)});
    };

    RationalFunction p = var("p");
    RationalFunction pVM = var("pVM");

    // Targets are resolved before rows are touched: resolving may allocate
    // new states and move the row storage.
    auto push = [&](int from, int to, RationalFunction prob) {
        rows[from].push_back({to, std::move(prob)});
    };

    std::vector<int> zeros(k, 0);
    if (kind == ServerKind::BASIC) {
        std::vector<int> full(k);
        for (int i = 0; i < k; ++i) full[i] = counts[i] > 1 ? 2 : 1;
        int up = outcome(full);
        int down = outcome(zeros);
        push(0, up, p);
        push(0, down, 1 - p);
    } else {
        int first_walk = walk_state_index({0, 0, 0, zeros});
        push(0, first_walk, p);
        if (kind == ServerKind::VIRTUALIZED) {
            int down = outcome(zeros);
            push(0, down, 1 - p);
        } else {
            RationalFunction pdetect = var("pdetect");
            int first_mig = walk_state_index({1, 0, 0, zeros});
            int down = outcome(zeros);
            push(0, first_mig, (1 - p) * pdetect);
            push(0, down, (1 - p) * (1 - pdetect));
        }
    }

    // Expand walk states until the frontier is exhausted; walk_index grows
    // while we iterate, so scan repeatedly.
    std::set<int> expanded;
    bool progress = true;
    while (progress) {
        progress = false;
        auto snapshot = walk_index;
        for (const auto& [w, s] : snapshot) {
            if (expanded.count(s)) continue;
            expanded.insert(s);
            progress = true;
            std::vector<int> bumped = w.count;
            bumped[w.tier] = std::min(2, bumped[w.tier] + 1);
            if (w.phase == 0) {
                // server up: the VM survives with probability pVM
                int survive = advance(0, w.tier, w.instance, bumped);
                int lost = advance(0, w.tier, w.instance, w.count);
                push(s, survive, pVM);
                push(s, lost, 1 - pVM);
            } else if (w.phase == 1) {
                // migration attempt with geometric retries
                RationalFunction pmigrate = var("pmigrate");
                RationalFunction r = var("r");
                WalkState vm_step = w;
                vm_step.phase = 2;
                int step = walk_state_index(vm_step);
                int lost = advance(1, w.tier, w.instance, w.count);
                push(s, step, pmigrate);
                push(s, s, (1 - pmigrate) * r); // retry the migration
                push(s, lost, (1 - pmigrate) * (1 - r)); // VM lost
            } else {
                // migrated VM still has to survive the period
                int survive = advance(1, w.tier, w.instance, bumped);
                int lost = advance(1, w.tier, w.instance, w.count);
                push(s, survive, pVM);
                push(s, lost, 1 - pVM);
            }
        }
    }

    int end = new_state();
    for (const auto& [b, s] : outcomes) rows[s].push_back({end, RationalFunction(1)});
    rows[end].push_back({end, RationalFunction(1)});

    mc.init = 0;
    mc.transitions = std::move(rows);
    int total = mc.num_states();

    std::vector<int> b(k, 0);
    auto name_of = [](const std::vector<int>& bv) {
        std::string s = "p_";
        for (int d : bv) s += std::to_string(d);
        return s;
    };
    do {
        std::vector<char> flags(total, 0);
        auto it = outcome_index.find(b);
        if (it != outcome_index.end()) flags[it->second] = 1;
        mc.labels.emplace(name_of(b), std::move(flags));
        sm.outcome_labels.push_back(name_of(b));
        bool done = true;
        for (int i = k - 1; i >= 0; --i) {
            if (b[i] < 2) {
                ++b[i];
                for (int j = i + 1; j < k; ++j) b[j] = 0;
                done = false;
                break;
            }
        }
        if (done) break;
    } while (true);
    {
        std::vector<char> flags(total, 0);
        flags[end] = 1;
        mc.labels.emplace("end", std::move(flags));
    }
    finish(mc);
    return sm;
}

} // namespace epmc::patterns
