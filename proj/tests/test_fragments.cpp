#include <doctest.h>

#include "epmc/expr.hpp"
#include "epmc/fragments.hpp"
#include "epmc/generators.hpp"
#include "epmc/oracle.hpp"

#include "test_util.hpp"

using namespace epmc;
using namespace epmc::fragments;

namespace {

ParametricMC running_mc() {
    return build_states(parse_model(gen::running_example().monolithic_model));
}

using epmc_test::st;
using epmc_test::sts;

} // namespace

TEST_CASE("make_fragment accepts the workflow operation blocks") {
    auto mc = running_mc();
    auto f1 = make_fragment(mc, sts(mc, {0, 1, 2, 3}));
    CHECK(f1.entry == st(mc, 0));
    CHECK(f1.outputs == sts(mc, {2, 3}));

    auto f2 = make_fragment(mc, sts(mc, {4, 5, 6, 7, 8}));
    CHECK(f2.entry == st(mc, 4));
    CHECK(f2.outputs == sts(mc, {7, 8}));

    // the retry operation keeps its cycle inside the fragment
    auto f3 = make_fragment(mc, sts(mc, {9, 10, 11, 12}));
    CHECK(f3.entry == st(mc, 9));
    CHECK(f3.outputs == sts(mc, {11, 12}));
}

TEST_CASE("make_fragment rejections") {
    auto mc = running_mc();
    CHECK_THROWS_AS(make_fragment(mc, sts(mc, {0, 4})), MultipleEntryStates);
    CHECK_THROWS_AS(make_fragment(mc, sts(mc, {13})), AbsorbingInFragment);
    // output with a back edge: {9,10,11} leaves 12 outside, but 10 -> 9 stays
    // inside while 10 also exits, fine; {10,11} instead has two entries
    CHECK_THROWS_AS(make_fragment(mc, sts(mc, {10, 11})), MultipleEntryStates);
    // no outputs: a set capturing both absorbing states is rejected earlier;
    // use the full transient prefix which only exits via itself
    CHECK_THROWS_AS(make_fragment(mc, {}), FragmentError);
}

TEST_CASE("output back edge is rejected") {
    // 0 -> 1 -> 2, 2 -> 1 (back) and 2 -> 3, 3 absorbing
    ParametricMC mc;
    mc.init = 0;
    mc.transitions.resize(4);
    auto p = RationalFunction::variable("p");
    mc.transitions[0].push_back({1, RationalFunction(1)});
    mc.transitions[1].push_back({2, RationalFunction(1)});
    mc.transitions[2].push_back({1, p});
    mc.transitions[2].push_back({3, 1 - p});
    mc.transitions[3].push_back({3, RationalFunction(1)});
    mc.parameters = {Variable("p")};
    CHECK_THROWS_AS(make_fragment(mc, {1, 2}), OutputBackEdge);
}

TEST_CASE("associated MC of the first operation") {
    auto mc = running_mc();
    auto f1 = make_fragment(mc, sts(mc, {0, 1, 2, 3}));
    auto assoc = associated_mc(mc, f1);
    CHECK(assoc.mc.num_states() == 5);
    // outputs move to the end state with probability 1
    int e = assoc.end_state;
    CHECK(*assoc.mc.probability(assoc.index_of.at(st(mc, 2)), e) == RationalFunction(1));
    CHECK(*assoc.mc.probability(assoc.index_of.at(st(mc, 3)), e) == RationalFunction(1));
    CHECK(assoc.mc.is_absorbing(e));
    CHECK(assoc.mc.has_label(assoc.output_proposition(st(mc, 2)), assoc.index_of.at(st(mc, 2))));
    CHECK(assoc.mc.has_label("end", e));
    CHECK(validate(assoc.mc).empty());

    // retry fragment keeps its interior cycle
    auto f3 = make_fragment(mc, sts(mc, {9, 10, 11, 12}));
    auto assoc3 = associated_mc(mc, f3);
    auto* retry = assoc3.mc.probability(assoc3.index_of.at(st(mc, 10)), assoc3.index_of.at(st(mc, 9)));
    REQUIRE(retry != nullptr);
    CHECK(*retry == parse_expression("(1-p32)*r"));
    CHECK(validate(assoc3.mc).empty());
}

TEST_CASE("single-state fragment") {
    ParametricMC mc;
    mc.init = 0;
    mc.transitions.resize(3);
    auto p = RationalFunction::variable("p");
    mc.transitions[0].push_back({1, p});
    mc.transitions[0].push_back({2, 1 - p});
    mc.transitions[1].push_back({2, RationalFunction(1)});
    mc.transitions[2].push_back({2, RationalFunction(1)});
    mc.parameters = {Variable("p")};
    auto f = make_fragment(mc, {1});
    CHECK(f.entry == 1);
    CHECK(f.outputs == std::vector<int>{1});
    auto assoc = associated_mc(mc, f);
    CHECK(assoc.mc.num_states() == 2);
    CHECK(*assoc.mc.probability(0, 1) == RationalFunction(1));
}

TEST_CASE("abstract MC in computed mode reproduces the published transition") {
    auto mc = running_mc();
    auto f1 = make_fragment(mc, sts(mc, {0, 1, 2, 3}));
    auto abs1 = induce_abstract(mc, f1, AbstractMode::Computed);
    // P'(zbar, s4) = prob_{s2} * x
    auto prob1 = parse_expression("p11+(1-p11)*p12");
    auto* t = abs1.mc.probability(abs1.abstract_state, abs1.index_of.at(st(mc, 4)));
    REQUIRE(t != nullptr);
    CHECK(*t == prob1 * parse_expression("x"));
    // P'(s12, zbar) copies the entry edge... the re-entry edge is from s11
    auto* back = abs1.mc.probability(abs1.index_of.at(st(mc, 11)), abs1.abstract_state);
    REQUIRE(back != nullptr);
    CHECK(*back == parse_expression("y"));
    // the abstract state keeps the operation label common to the fragment
    CHECK(abs1.mc.has_label("op1", abs1.abstract_state));
    CHECK(!abs1.mc.has_label("op2", abs1.abstract_state));
    // fragment rewards are the cumulative time/cost to traverse the fragment
    CHECK(abs1.fragment_rewards.at("time") == parse_expression("t11+(1-p11)*t12"));
    CHECK(validate(abs1.mc).empty());
}

TEST_CASE("abstract MC in symbolic mode uses derived parameter names") {
    auto mc = running_mc();
    auto f1 = make_fragment(mc, sts(mc, {0, 1, 2, 3}));
    auto abs1 = induce_abstract(mc, f1, AbstractMode::Symbolic, "1");
    auto* t = abs1.mc.probability(abs1.abstract_state, abs1.index_of.at(st(mc, 4)));
    REQUIRE(t != nullptr);
    CHECK(*t == parse_expression("prob1*x"));
    // the complement output keeps rows summing to 1
    auto* tf = abs1.mc.probability(abs1.abstract_state, abs1.index_of.at(st(mc, 13)));
    REQUIRE(tf != nullptr);
    CHECK(*tf == parse_expression("1-prob1"));
    CHECK(abs1.fragment_rewards.at("time") == parse_expression("time1"));
    CHECK(validate(abs1.mc).empty());
}

TEST_CASE("successive abstraction collapses the workflow to five states") {
    auto mc = running_mc();
    auto step1 =
        induce_abstract(mc, make_fragment(mc, sts(mc, {0, 1, 2, 3})), AbstractMode::Computed);
    // remap the second fragment through the abstraction
    std::vector<int> f2;
    for (int s : sts(mc, {4, 5, 6, 7, 8})) f2.push_back(step1.index_of.at(s));
    auto step2 = induce_abstract(step1.mc, make_fragment(step1.mc, f2), AbstractMode::Computed);
    std::vector<int> f3;
    for (int s : sts(mc, {9, 10, 11, 12})) f3.push_back(step2.index_of.at(step1.index_of.at(s)));
    auto step3 = induce_abstract(step2.mc, make_fragment(step2.mc, f3), AbstractMode::Computed);

    CHECK(step3.mc.num_states() == 5);
    int transitions = 0;
    for (int s = 0; s < 5; ++s) transitions += static_cast<int>(step3.mc.transitions[s].size());
    CHECK(transitions == 10);
    CHECK(validate(step3.mc).empty());
}

TEST_CASE("pass-through fragment with a single output") {
    ParametricMC mc;
    mc.init = 0;
    mc.transitions.resize(4);
    auto p = RationalFunction::variable("p");
    mc.transitions[0].push_back({1, RationalFunction(1)});
    mc.transitions[1].push_back({2, p});
    mc.transitions[1].push_back({3, 1 - p});
    mc.transitions[2].push_back({3, RationalFunction(1)});
    mc.transitions[3].push_back({3, RationalFunction(1)});
    mc.parameters = {Variable("p")};
    auto f = make_fragment(mc, {2});
    auto abs = induce_abstract(mc, f, AbstractMode::Computed);
    RationalFunction sum;
    for (const auto& t : abs.mc.transitions[abs.abstract_state]) sum = sum + t.probability;
    CHECK(sum == RationalFunction(1));
    CHECK(validate(abs.mc).empty());
}

TEST_CASE("until precondition checks label uniformity") {
    auto mc = running_mc();
    auto f1 = make_fragment(mc, sts(mc, {0, 1, 2, 3}));
    auto phi1 = StateFormula::negation(StateFormula::atom("op3"));
    auto phi2 = StateFormula::atom("fail");
    CHECK(check_until_precondition(mc, f1, phi1, phi2));
    CHECK(check_until_precondition(mc, f1, StateFormula::truth(), StateFormula::truth()));

    // plant a non-uniform atom
    auto mc2 = mc;
    std::vector<char> flags(mc2.num_states(), 0);
    flags[st(mc, 1)] = 1;
    mc2.labels.emplace("odd", flags);
    CHECK(!check_until_precondition(mc2, f1, StateFormula::atom("odd"), phi2));
    CHECK_THROWS_AS(check_until_precondition(mc, f1, StateFormula::atom("nope"), phi2),
                    UnknownAtom);
}

TEST_CASE("reward precondition checks target disjointness") {
    auto mc = running_mc();
    auto f1 = make_fragment(mc, sts(mc, {0, 1, 2, 3}));
    CHECK(check_reward_precondition(f1, sts(mc, {13, 14})));
    CHECK(!check_reward_precondition(f1, sts(mc, {1, 13})));
    CHECK(check_reward_precondition(f1, {}));
}

TEST_CASE("reduction preserves results on random fragment models") {
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        auto fc = oracle::random_fragment_model(seed, 12);
        REQUIRE(validate(fc.mc).empty());
        auto frag = make_fragment(fc.mc, fc.fragment_states);
        REQUIRE(check_until_precondition(fc.mc, frag, fc.until_query.phi1, fc.until_query.phi2));
        auto abs = induce_abstract(fc.mc, frag, AbstractMode::Computed);

        auto direct = engine::query_probability(fc.mc, fc.until_query);
        auto reduced = engine::query_probability(abs.mc, fc.until_query);
        CHECK(direct == reduced);

        auto dr = engine::query_reward(fc.mc, fc.reward_query);
        auto rr = engine::query_reward(abs.mc, fc.reward_query);
        CHECK(dr.value == rr.value);
        ++checked;
    }
    CHECK(checked == 25);
}
