#include <doctest.h>

#include "epmc/generators.hpp"
#include "epmc/properties.hpp"

#include "test_util.hpp"

using namespace epmc;

TEST_CASE("property parsing") {
    auto q1 = parse_property("P=? [ F \"succ\" ]");
    CHECK(q1.kind == Query::Kind::ProbReach);
    CHECK(q1.phi2.kind() == StateFormula::Kind::Atom);
    CHECK(q1.phi2.atom_name() == "succ");

    auto q2 = parse_property("P=? [ !\"op3\" U \"fail\" ]");
    CHECK(q2.kind == Query::Kind::ProbUntil);
    CHECK(q2.phi1.kind() == StateFormula::Kind::Not);

    auto q3 = parse_property("R{\"time\"}=? [ F \"succ\" | \"fail\" ]");
    CHECK(q3.kind == Query::Kind::RewardReach);
    CHECK(q3.reward_structure == "time");
    CHECK(q3.phi2.kind() == StateFormula::Kind::Or);

    // bare atom names work too
    auto q4 = parse_property("P=? [ F succ ]");
    CHECK(q4.phi2.atom_name() == "succ");
}

TEST_CASE("unsupported operators are named") {
    CHECK_THROWS_AS(parse_property("P=? [ X \"succ\" ]"), UnsupportedOperator);
    CHECK_THROWS_AS(parse_property("P=? [ F<=5 \"succ\" ]"), UnsupportedOperator);
    CHECK_THROWS_AS(parse_property("P=? [ \"a\" U<=3 \"b\" ]"), UnsupportedOperator);
    CHECK_THROWS_AS(parse_property("P>=0.5 [ F \"succ\" ]"), UnsupportedOperator);
    CHECK_THROWS_AS(parse_property("R{\"time\"}=? [ C<=4 ]"), UnsupportedOperator);
    CHECK_THROWS_AS(parse_property("R{\"time\"}=? [ I=4 ]"), UnsupportedOperator);
    CHECK_THROWS_AS(parse_property("R{\"time\"}=? [ S ]"), UnsupportedOperator);
    CHECK_THROWS_AS(parse_property("P=? [ F ( \"a\" ]"), SyntaxError);
    CHECK_THROWS_AS(parse_property("Q=? [ F \"a\" ]"), SyntaxError);
}

TEST_CASE("property files") {
    auto qs = parse_property_file(R"(# header comment
P=? [ F "succ" ]

R{"time"}=? [ F "succ" | "fail" ]  # trailing comment
)");
    REQUIRE(qs.size() == 2);
    CHECK(qs[0].kind == Query::Kind::ProbReach);
    CHECK(qs[1].kind == Query::Kind::RewardReach);
}

TEST_CASE("sat_states") {
    auto g = gen::running_example();
    auto mc = build_states(parse_model(g.monolithic_model));

    auto succ = sat_states(mc, StateFormula::atom("succ"));
    CHECK(mc.states_with_label("succ") == std::vector<int>{epmc_test::st(mc, 14)});
    int count = 0;
    for (char f : succ) count += f;
    CHECK(count == 1);
    CHECK(succ[epmc_test::st(mc, 14)]);

    auto all = sat_states(mc, StateFormula::truth());
    for (char f : all) CHECK(f);

    auto none = sat_states(mc, StateFormula::conjunction(StateFormula::atom("succ"),
                                                         StateFormula::atom("fail")));
    for (char f : none) CHECK(!f);

    CHECK_THROWS_AS(sat_states(mc, StateFormula::atom("nope")), UnknownAtom);
}

TEST_CASE("sat respects boolean algebra") {
    auto g = gen::running_example();
    auto mc = build_states(parse_model(g.monolithic_model));
    auto a = StateFormula::atom("op1");
    auto b = StateFormula::atom("op3");
    auto nota = sat_states(mc, StateFormula::negation(a));
    auto sata = sat_states(mc, a);
    for (int s = 0; s < mc.num_states(); ++s) CHECK(nota[s] == !sata[s]);
    auto both = sat_states(mc, StateFormula::conjunction(a, b));
    auto satb = sat_states(mc, b);
    for (int s = 0; s < mc.num_states(); ++s) CHECK(both[s] == (sata[s] && satb[s]));
    auto either = sat_states(mc, StateFormula::disjunction(a, b));
    for (int s = 0; s < mc.num_states(); ++s) CHECK(either[s] == (sata[s] || satb[s]));
}
