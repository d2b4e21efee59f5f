#include <doctest.h>

#include "epmc/expr.hpp"
#include "epmc/generators.hpp"
#include "epmc/model.hpp"

using namespace epmc;

TEST_CASE("minimal model parses and builds") {
    auto src = parse_model(R"(dtmc
const double p;
module M
  z : [0..2] init 0;
  [] z=0 -> p:(z'=1) + (1-p):(z'=2);
endmodule
label "done" = z>0;
)");
    CHECK(src.constants.size() == 1);
    CHECK(src.variables.size() == 1);
    CHECK(src.commands.size() == 1);
    auto mc = build_states(src);
    CHECK(mc.num_states() == 3);
    CHECK(mc.parameters.size() == 1);
    CHECK(mc.parameters[0].name() == "p");
    // deadlock states complete to absorbing self-loops
    CHECK(mc.is_absorbing(1));
    CHECK(mc.is_absorbing(2));
    CHECK(validate(mc).empty());
}

TEST_CASE("workflow source parses with annotations and rewards") {
    auto g = gen::running_example();
    auto src = parse_model(g.annotated_model);
    CHECK(src.annotations.size() == 3);
    CHECK(src.rewards.size() == 2);
    CHECK(src.annotations[0].id == "1");
    CHECK(src.annotations[0].pattern_name == "SEQ");
    CHECK(src.annotations[0].actuals ==
          std::vector<std::string>{"p11", "c11", "t11", "p12", "c12", "t12"});
    CHECK(src.annotations[2].pattern_name == "SEQ_R");

    auto mc = build_states(src);
    CHECK(mc.num_states() == 5);
    // transitions of the first state: prob1*x, prob1*(1-x), 1-prob1
    CHECK(*mc.probability(0, 1) == parse_expression("prob1*x"));
    CHECK(*mc.probability(0, 2) == parse_expression("prob1*(1-x)"));
    CHECK(*mc.probability(0, 3) == parse_expression("1-prob1"));
    CHECK(*mc.probability(2, 0) == parse_expression("prob3*y"));
    CHECK(mc.has_label("succ", 4));
    CHECK(mc.has_label("fail", 3));
    CHECK(mc.rewards.at("time")[0] == parse_expression("time1"));
    CHECK(validate(mc).empty());
}

TEST_CASE("running example monolithic chain matches the published shape") {
    auto g = gen::running_example();
    auto mc = build_states(parse_model(g.monolithic_model));
    CHECK(mc.num_states() == 15);
    int transitions = 0;
    for (int s = 0; s < mc.num_states(); ++s) transitions += static_cast<int>(mc.transitions[s].size());
    CHECK(transitions == 25);
    CHECK(mc.states_with_label("succ").size() == 1);
    CHECK(mc.states_with_label("op3").size() == 4);
    CHECK(validate(mc).empty());
}

TEST_CASE("row sums are checked symbolically") {
    auto src = parse_model(R"(dtmc
module M
  z : [0..2] init 0;
  [] z=0 -> 0.5:(z'=1) + 0.6:(z'=2);
endmodule
)");
    CHECK_THROWS_AS(build_states(src), RowSumNotOne);

    auto src2 = parse_model(R"(dtmc
const double p; const double q;
module M
  z : [0..2] init 0;
  [] z=0 -> p:(z'=1) + q:(z'=2);
endmodule
)");
    CHECK_THROWS_AS(build_states(src2), RowSumNotOne);
}

TEST_CASE("overlapping guards are rejected") {
    auto src = parse_model(R"(dtmc
module M
  z : [0..2] init 0;
  [] z=0 -> 1:(z'=1);
  [] z<2 -> 1:(z'=2);
endmodule
)");
    CHECK_THROWS_AS(build_states(src), OverlappingGuards);
}

TEST_CASE("parse errors carry positions and kinds") {
    CHECK_THROWS_AS(parse_model("mdp\n"), SyntaxError);
    CHECK_THROWS_AS(parse_model("dtmc\nconst int k;\n"), SyntaxError);
    CHECK_THROWS_AS(parse_model(R"(dtmc
module M
  z : [5..2] init 5;
endmodule
)"),
                    NonFiniteVariableRange);
    CHECK_THROWS_AS(parse_model(R"(dtmc
module M
  z : [0..1] init 0;
  [a] z=0 -> 1:(z'=1);
endmodule
)"),
                    SyntaxError);
    // unknown identifier in a probability expression surfaces at build time
    auto src = parse_model(R"(dtmc
module M
  z : [0..1] init 0;
  [] z=0 -> pp:(z'=1) + (1-pp):(z'=0);
endmodule
)");
    CHECK_THROWS_AS(build_states(src), UnknownIdentifier);
}

TEST_CASE("update out of range is rejected") {
    auto src = parse_model(R"(dtmc
module M
  z : [0..1] init 0;
  [] z=0 -> 1:(z'=2);
endmodule
)");
    CHECK_THROWS_AS(build_states(src), UpdateOutOfRange);
}

TEST_CASE("constants resolve in declaration order") {
    auto src = parse_model(R"(dtmc
const double p;
const double q = 1-p;
const double half = 0.5;
module M
  z : [0..2] init 0;
  [] z=0 -> p*half:(z'=1) + q*half:(z'=2) + 0.5:(z'=0);
endmodule
)");
    auto mc = build_states(src);
    CHECK(mc.parameters.size() == 1);
    CHECK(*mc.probability(0, 0) == parse_expression("1/2"));
    CHECK(*mc.probability(0, 2) == parse_expression("(1-p)/2"));
}

TEST_CASE("build is deterministic") {
    auto g = gen::running_example();
    auto a = build_states(parse_model(g.monolithic_model));
    auto b = build_states(parse_model(g.monolithic_model));
    REQUIRE(a.num_states() == b.num_states());
    for (int s = 0; s < a.num_states(); ++s) {
        REQUIRE(a.transitions[s].size() == b.transitions[s].size());
        for (std::size_t i = 0; i < a.transitions[s].size(); ++i) {
            CHECK(a.transitions[s][i].target == b.transitions[s][i].target);
            CHECK(a.transitions[s][i].probability == b.transitions[s][i].probability);
        }
    }
    CHECK(a.state_names == b.state_names);
}

TEST_CASE("model text round trip") {
    auto g = gen::running_example();
    auto mc = build_states(parse_model(g.monolithic_model));
    std::string text = to_model_text(mc, "Workflow");
    auto mc2 = build_states(parse_model(text));
    REQUIRE(mc2.num_states() == mc.num_states());
    for (int s = 0; s < mc.num_states(); ++s)
        for (const auto& t : mc.transitions[s]) {
            auto* p = mc2.probability(s, t.target);
            REQUIRE(p != nullptr);
            CHECK(*p == t.probability);
        }
    CHECK(mc2.labels == mc.labels);
}

TEST_CASE("validate reports unreachable states and bad rows") {
    ParametricMC mc;
    mc.init = 0;
    mc.transitions.resize(3);
    mc.transitions[0].push_back({0, RationalFunction(1)});
    mc.transitions[1].push_back({2, RationalFunction(1)});
    mc.transitions[2].push_back({2, RationalFunction(Rat(1, 2))});
    auto diags = validate(mc);
    bool unreachable = false, rowsum = false;
    for (const auto& d : diags) {
        unreachable |= d.kind == Diagnostic::Kind::Unreachable;
        rowsum |= d.kind == Diagnostic::Kind::RowSumNotOne;
    }
    CHECK(unreachable);
    CHECK(rowsum);
}
