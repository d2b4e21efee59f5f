#include <doctest.h>

#include <sstream>

#include "epmc/engine.hpp"
#include "epmc/expr.hpp"
#include "epmc/fragments.hpp"
#include "epmc/generators.hpp"
#include "epmc/oracle.hpp"

#include "test_util.hpp"

using namespace epmc;

TEST_CASE("specialize checks ranges") {
    ParametricMC mc;
    mc.init = 0;
    mc.transitions.resize(2);
    auto p = RationalFunction::variable("p");
    mc.transitions[0].push_back({1, p});
    mc.transitions[0].push_back({0, 1 - p});
    mc.transitions[1].push_back({1, RationalFunction(1)});
    mc.parameters = {Variable("p")};

    Valuation ok;
    ok.set("p", 0.5);
    auto c = oracle::specialize(mc, ok);
    CHECK(c.transitions[0][0].second == doctest::Approx(0.5));

    Valuation bad;
    bad.set("p", 1.5);
    CHECK_THROWS_AS(oracle::specialize(mc, bad), ValueOutOfRange);
}

TEST_CASE("numeric check on a two-state chain") {
    ParametricMC mc;
    mc.init = 0;
    mc.transitions.resize(3);
    auto q = RationalFunction::variable("q");
    mc.transitions[0].push_back({1, q});
    mc.transitions[0].push_back({2, 1 - q});
    mc.transitions[1].push_back({1, RationalFunction(1)});
    mc.transitions[2].push_back({2, RationalFunction(1)});
    std::vector<char> target(3, 0);
    target[1] = 1;
    mc.labels.emplace("t", target);
    mc.parameters = {Variable("q")};

    Valuation v;
    v.set("q", 0.3);
    double x = oracle::numeric_check(oracle::specialize(mc, v), parse_property("P=? [ F \"t\" ]"));
    CHECK(x == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("numeric check matches exact evaluation on the retry fragment") {
    auto mono = build_states(parse_model(gen::running_example().monolithic_model));
    auto f3 = fragments::make_fragment(mono, epmc_test::sts(mono, {9, 10, 11, 12}));
    auto a3 = fragments::associated_mc(mono, f3);
    Valuation v;
    v.set("p31", Rat(9, 10));
    v.set("p32", Rat(9, 10));
    v.set("r", Rat(1, 2));
    v.set("t31", Rat(1));
    v.set("t32", Rat(1));
    v.set("c31", Rat(1));
    v.set("c32", Rat(1));
    auto c = oracle::specialize(a3.mc, v);
    double prob = oracle::numeric_check(
        c, parse_property("P=? [ F \"" + a3.output_proposition(epmc_test::st(mono, 11)) + "\" ]"));
    CHECK(prob == doctest::Approx(0.994974874371859).epsilon(1e-12));
    // reward query with an unreachable target returns 0 by convention
    std::vector<char> flag(a3.mc.num_states(), 0);
    flag[a3.mc.init] = 0;
    auto mc2 = a3.mc;
    std::vector<char> never(mc2.num_states(), 0);
    mc2.labels.emplace("never", never);
    auto c2 = oracle::specialize(mc2, v);
    CHECK(oracle::numeric_check(c2, parse_property("R{\"time\"}=? [ F \"never\" ]")) == 0.0);
}

TEST_CASE("oracle agrees with exact engine specialized at the same points") {
    auto mc = build_states(parse_model(gen::running_example().monolithic_model));
    auto queries = parse_property_file(gen::running_example().properties);
    std::mt19937_64 rng(17);
    auto spec = gen::running_example().samples;
    for (const auto& q : queries) {
        RationalFunction symbolic = q.is_reward() ? engine::query_reward(mc, q).value
                                                  : engine::query_probability(mc, q);
        for (int i = 0; i < 20; ++i) {
            auto v = oracle::sample_admissible(mc.parameters, rng, spec);
            double exact = symbolic.evaluate_double(v);
            double numeric = oracle::numeric_check(oracle::specialize(mc, v), q);
            CHECK(std::abs(exact - numeric) <= 1e-10);
        }
    }
}

TEST_CASE("fragment model generator is deterministic and well-formed") {
    auto a = oracle::random_fragment_model(42, 12);
    auto b = oracle::random_fragment_model(42, 12);
    CHECK(a.mc.num_states() == b.mc.num_states());
    CHECK(a.fragment_states == b.fragment_states);
    CHECK(a.until_query.text == b.until_query.text);
    std::ostringstream sa, sb;
    sa << to_model_text(a.mc, "M");
    sb << to_model_text(b.mc, "M");
    CHECK(sa.str() == sb.str());

    int cycles = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        auto fc = oracle::random_fragment_model(seed, 12);
        CHECK(fc.mc.num_states() <= 12);
        CHECK(validate(fc.mc).empty());
        auto frag = fragments::make_fragment(fc.mc, fc.fragment_states);
        CHECK(frag.entry == fc.fragment_states.front());
        if (fc.has_cycle) ++cycles;
        // planted violations are rejected by the precondition checks
        CHECK(!fragments::check_until_precondition(fc.mc, frag,
                                                   StateFormula::atom(fc.non_uniform_atom),
                                                   fc.until_query.phi2));
        CHECK(!fragments::check_reward_precondition(frag, fc.violating_reward_target));
    }
    CHECK(cycles >= 300);
}

TEST_CASE("equivalence report flags a perturbed formula") {
    auto mc = build_states(parse_model(gen::running_example().monolithic_model));
    auto q = parse_property("P=? [ F \"succ\" ]");
    auto good = engine::query_probability(mc, q);
    auto rep = oracle::equivalence_report(good, mc, q, 25, 1e-9, gen::running_example().samples);
    CHECK(rep.pass);

    auto bad = good + RationalFunction(Rat(1, 100));
    auto rep2 = oracle::equivalence_report(bad, mc, q, 25, 1e-9, gen::running_example().samples);
    CHECK(!rep2.pass);
    CHECK(rep2.max_diff == doctest::Approx(0.01).epsilon(1e-6));
    CHECK(rep2.text().find("FAIL") == 0);
    CHECK(rep2.json().find("\"pass\":false") != std::string::npos);
}

TEST_CASE("symbolic constant one matches an almost-surely reaching model") {
    auto mc = build_states(parse_model(R"(dtmc
const double p;
module M
  s : [0..1] init 0;
  [] s=0 -> p:(s'=1) + (1-p):(s'=0);
endmodule
label "goal" = s=1;
)"));
    auto q = parse_property("P=? [ F \"goal\" ]");
    auto rep = oracle::equivalence_report(RationalFunction(1), mc, q, 20, 1e-12);
    CHECK(rep.pass);
    CHECK(rep.max_diff == 0.0);
}
