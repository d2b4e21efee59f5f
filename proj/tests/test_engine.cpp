#include <doctest.h>

#include <random>
#include <set>

#include "epmc/engine.hpp"
#include "epmc/expr.hpp"
#include "epmc/fragments.hpp"
#include "epmc/generators.hpp"
#include "epmc/oracle.hpp"

#include "test_util.hpp"

using namespace epmc;

namespace {

ParametricMC running_mc() {
    return build_states(parse_model(gen::running_example().monolithic_model));
}

using epmc_test::st;
using epmc_test::sts;

ParametricMC annotated_mc() {
    return build_states(parse_model(gen::running_example().annotated_model));
}

} // namespace

TEST_CASE("fragment reachability yields the stage-1 closed forms") {
    auto mc = running_mc();
    auto f1 = fragments::make_fragment(mc, sts(mc, {0, 1, 2, 3}));
    auto a1 = fragments::associated_mc(mc, f1);
    CHECK(engine::reach_probability(a1.mc, {a1.index_of.at(st(mc, 2))}) ==
          parse_expression("p11+(1-p11)*p12"));

    auto f3 = fragments::make_fragment(mc, sts(mc, {9, 10, 11, 12}));
    auto a3 = fragments::associated_mc(mc, f3);
    CHECK(engine::reach_probability(a3.mc, {a3.index_of.at(st(mc, 11))}) ==
          parse_expression("(p31+(1-p31)*p32)/(1-(1-p31)*(1-p32)*r)"));
    auto time3 = engine::reach_reward(a3.mc, "time", {a3.end_state});
    CHECK(!time3.prob_less_than_one);
    CHECK(time3.value == parse_expression("(t31+(1-p31)*t32)/(1-(1-p31)*(1-p32)*r)"));

    // initial state inside the target
    CHECK(engine::reach_probability(a1.mc, {a1.mc.init}) == RationalFunction(1));
}

TEST_CASE("until probabilities on the five-state abstract chain") {
    auto mc = annotated_mc();
    auto q2 = parse_property("P=? [ !\"op3\" U \"fail\" ]");
    CHECK(engine::query_probability(mc, q2) ==
          parse_expression("1-prob1+x*prob1*(1-prob2)"));

    auto q1 = parse_property("P=? [ F \"succ\" ]");
    CHECK(engine::query_probability(mc, q1) ==
          parse_expression("prob1*(x*prob2+(1-x)*(1-y)*prob3)/(1-(1-x)*y*prob1*prob3)"));

    // target holding initially gives the constant 1
    auto q3 = parse_property("P=? [ F \"op1\" ]");
    CHECK(engine::query_probability(mc, q3) == RationalFunction(1));
}

TEST_CASE("reachability rewards on the abstract chain") {
    auto mc = annotated_mc();
    auto t = parse_property("R{\"time\"}=? [ F \"succ\" | \"fail\" ]");
    auto res = engine::query_reward(mc, t);
    CHECK(!res.prob_less_than_one);
    CHECK(res.value ==
          parse_expression(
              "(time1+prob1*(x*time2+(1-x)*time3))/(1-(1-x)*y*prob1*prob3)"));
    CHECK_THROWS_AS(engine::query_reward(mc, parse_property("R{\"energy\"}=? [ F \"succ\" ]")),
                    UnknownRewardStructure);
}

TEST_CASE("all-zero rewards give zero") {
    auto mc = annotated_mc();
    std::vector<RationalFunction> zero(mc.num_states());
    mc.rewards.emplace("zero", zero);
    auto res = engine::query_reward(mc, parse_property("R{\"zero\"}=? [ F \"succ\" | \"fail\" ]"));
    CHECK(res.value.is_zero());
}

TEST_CASE("reward convention when the target can be missed") {
    // 0 -> goal with p, 0 -> sink with 1-p; reward target {goal}
    ParametricMC mc;
    mc.init = 0;
    mc.transitions.resize(3);
    auto p = RationalFunction::variable("p");
    mc.transitions[0].push_back({1, p});
    mc.transitions[0].push_back({2, 1 - p});
    mc.transitions[1].push_back({1, RationalFunction(1)});
    mc.transitions[2].push_back({2, RationalFunction(1)});
    mc.rewards.emplace("w", std::vector<RationalFunction>{RationalFunction(2), {}, {}});
    mc.parameters = {Variable("p")};
    auto res = engine::reach_reward(mc, "w", {1});
    CHECK(res.prob_less_than_one);
    CHECK(res.value.is_zero());
}

TEST_CASE("pivot order") {
    // chain 0 -> 1 -> 2 -> 3 -> 4 (4 absorbing target)
    ParametricMC chain;
    chain.init = 0;
    chain.transitions.resize(5);
    for (int s = 0; s < 4; ++s) chain.transitions[s].push_back({s + 1, RationalFunction(1)});
    chain.transitions[4].push_back({4, RationalFunction(1)});
    std::vector<char> maybe(5, 1);
    maybe[4] = 0;
    CHECK(engine::pivot_order(chain, maybe) == std::vector<int>{0, 1, 2, 3});

    // star: hub 0 connected to leaves 1..4
    ParametricMC star;
    star.init = 0;
    star.transitions.resize(6);
    auto q = RationalFunction(Rat(1, 4));
    for (int leaf = 1; leaf <= 4; ++leaf) {
        star.transitions[0].push_back({leaf, q});
        star.transitions[leaf].push_back({0, RationalFunction(Rat(1, 2))});
        star.transitions[leaf].push_back({5, RationalFunction(Rat(1, 2))});
    }
    star.transitions[5].push_back({5, RationalFunction(1)});
    std::vector<char> maybe2(6, 1);
    maybe2[5] = 0;
    auto order = engine::pivot_order(star, maybe2);

    // independent fill-in counter for a given elimination order
    auto fill_in = [](std::vector<std::set<int>> nbr, const std::vector<int>& ord) {
        int added = 0;
        for (int e : ord) {
            for (int a : nbr[e]) nbr[a].erase(e);
            for (int a : nbr[e])
                for (int b : nbr[e])
                    if (a < b && !nbr[a].count(b)) {
                        nbr[a].insert(b);
                        nbr[b].insert(a);
                        ++added;
                    }
            nbr[e].clear();
        }
        return added;
    };
    std::vector<std::set<int>> adj(5);
    for (int leaf = 1; leaf <= 4; ++leaf) {
        adj[0].insert(leaf);
        adj[leaf].insert(0);
    }
    CHECK(fill_in(adj, {0, 1, 2, 3, 4}) == 6); // hub first connects all leaves
    CHECK(fill_in(adj, {1, 2, 3, 4, 0}) == 0);
    CHECK(fill_in(adj, order) == 0); // chosen order is fill-in free
    // the hub is never eliminated while leaves of smaller degree remain
    CHECK(order[0] == 1);
    CHECK(order[1] == 2);
    CHECK(order[2] == 3);
}

TEST_CASE("pivot order independence") {
    auto mc = running_mc();
    auto target = mc.states_with_label("succ");
    auto standard = engine::reach_probability(mc, target);

    // same system solved in plain index order
    std::vector<char> tf(mc.num_states(), 0);
    for (int s : target) tf[s] = 1;
    auto qual = engine::qualitative_reach(mc, tf, std::vector<char>(mc.num_states(), 0));
    std::vector<RationalFunction> constant(mc.num_states());
    for (int s = 0; s < mc.num_states(); ++s) {
        if (!qual.maybe[s]) continue;
        for (const auto& t : mc.transitions[s])
            if (qual.yes[t.target]) constant[s] = constant[s] + t.probability;
    }
    std::vector<int> index_order;
    for (int s = 0; s < mc.num_states(); ++s)
        if (qual.maybe[s]) index_order.push_back(s);
    auto direct = engine::solve_linear_system(mc, qual.maybe, constant, index_order, mc.init);
    CHECK(direct == standard);
}

TEST_CASE("engine vs numeric oracle on the running example") {
    auto mc = running_mc();
    auto queries = parse_property_file(gen::running_example().properties);
    oracle::SampleSpec spec = gen::running_example().samples;
    for (const auto& q : queries) {
        RationalFunction symbolic = q.is_reward() ? engine::query_reward(mc, q).value
                                                  : engine::query_probability(mc, q);
        auto rep = oracle::equivalence_report(symbolic, mc, q, 50, 1e-9, spec);
        INFO(rep.text());
        CHECK(rep.pass);
    }
}

TEST_CASE("probability results stay within [0,1] at admissible points") {
    auto mc = running_mc();
    auto q = parse_property("P=? [ F \"succ\" ]");
    auto f = engine::query_probability(mc, q);
    std::mt19937_64 rng(5);
    auto spec = gen::running_example().samples;
    for (int i = 0; i < 50; ++i) {
        auto v = oracle::sample_admissible(mc.parameters, rng, spec);
        double x = f.evaluate_double(v);
        CHECK(x >= 0.0);
        CHECK(x <= 1.0);
    }
}

TEST_CASE("success probability is monotone in service reliability") {
    // SEQ-type chain: success improves when any service succeeds more often
    auto mc = build_states(parse_model(R"(dtmc
const double p1; const double p2;
module Seq
  s : [0..3] init 0;
  [] s=0 -> p1:(s'=2) + (1-p1):(s'=1);
  [] s=1 -> p2:(s'=2) + (1-p2):(s'=3);
endmodule
label "ok" = s=2;
)"));
    auto f = engine::reach_probability(mc, mc.states_with_label("ok"));
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> uni(0.05, 0.9);
    for (int i = 0; i < 25; ++i) {
        double p1 = uni(rng), p2 = uni(rng), bump = uni(rng) * 0.05;
        Valuation lo, hi;
        lo.set("p1", p1);
        lo.set("p2", p2);
        hi.set("p1", p1 + bump);
        hi.set("p2", p2);
        CHECK(f.evaluate_double(hi) >= f.evaluate_double(lo) - 1e-15);
    }
}

TEST_CASE("deadline aborts long computations") {
    auto g = gen::fx(patterns::SBSKind::SEQ_R1, 3);
    auto src = parse_model(g.monolithic_model);
    engine::Options opts;
    opts.deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(200);
    opts.term_limit = 200'000;
    auto mc = build_states(src);
    auto q = parse_property("P=? [ F \"succ\" ]");
    CHECK_THROWS_AS(engine::query_probability(mc, q, opts), Error);
}
