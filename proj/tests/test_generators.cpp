#include <doctest.h>

#include <random>

#include "epmc/expr.hpp"
#include "epmc/generators.hpp"
#include "epmc/oracle.hpp"
#include "epmc/pipeline.hpp"

using namespace epmc;

namespace {

// Annotated-vs-monolithic agreement is the primary regression gate for every
// generated pair.
void check_equivalent(const gen::GeneratedBenchmark& g, int samples, std::uint64_t seed = 77) {
    auto repo = patterns::load_repository(g.repo_spec);
    auto queries = parse_property_file(g.properties);
    auto fs_epmc = pipeline::epmc_check(parse_model(g.annotated_model), repo, queries);
    auto mono = build_states(parse_model(g.monolithic_model));
    REQUIRE(validate(mono).empty());

    std::mt19937_64 rng(seed);
    for (int i = 0; i < samples; ++i) {
        auto v = oracle::sample_admissible(mono.parameters, rng, g.samples);
        auto values = pipeline::eval_formula_set(fs_epmc, v);
        auto cmc = oracle::specialize(mono, v);
        for (const auto& q : queries) {
            double expected = oracle::numeric_check(cmc, q);
            INFO(g.name << " " << q.text);
            CHECK(std::abs(values.at(q.text) - expected) <= 1e-9);
        }
    }
}

} // namespace

TEST_CASE("FX generator produces equivalent model pairs") {
    for (auto kind : {patterns::SBSKind::SEQ, patterns::SBSKind::PROB, patterns::SBSKind::SEQ_R1}) {
        auto g = gen::fx(kind, 2);
        check_equivalent(g, 10);
    }
    // single-service degenerate case
    check_equivalent(gen::fx(patterns::SBSKind::SEQ, 1), 10);
}

TEST_CASE("FX annotated model is pattern-complete") {
    auto g = gen::fx(patterns::SBSKind::PAR_R, 3);
    auto src = parse_model(g.annotated_model);
    CHECK(src.annotations.size() == 6);
    auto repo = patterns::load_repository(g.repo_spec);
    auto fs = pipeline::epmc_check(src, repo, parse_property_file(g.properties));
    CHECK(fs.stage1.size() == 18); // prob/time/cost for six components
}

TEST_CASE("deployment table matches the published placements") {
    auto d1 = gen::deployment_table(1);
    CHECK(d1.servers.size() == 4);
    CHECK(d1.servers[0].kind == patterns::ServerKind::VIRTUALIZED);
    CHECK(d1.servers[0].placements == std::vector<int>{1, 1, 0});
    CHECK(d1.servers[2].kind == patterns::ServerKind::BASIC);
    CHECK(d1.servers[2].placements == std::vector<int>{0, 0, 1});
    auto d6 = gen::deployment_table(6);
    CHECK(d6.servers[1].kind == patterns::ServerKind::VIRTUALIZED_M);
    CHECK(d6.servers[1].placements == std::vector<int>{4, 2, 0});
    CHECK_THROWS_AS(gen::deployment_table(9), Error);
}

TEST_CASE("deployment models: stage-1 entries match the hand-derived forms") {
    auto g = gen::multitier_deployment(1);
    auto repo = patterns::load_repository(g.repo_spec);
    auto fs = pipeline::epmc_check(parse_model(g.annotated_model), repo,
                                   parse_property_file(g.properties));
    std::map<std::string, RationalFunction> stage1(fs.stage1.begin(), fs.stage1.end());
    CHECK(stage1.at("p_11A") == parse_expression("pA*pVMA^2"));
    CHECK(stage1.at("p_10A") == parse_expression("pA*pVMA*(1-pVMA)"));
    CHECK(stage1.at("p_01A") == parse_expression("pA*pVMA*(1-pVMA)"));
    CHECK(stage1.at("p_00A") == parse_expression("(1-pA)+pA*(1-pVMA)^2"));
    CHECK(stage1.at("p_11B") == parse_expression("pB*pVMB^2"));
    CHECK(stage1.at("p_1C") == parse_expression("pC"));
    CHECK(stage1.at("p_0C") == parse_expression("1-pC"));
    CHECK(stage1.at("p_1D") == parse_expression("pD"));
}

TEST_CASE("deployment model pairs agree and probabilities are consistent") {
    for (int d : {1, 2}) {
        auto g = gen::multitier_deployment(d);
        check_equivalent(g, 10);

        auto repo = patterns::load_repository(g.repo_spec);
        auto queries = parse_property_file(g.properties);
        auto fs = pipeline::epmc_check(parse_model(g.annotated_model), repo, queries);
        auto mono = build_states(parse_model(g.monolithic_model));
        std::mt19937_64 rng(5);
        for (int i = 0; i < 10; ++i) {
            auto v = oracle::sample_admissible(mono.parameters, rng, g.samples);
            auto values = pipeline::eval_formula_set(fs, v);
            double pfail = values.at("P=? [ F \"FAIL\" ]");
            double pspf = values.at("P=? [ F \"SPF\" ]");
            CHECK(pfail >= 0);
            CHECK(pspf >= 0);
            CHECK(pfail + pspf <= 1.0 + 1e-12);
        }
    }
}
