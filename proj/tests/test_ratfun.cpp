#include <doctest.h>

#include <random>

#include "epmc/expr.hpp"
#include "epmc/ratfun.hpp"

using namespace epmc;

namespace {

RationalFunction var(const char* n) { return RationalFunction::variable(Variable(n)); }

// Random polynomial over {a,b,c}: up to `terms` terms, exponents <= 2,
// small integer or half-integer coefficients.
Polynomial random_poly(std::mt19937_64& rng, int terms) {
    static const Variable vars[] = {Variable("a"), Variable("b"), Variable("c")};
    std::vector<Polynomial::Term> ts;
    std::uniform_int_distribution<int> coeff(-3, 3);
    std::uniform_int_distribution<int> den(1, 2);
    std::uniform_int_distribution<int> exp(0, 2);
    for (int i = 0; i < terms; ++i) {
        Monomial m;
        for (const auto& v : vars) {
            int e = exp(rng);
            if (e > 0) m = m * Monomial::variable(v, e);
        }
        int c = coeff(rng);
        if (c != 0) ts.emplace_back(m, Rat(c, den(rng)));
    }
    return Polynomial::from_terms(std::move(ts));
}

RationalFunction random_ratfun(std::mt19937_64& rng) {
    Polynomial num = random_poly(rng, 4);
    Polynomial den = random_poly(rng, 3);
    while (den.is_zero()) den = random_poly(rng, 3);
    return RationalFunction(num, den);
}

Valuation random_valuation(std::mt19937_64& rng) {
    Valuation v;
    std::uniform_int_distribution<int> num(-9, 9);
    std::uniform_int_distribution<int> den(1, 7);
    for (const char* n : {"a", "b", "c"}) v.set(n, Rat(num(rng), den(rng)));
    return v;
}

} // namespace

TEST_CASE("arithmetic identities") {
    auto p = var("p"), q = var("q");
    CHECK(p + (1 - p) == RationalFunction(1));
    CHECK(RationalFunction() + p == p);
    CHECK(p * (RationalFunction(1) / p) == RationalFunction(1));
    // (p^2 - 1) / (p - 1) = p + 1
    CHECK((p * p - 1) / (p - 1) == p + 1);
    // (1-p1)(1-p2) expands to 1 - p1 - p2 + p1*p2
    auto p1 = var("p1"), p2 = var("p2");
    auto lhs = (1 - p1) * (1 - p2);
    auto rhs = 1 - p1 - p2 + p1 * p2;
    CHECK(lhs == rhs);
    // p/(1-q) + q/(1-q) = (p+q)/(1-q), cross-checked at 20 valuations
    auto sum = p / (1 - q) + q / (1 - q);
    auto expect = (p + q) / (1 - q);
    CHECK(sum == expect);
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> num(-9, 9);
    for (int i = 0; i < 20; ++i) {
        Valuation v;
        v.set("p", Rat(num(rng), 5));
        Rat qv(num(rng), 5);
        if (qv.is_one()) qv = Rat(1, 2);
        v.set("q", qv);
        CHECK(sum.evaluate(v) == expect.evaluate(v));
    }
}

TEST_CASE("division by zero") {
    auto p = var("p");
    CHECK_THROWS_AS(p / RationalFunction(), DivisionByZero);
    CHECK_THROWS_AS(p / (p - p), DivisionByZero);
}

TEST_CASE("simplify and canonical form") {
    auto p = var("p"), q = var("q"), x = var("x");
    auto p1 = var("p1"), p2 = var("p2");
    // (p*q - p) / (q - 1) -> p
    CHECK((p * q - p) / (q - 1) == p);
    // ((1-p1)(1-p2)*x) / x -> (1-p1)(1-p2) expanded with den 1
    auto f = ((1 - p1) * (1 - p2) * x) / x;
    CHECK(f.den().is_one());
    CHECK(f == (1 - p1) * (1 - p2));
    // idempotence: re-canonicalizing a canonical value is the identity
    auto g = (p + q) / (1 - q * q);
    CHECK(simplify(g) == g);
    CHECK(simplify(simplify(g)) == simplify(g));
    // sign normalization: denominator leading coefficient is positive
    auto h = p / (q - 1);
    CHECK(h.den().leading_coeff() > Rat(0));
    CHECK(h == (-p) / (1 - q));
}

TEST_CASE("evaluation") {
    // Retry-pattern success probability at p31 = p32 = 0.9, r = 0.5.
    auto f = parse_expression("(p31+(1-p31)*p32)/(1-(1-p31)*(1-p32)*r)");
    Valuation v;
    v.set("p31", Rat(9, 10));
    v.set("p32", Rat(9, 10));
    v.set("r", Rat(1, 2));
    CHECK(f.evaluate(v) == Rat(198, 199));
    CHECK(f.evaluate_double(v) == doctest::Approx(0.994974874).epsilon(1e-9));

    CHECK(RationalFunction(1).evaluate(v) == Rat(1));

    auto g = parse_expression("p1+(1-p1)*p2");
    Valuation w;
    w.set("p1", Rat(1));
    w.set("p2", Rat(0));
    CHECK(g.evaluate(w) == Rat(1));

    Valuation incomplete;
    incomplete.set("p31", Rat(1, 2));
    CHECK_THROWS_AS(f.evaluate(incomplete), UnboundVariable);

    auto h = parse_expression("1/(1-q)");
    Valuation at_pole;
    at_pole.set("q", Rat(1));
    CHECK_THROWS_AS(h.evaluate(at_pole), DenominatorZeroAtPoint);
}

TEST_CASE("parsing") {
    auto seq = parse_expression("p1+(1-p1)*p2");
    CHECK(seq == var("p1") + (1 - var("p1")) * var("p2"));
    auto seqr_time = parse_expression("(t1+(1-p1)*t2)/(1-(1-p1)*(1-p2)*r)");
    auto expect = (var("t1") + (1 - var("p1")) * var("t2")) /
                  (1 - (1 - var("p1")) * (1 - var("p2")) * var("r"));
    CHECK(seqr_time == expect);
    CHECK_THROWS_AS(parse_expression("1/(1-1)"), DenominatorZero);
    CHECK_THROWS_AS(parse_expression("p1 +"), SyntaxError);
    CHECK_THROWS_AS(parse_expression("(p1"), SyntaxError);
    CHECK_THROWS_AS(parse_expression("p1 q"), SyntaxError);
    CHECK(parse_expression("0.25") == RationalFunction(Rat(1, 4)));
    CHECK(parse_expression("p^3") == var("p") * var("p") * var("p"));
    CHECK(parse_expression("-p*-q") == var("p") * var("q"));
}

TEST_CASE("print/parse round trip") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        auto f = random_ratfun(rng);
        std::string printed = f.str();
        auto reparsed = parse_expression(printed);
        CHECK(reparsed == f);
        CHECK(reparsed.str() == printed);
    }
}

TEST_CASE("op_count") {
    CHECK(RationalFunction(5).op_count() == 0);
    // p1 + p2 - p1*p2: 2 additions + 1 multiplication
    auto f = parse_expression("p1+(1-p1)*p2");
    CHECK(f.op_count() == 3);
    CHECK(simplify(f).op_count() == f.op_count());
    // one division when den != 1
    CHECK(parse_expression("p/q").op_count() == 1);
    CHECK(parse_expression("p^2").op_count() == 1);
    CHECK(parse_expression("3*p^2*q").op_count() == 3);
}

TEST_CASE("evaluation homomorphism (randomized)") {
    std::mt19937_64 rng(42);
    int done = 0;
    while (done < 100) {
        auto f = random_ratfun(rng);
        auto g = random_ratfun(rng);
        Valuation v = random_valuation(rng);
        try {
            Rat fv = f.evaluate(v), gv = g.evaluate(v);
            CHECK((f + g).evaluate(v) == fv + gv);
            CHECK((f - g).evaluate(v) == fv - gv);
            CHECK((f * g).evaluate(v) == fv * gv);
            if (!gv.is_zero() && !g.is_zero()) CHECK((f / g).evaluate(v) == fv / gv);
            ++done;
        } catch (const DenominatorZeroAtPoint&) {
            // unlucky sample; try again
        }
    }
}

TEST_CASE("canonical equality iff pointwise equality (randomized)") {
    std::mt19937_64 rng(1234);
    for (int i = 0; i < 50; ++i) {
        auto f = random_ratfun(rng);
        auto g = random_ratfun(rng);
        bool canonical_equal = (f == g);
        bool diff_zero = (f - g).is_zero();
        CHECK(canonical_equal == diff_zero);
        // equal functions written differently still compare equal
        auto h = (f * RationalFunction(Rat(3, 2))) / RationalFunction(Rat(3, 2));
        CHECK(h == f);
        int agree = 0, total = 0;
        for (int s = 0; s < 50; ++s) {
            Valuation v = random_valuation(rng);
            try {
                if (f.evaluate(v) == g.evaluate(v)) ++agree;
                ++total;
            } catch (const DenominatorZeroAtPoint&) {
            }
        }
        if (canonical_equal) CHECK(agree == total);
        if (total > 0 && agree == total) CHECK(diff_zero);
    }
}

TEST_CASE("substitution") {
    auto prob1 = parse_expression("p11+(1-p11)*p12");
    std::map<Variable, RationalFunction> sub;
    sub.emplace(Variable("x"), prob1);
    auto f = parse_expression("1-x");
    CHECK(f.substituted(sub) == parse_expression("(1-p11)*(1-p12)"));
    auto g = parse_expression("x/(1-x)");
    CHECK(g.substituted(sub) == prob1 / (1 - prob1));
}
