#include <algorithm>
#include <cassert>
#include <cstdint>
#include <map>
#include <random>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "epmc/ratfun.hpp"

// gcd over Q[x1..xn] via recursive content/primitive-part computation,
// treating the ring as univariate over the polynomial ring in the remaining
// variables. Fast paths handle the overwhelmingly common cases (coprime
// inputs, exact divisibility, shared monomial factors) before the recursive
// machinery runs.

namespace epmc {
namespace {

// ---- mod-p projection pretest ---------------------------------------------

constexpr std::uint64_t kPrime = 2305843009213693951ULL; // 2^61 - 1

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % kPrime);
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e) {
    std::uint64_t r = 1;
    b %= kPrime;
    while (e) {
        if (e & 1) r = mulmod(r, b);
        b = mulmod(b, b);
        e >>= 1;
    }
    return r;
}

std::uint64_t invmod(std::uint64_t a) {
    return powmod(a, kPrime - 2);
}

// Rational coefficient mod p; false when the denominator vanishes mod p.
bool coeff_mod(const Rat& c, std::uint64_t& out) {
    std::uint64_t n = mpz_fdiv_ui(c.num().get_mpz_t(), kPrime);
    std::uint64_t d = mpz_fdiv_ui(c.den().get_mpz_t(), kPrime);
    if (d == 0) return false;
    out = mulmod(n, invmod(d));
    return true;
}

std::vector<std::uint32_t> var_ids(const Polynomial& p) {
    std::unordered_set<std::uint32_t> seen;
    for (const auto& [m, c] : p.terms())
        for (const auto& [v, e] : m.factors()) seen.insert(v.id());
    std::vector<std::uint32_t> ids(seen.begin(), seen.end());
    std::sort(ids.begin(), ids.end());
    return ids;
}

std::vector<std::uint32_t> common_vars(const Polynomial& a, const Polynomial& b) {
    auto va = var_ids(a), vb = var_ids(b);
    std::vector<std::uint32_t> out;
    std::set_intersection(va.begin(), va.end(), vb.begin(), vb.end(), std::back_inserter(out));
    return out;
}

// Dense univariate gcd mod p; returns the degree of the gcd, or -1 on failure.
int univariate_gcd_degree(std::vector<std::uint64_t> a, std::vector<std::uint64_t> b) {
    auto trim = [](std::vector<std::uint64_t>& v) {
        while (!v.empty() && v.back() == 0) v.pop_back();
    };
    trim(a);
    trim(b);
    if (a.empty()) return static_cast<int>(b.size()) - 1;
    if (b.empty()) return static_cast<int>(a.size()) - 1;
    while (!b.empty()) {
        // a := a mod b
        std::uint64_t binv = invmod(b.back());
        while (a.size() >= b.size()) {
            std::uint64_t f = mulmod(a.back(), binv);
            for (std::size_t i = 0; i < b.size(); ++i) {
                std::size_t ai = a.size() - b.size() + i;
                std::uint64_t sub = mulmod(f, b[i]);
                a[ai] = (a[ai] + kPrime - sub) % kPrime;
            }
            trim(a);
            if (a.empty()) break;
        }
        std::swap(a, b);
    }
    return static_cast<int>(a.size()) - 1;
}

struct Projection {
    // value of the full monomial at the sample point, per term
    std::vector<std::uint64_t> term_values;
    bool ok = false;
};

Projection project(const Polynomial& p, const std::unordered_map<std::uint32_t, std::uint64_t>& point) {
    Projection pr;
    pr.term_values.reserve(p.term_count());
    for (const auto& [m, c] : p.terms()) {
        std::uint64_t cv;
        if (!coeff_mod(c, cv)) return pr;
        for (const auto& [v, e] : m.factors())
            cv = mulmod(cv, powmod(point.at(v.id()), static_cast<std::uint64_t>(e)));
        pr.term_values.push_back(cv);
    }
    pr.ok = true;
    return pr;
}

// Collapse p to a univariate image in `main` by dividing the cached full-term
// value by the main variable's contribution.
std::vector<std::uint64_t> univariate_image(const Polynomial& p, const Projection& pr,
                                            std::uint32_t main, std::uint64_t main_value) {
    int deg = 0;
    for (const auto& [m, c] : p.terms())
        for (const auto& [v, e] : m.factors())
            if (v.id() == main) deg = std::max(deg, e);
    std::vector<std::uint64_t> img(static_cast<std::size_t>(deg) + 1, 0);
    std::uint64_t inv = invmod(main_value);
    std::size_t i = 0;
    for (const auto& [m, c] : p.terms()) {
        int e = 0;
        for (const auto& [v, ve] : m.factors())
            if (v.id() == main) {
                e = ve;
                break;
            }
        std::uint64_t val = mulmod(pr.term_values[i], powmod(inv, static_cast<std::uint64_t>(e)));
        img[static_cast<std::size_t>(e)] = (img[static_cast<std::size_t>(e)] + val) % kPrime;
        ++i;
    }
    return img;
}

// True when a random projection certifies deg_v(gcd) == 0 for every common
// variable v; a negative answer is inconclusive (caller falls back to the
// exact path). Never wrong in the positive direction.
bool certify_coprime(const Polynomial& a, const Polynomial& b,
                     const std::vector<std::uint32_t>& vars) {
    std::mt19937_64 rng(0x5bd1e995u);
    auto all_a = var_ids(a);
    auto all_b = var_ids(b);
    for (int attempt = 0; attempt < 3; ++attempt) {
        std::unordered_map<std::uint32_t, std::uint64_t> point;
        auto assign = [&](const std::vector<std::uint32_t>& ids) {
            for (auto id : ids)
                if (!point.count(id)) point[id] = 2 + rng() % (kPrime - 3);
        };
        assign(all_a);
        assign(all_b);
        Projection pa = project(a, point);
        Projection pb = project(b, point);
        if (!pa.ok || !pb.ok) return false;
        bool all_zero_degree = true;
        bool unlucky = false;
        for (auto v : vars) {
            auto ia = univariate_image(a, pa, v, point.at(v));
            auto ib = univariate_image(b, pb, v, point.at(v));
            // The image must keep the full degree, else the sample was unlucky.
            if (ia.empty() || ib.empty() || ia.back() == 0 || ib.back() == 0) {
                unlucky = true;
                break;
            }
            int d = univariate_gcd_degree(ia, ib);
            if (d != 0) {
                all_zero_degree = false;
                break;
            }
        }
        if (unlucky) continue;
        return all_zero_degree;
    }
    return false;
}

// ---- exact recursive gcd ---------------------------------------------------

// Coefficients of p viewed as a univariate polynomial in x.
std::map<int, Polynomial> coefficients_in(const Polynomial& p, Variable x) {
    std::map<int, std::vector<Polynomial::Term>> buckets;
    for (const auto& [m, c] : p.terms()) {
        int e = m.exponent_of(x);
        Monomial rest;
        if (e == 0) {
            rest = m;
        } else {
            rest = *m.divide(Monomial::variable(x, e));
        }
        buckets[e].emplace_back(std::move(rest), c);
    }
    std::map<int, Polynomial> out;
    for (auto& [e, terms] : buckets) out.emplace(e, Polynomial::from_terms(std::move(terms)));
    return out;
}

Polynomial rebuild_in(const std::map<int, Polynomial>& coeffs, Variable x) {
    std::vector<Polynomial::Term> terms;
    for (const auto& [e, c] : coeffs) {
        for (const auto& [m, r] : c.terms()) {
            Monomial mm = e == 0 ? m : m * Monomial::variable(x, e);
            terms.emplace_back(std::move(mm), r);
        }
    }
    return Polynomial::from_terms(std::move(terms));
}

Polynomial gcd_impl(const Polynomial& a, const Polynomial& b);

Polynomial gcd_list(const std::vector<Polynomial>& polys) {
    Polynomial g;
    for (const auto& p : polys) {
        g = gcd_impl(g, p);
        if (g.is_constant() && !g.is_zero()) return Polynomial(Rat(1));
    }
    return g;
}

Polynomial normalized_primitive(Polynomial p) {
    if (p.is_zero()) return p;
    Rat c = p.rational_content();
    if (p.leading_coeff().sign() < 0) c = -c;
    if (!c.is_one()) p = p.scaled(c.inverse());
    return p;
}

// Pseudo-remainder of a by b with respect to x (b nonzero, deg_x b >= 1).
Polynomial pseudo_rem(Polynomial a, const Polynomial& b, Variable x) {
    int db = b.degree_in(x);
    auto bc = coefficients_in(b, x);
    const Polynomial& blead = bc.rbegin()->second;
    while (!a.is_zero()) {
        int da = a.degree_in(x);
        if (da < db) break;
        auto ac = coefficients_in(a, x);
        const Polynomial& alead = ac.rbegin()->second;
        // a := blead * a - alead * x^(da-db) * b
        Polynomial shift = da - db > 0
                               ? Polynomial::term(Monomial::variable(x, da - db), Rat(1))
                               : Polynomial(Rat(1));
        a = a * blead - b * (alead * shift);
    }
    return a;
}

Polynomial gcd_univariate_step(Polynomial f, Polynomial g, Variable x) {
    // Primitive PRS over the coefficient ring.
    if (f.degree_in(x) < g.degree_in(x)) std::swap(f, g);
    while (true) {
        Polynomial r = pseudo_rem(f, g, x);
        if (r.is_zero()) return g;
        if (r.degree_in(x) == 0) return Polynomial(Rat(1));
        // Strip the content to keep coefficient growth in check.
        auto rc = coefficients_in(r, x);
        std::vector<Polynomial> coeffs;
        coeffs.reserve(rc.size());
        for (auto& [e, c] : rc) coeffs.push_back(c);
        Polynomial cont = gcd_list(coeffs);
        if (!cont.is_constant()) r = *r.divide_exact(cont);
        r = normalized_primitive(std::move(r));
        f = std::move(g);
        g = std::move(r);
    }
}

Polynomial gcd_impl(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero()) return normalized_primitive(b);
    if (b.is_zero()) return normalized_primitive(a);
    if (a.is_constant() || b.is_constant()) return Polynomial(Rat(1));

    // Shared monomial factor.
    Monomial mono = Monomial::gcd(a.monomial_content(), b.monomial_content());
    Polynomial pa = a, pb = b;
    if (!a.monomial_content().is_unit()) pa = *a.divide_exact(Polynomial::term(a.monomial_content(), Rat(1)));
    if (!b.monomial_content().is_unit()) pb = *b.divide_exact(Polynomial::term(b.monomial_content(), Rat(1)));
    Polynomial mono_part = Polynomial::term(mono, Rat(1));

    if (pa.is_constant() || pb.is_constant()) return normalized_primitive(mono_part);

    auto vars = common_vars(pa, pb);
    if (vars.empty()) return normalized_primitive(mono_part);

    if (pa == pb) return normalized_primitive(normalized_primitive(pa) * mono_part);

    // Divisibility fast path.
    if (pa.term_count() >= pb.term_count()) {
        if (pa.divide_exact(pb)) return normalized_primitive(normalized_primitive(pb) * mono_part);
    } else {
        if (pb.divide_exact(pa)) return normalized_primitive(normalized_primitive(pa) * mono_part);
    }

    if (certify_coprime(pa, pb, vars)) return normalized_primitive(mono_part);

    // Recursive content / primitive-part computation. Main variable: the
    // common variable with the smallest maximum degree.
    Variable x = [&] {
        std::uint32_t best = vars[0];
        int best_deg = -1;
        for (auto id : vars) {
            // Reconstruct the variable from any factor carrying this id.
            for (const auto& [m, c] : pa.terms()) {
                for (const auto& [v, e] : m.factors()) {
                    if (v.id() != id) continue;
                    int d = std::min(pa.degree_in(v), pb.degree_in(v));
                    if (best_deg < 0 || d < best_deg) {
                        best_deg = d;
                        best = id;
                    }
                }
            }
        }
        for (const auto& [m, c] : pa.terms())
            for (const auto& [v, e] : m.factors())
                if (v.id() == best) return v;
        assert(false);
        return Variable("_unreachable");
    }();

    auto ca = coefficients_in(pa, x);
    auto cb = coefficients_in(pb, x);
    std::vector<Polynomial> coeffs_a, coeffs_b;
    for (auto& [e, c] : ca) coeffs_a.push_back(c);
    for (auto& [e, c] : cb) coeffs_b.push_back(c);
    Polynomial cont_a = gcd_list(coeffs_a);
    Polynomial cont_b = gcd_list(coeffs_b);
    Polynomial pp_a = cont_a.is_constant() ? pa : *pa.divide_exact(cont_a);
    Polynomial pp_b = cont_b.is_constant() ? pb : *pb.divide_exact(cont_b);

    Polynomial g = gcd_univariate_step(pp_a, pp_b, x);
    if (!g.is_constant()) {
        // The primitive PRS can leave a content behind; make g primitive and
        // verify divisibility (a failed check means the content was spurious).
        auto gc = coefficients_in(g, x);
        std::vector<Polynomial> coeffs_g;
        for (auto& [e, c] : gc) coeffs_g.push_back(c);
        Polynomial cont_g = gcd_list(coeffs_g);
        if (!cont_g.is_constant()) g = *g.divide_exact(cont_g);
        g = normalized_primitive(std::move(g));
        if (!pp_a.divide_exact(g) || !pp_b.divide_exact(g)) g = Polynomial(Rat(1));
    }
    Polynomial cont_gcd = gcd_impl(cont_a, cont_b);
    return normalized_primitive(g * cont_gcd * mono_part);
}

} // namespace

Polynomial poly_gcd(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() && b.is_zero()) return Polynomial(Rat(1));
    Polynomial g = gcd_impl(a, b);
    if (g.is_zero() || g.is_constant()) return Polynomial(Rat(1));
    return g;
}

} // namespace epmc
