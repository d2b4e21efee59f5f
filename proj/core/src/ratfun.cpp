#include "epmc/ratfun.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <deque>
#include <mutex>
#include <ostream>
#include <shared_mutex>
#include <sstream>
#include <unordered_map>

namespace epmc {

// ---------------------------------------------------------------------------
// Variable interner
// ---------------------------------------------------------------------------

namespace {

struct Interner {
    std::shared_mutex mutex;
    std::deque<std::string> names; // stable addresses
    std::unordered_map<std::string_view, std::uint32_t> ids;

    std::uint32_t intern(std::string_view name) {
        {
            std::shared_lock lock(mutex);
            auto it = ids.find(name);
            if (it != ids.end()) return it->second;
        }
        std::unique_lock lock(mutex);
        auto it = ids.find(name);
        if (it != ids.end()) return it->second;
        names.emplace_back(name);
        auto id = static_cast<std::uint32_t>(names.size() - 1);
        ids.emplace(std::string_view(names.back()), id);
        return id;
    }

    const std::string& name_of(std::uint32_t id) {
        std::shared_lock lock(mutex);
        return names[id];
    }
};

Interner& interner() {
    static Interner instance;
    return instance;
}

bool valid_identifier(std::string_view s) {
    if (s.empty()) return false;
    if (s[0] >= '0' && s[0] <= '9') return false;
    for (char c : s) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
        if (!ok) return false;
    }
    return true;
}

} // namespace

Variable::Variable(std::string_view name) {
    if (!valid_identifier(name))
        throw Error("invalid variable name: '" + std::string(name) + "'");
    id_ = interner().intern(name);
}

const std::string& Variable::name() const {
    return interner().name_of(id_);
}

bool Variable::operator<(const Variable& o) const {
    if (id_ == o.id_) return false;
    return name() < o.name();
}

// ---------------------------------------------------------------------------
// Monomial
// ---------------------------------------------------------------------------

Monomial Monomial::variable(Variable v, int exponent) {
    assert(exponent > 0);
    Monomial m;
    m.factors_.emplace_back(v, exponent);
    m.degree_ = exponent;
    return m;
}

int Monomial::exponent_of(Variable v) const {
    for (const auto& [var, e] : factors_)
        if (var == v) return e;
    return 0;
}

Monomial Monomial::operator*(const Monomial& o) const {
    Monomial r;
    r.factors_.reserve(factors_.size() + o.factors_.size());
    auto a = factors_.begin(), ae = factors_.end();
    auto b = o.factors_.begin(), be = o.factors_.end();
    while (a != ae && b != be) {
        if (a->first == b->first) {
            r.factors_.emplace_back(a->first, a->second + b->second);
            ++a;
            ++b;
        } else if (a->first < b->first) {
            r.factors_.push_back(*a++);
        } else {
            r.factors_.push_back(*b++);
        }
    }
    r.factors_.insert(r.factors_.end(), a, ae);
    r.factors_.insert(r.factors_.end(), b, be);
    r.degree_ = degree_ + o.degree_;
    return r;
}

std::optional<Monomial> Monomial::divide(const Monomial& o) const {
    Monomial r;
    auto a = factors_.begin(), ae = factors_.end();
    auto b = o.factors_.begin(), be = o.factors_.end();
    while (b != be) {
        if (a == ae) return std::nullopt;
        if (a->first == b->first) {
            if (a->second < b->second) return std::nullopt;
            if (a->second > b->second) r.factors_.emplace_back(a->first, a->second - b->second);
            ++a;
            ++b;
        } else if (a->first < b->first) {
            r.factors_.push_back(*a++);
        } else {
            return std::nullopt; // divisor has a variable we lack
        }
    }
    r.factors_.insert(r.factors_.end(), a, ae);
    r.degree_ = degree_ - o.degree_;
    return r;
}

Monomial Monomial::gcd(const Monomial& a, const Monomial& b) {
    Monomial r;
    auto i = a.factors_.begin(), ie = a.factors_.end();
    auto j = b.factors_.begin(), je = b.factors_.end();
    while (i != ie && j != je) {
        if (i->first == j->first) {
            int e = std::min(i->second, j->second);
            r.factors_.emplace_back(i->first, e);
            r.degree_ += e;
            ++i;
            ++j;
        } else if (i->first < j->first) {
            ++i;
        } else {
            ++j;
        }
    }
    return r;
}

bool Monomial::operator==(const Monomial& o) const {
    return degree_ == o.degree_ && factors_ == o.factors_;
}

int Monomial::cmp(const Monomial& a, const Monomial& b) {
    if (a.degree_ != b.degree_) return a.degree_ < b.degree_ ? -1 : 1;
    auto i = a.factors_.begin(), ie = a.factors_.end();
    auto j = b.factors_.begin(), je = b.factors_.end();
    while (i != ie && j != je) {
        if (!(i->first == j->first)) {
            // The monomial with a positive exponent on the earlier variable
            // is the larger one.
            return i->first < j->first ? 1 : -1;
        }
        if (i->second != j->second) return i->second > j->second ? 1 : -1;
        ++i;
        ++j;
    }
    // Equal total degree and one is a prefix of the other: only possible when
    // both are exhausted.
    return 0;
}

std::size_t Monomial::hash() const {
    std::size_t h = 0x811c9dc5u ^ static_cast<std::size_t>(degree_);
    for (const auto& [v, e] : factors_) {
        h ^= (static_cast<std::size_t>(v.id()) << 8) ^ static_cast<std::size_t>(e);
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string Monomial::str() const {
    if (is_unit()) return "1";
    std::string s;
    bool first = true;
    for (const auto& [v, e] : factors_) {
        if (!first) s += "*";
        s += v.name();
        if (e > 1) {
            s += "^";
            s += std::to_string(e);
        }
        first = false;
    }
    return s;
}

// ---------------------------------------------------------------------------
// Valuation
// ---------------------------------------------------------------------------

void Valuation::set(Variable v, Rat value) {
    by_name_[v.name()] = value;
    bindings_[v.id()] = std::move(value);
}

bool Valuation::contains(Variable v) const {
    return bindings_.count(v.id()) > 0;
}

const Rat& Valuation::get(Variable v) const {
    auto it = bindings_.find(v.id());
    if (it == bindings_.end()) throw UnboundVariable(v.name());
    return it->second;
}

// ---------------------------------------------------------------------------
// ComputeBudget
// ---------------------------------------------------------------------------

namespace {
thread_local const ComputeBudget* g_budget = nullptr;
thread_local std::optional<std::chrono::steady_clock::time_point> g_deadline;
thread_local std::size_t g_term_limit = ComputeBudget::kDefaultTermLimit;
thread_local unsigned g_check_tick = 0;
} // namespace

ComputeBudget::ComputeBudget(std::optional<std::chrono::steady_clock::time_point> deadline,
                             std::size_t term_limit)
    : prev_(g_budget), deadline_(g_deadline), term_limit_(g_term_limit) {
    g_budget = this;
    g_deadline = deadline;
    g_term_limit = term_limit;
}

ComputeBudget::~ComputeBudget() {
    g_deadline = deadline_;
    g_term_limit = term_limit_;
    g_budget = prev_;
}

void ComputeBudget::check(std::size_t pending_terms) {
    if (pending_terms > g_term_limit) throw ResourceLimitError(g_term_limit);
    if (g_deadline && (++g_check_tick & 0x3ff) == 0 &&
        std::chrono::steady_clock::now() > *g_deadline)
        throw TimeoutError();
}

// ---------------------------------------------------------------------------
// Polynomial
// ---------------------------------------------------------------------------

namespace {
bool term_greater(const Polynomial::Term& a, const Polynomial::Term& b) {
    return Monomial::cmp(a.first, b.first) > 0;
}
} // namespace

Polynomial::Polynomial(Rat constant) {
    if (!constant.is_zero()) terms_.emplace_back(Monomial(), std::move(constant));
}

Polynomial Polynomial::variable(Variable v) {
    Polynomial p;
    p.terms_.emplace_back(Monomial::variable(v), Rat(1));
    return p;
}

Polynomial Polynomial::term(Monomial m, Rat c) {
    Polynomial p;
    if (!c.is_zero()) p.terms_.emplace_back(std::move(m), std::move(c));
    return p;
}

bool Polynomial::is_one() const {
    return terms_.size() == 1 && terms_[0].first.is_unit() && terms_[0].second.is_one();
}

Rat Polynomial::constant_value() const {
    if (terms_.empty()) return Rat(0);
    assert(is_constant());
    return terms_[0].second;
}

int Polynomial::degree_in(Variable v) const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.exponent_of(v));
    return d;
}

Polynomial Polynomial::from_terms(std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(), term_greater);
    Polynomial p;
    p.terms_.reserve(terms.size());
    for (auto& t : terms) {
        if (!p.terms_.empty() && p.terms_.back().first == t.first) {
            p.terms_.back().second += t.second;
            if (p.terms_.back().second.is_zero()) p.terms_.pop_back();
        } else if (!t.second.is_zero()) {
            p.terms_.push_back(std::move(t));
        }
    }
    return p;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    ComputeBudget::check(terms_.size() + o.terms_.size());
    Polynomial r;
    r.terms_.reserve(terms_.size() + o.terms_.size());
    auto a = terms_.begin(), ae = terms_.end();
    auto b = o.terms_.begin(), be = o.terms_.end();
    while (a != ae && b != be) {
        int c = Monomial::cmp(a->first, b->first);
        if (c > 0) {
            r.terms_.push_back(*a++);
        } else if (c < 0) {
            r.terms_.push_back(*b++);
        } else {
            Rat s = a->second + b->second;
            if (!s.is_zero()) r.terms_.emplace_back(a->first, std::move(s));
            ++a;
            ++b;
        }
    }
    r.terms_.insert(r.terms_.end(), a, ae);
    r.terms_.insert(r.terms_.end(), b, be);
    return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
    return *this + (-o);
}

Polynomial Polynomial::operator-() const {
    Polynomial r(*this);
    for (auto& t : r.terms_) t.second = -t.second;
    return r;
}

Polynomial Polynomial::scaled(const Rat& c) const {
    if (c.is_zero()) return Polynomial();
    Polynomial r(*this);
    for (auto& t : r.terms_) t.second *= c;
    return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    if (is_zero() || o.is_zero()) return Polynomial();
    // Multiply by a single term without re-sorting: the order is preserved.
    if (o.terms_.size() == 1) {
        Polynomial r;
        r.terms_.reserve(terms_.size());
        for (const auto& [m, c] : terms_) r.terms_.emplace_back(m * o.terms_[0].first, c * o.terms_[0].second);
        return r;
    }
    if (terms_.size() == 1) return o * *this;

    struct MonoHash {
        std::size_t operator()(const Monomial& m) const { return m.hash(); }
    };
    std::unordered_map<Monomial, Rat, MonoHash> acc;
    acc.reserve(terms_.size() + o.terms_.size());
    for (const auto& [ma, ca] : terms_) {
        for (const auto& [mb, cb] : o.terms_) {
            ComputeBudget::check(acc.size());
            Monomial m = ma * mb;
            auto [it, inserted] = acc.emplace(std::move(m), ca * cb);
            if (!inserted) {
                it->second += ca * cb;
                if (it->second.is_zero()) acc.erase(it);
            }
        }
    }
    std::vector<Term> terms;
    terms.reserve(acc.size());
    for (auto& [m, c] : acc) terms.emplace_back(m, std::move(c));
    std::sort(terms.begin(), terms.end(), term_greater);
    Polynomial r;
    r.terms_ = std::move(terms);
    return r;
}

Polynomial Polynomial::pow(unsigned e) const {
    Polynomial result{Rat(1)};
    Polynomial base(*this);
    while (e > 0) {
        if (e & 1u) result = result * base;
        e >>= 1u;
        if (e > 0) base = base * base;
    }
    return result;
}

bool Polynomial::operator==(const Polynomial& o) const {
    return terms_ == o.terms_;
}

void Polynomial::collect_variables(std::set<Variable>& into) const {
    for (const auto& [m, c] : terms_)
        for (const auto& [v, e] : m.factors()) into.insert(v);
}

std::set<Variable> Polynomial::variables() const {
    std::set<Variable> vs;
    collect_variables(vs);
    return vs;
}

Rat Polynomial::evaluate(const Valuation& val) const {
    Rat sum(0);
    for (const auto& [m, c] : terms_) {
        Rat t = c;
        for (const auto& [v, e] : m.factors()) {
            const Rat& x = val.get(v);
            Rat p = x;
            for (int i = 1; i < e; ++i) p *= x;
            t *= p;
        }
        sum += t;
    }
    return sum;
}

double Polynomial::evaluate_double(const Valuation& val) const {
    return evaluate(val).to_double();
}

std::optional<Polynomial> Polynomial::divide_exact(const Polynomial& divisor) const {
    if (divisor.is_zero()) throw DivisionByZero();
    if (is_zero()) return Polynomial();
    if (divisor.is_constant()) return scaled(divisor.constant_value().inverse());

    Polynomial rem(*this);
    std::vector<Term> quotient;
    const auto& dlead = divisor.terms_.front();
    while (!rem.is_zero()) {
        ComputeBudget::check(quotient.size());
        auto q = rem.terms_.front().first.divide(dlead.first);
        if (!q) return std::nullopt;
        Rat qc = rem.terms_.front().second / dlead.second;
        quotient.emplace_back(*q, qc);
        rem = rem - divisor * Polynomial::term(std::move(*q), std::move(qc));
    }
    return from_terms(std::move(quotient));
}

Monomial Polynomial::monomial_content() const {
    if (terms_.empty()) return Monomial();
    Monomial g = terms_[0].first;
    for (std::size_t i = 1; i < terms_.size() && !g.is_unit(); ++i)
        g = Monomial::gcd(g, terms_[i].first);
    return g;
}

Rat Polynomial::rational_content() const {
    if (terms_.empty()) return Rat(1);
    Rat g(0);
    for (const auto& [m, c] : terms_) {
        g = Rat::gcd(g, c);
        if (g.is_one()) break;
    }
    return g;
}

long Polynomial::op_count() const {
    if (terms_.empty()) return 0;
    long ops = static_cast<long>(terms_.size()) - 1;
    for (const auto& [m, c] : terms_) {
        long factors = static_cast<long>(m.factors().size());
        bool coeff_factor = m.is_unit() || !(c.is_one() || (-c).is_one());
        if (coeff_factor) ++factors;
        ops += std::max(0L, factors - 1);
        for (const auto& [v, e] : m.factors())
            if (e > 1) ++ops;
    }
    return ops;
}

std::string Polynomial::str() const {
    if (terms_.empty()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        Rat coeff = c;
        if (first) {
            if (coeff.sign() < 0) {
                s += "-";
                coeff = -coeff;
            }
        } else {
            s += coeff.sign() < 0 ? " - " : " + ";
            if (coeff.sign() < 0) coeff = -coeff;
        }
        if (m.is_unit()) {
            s += coeff.str();
        } else if (coeff.is_one()) {
            s += m.str();
        } else {
            s += coeff.str();
            s += "*";
            s += m.str();
        }
        first = false;
    }
    return s;
}

// ---------------------------------------------------------------------------
// RationalFunction
// ---------------------------------------------------------------------------

RationalFunction::RationalFunction(Polynomial num, Polynomial den)
    : num_(std::move(num)), den_(std::move(den)) {
    canonicalize();
}

RationalFunction::RationalFunction(Polynomial num, Polynomial den, CoprimeTag)
    : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw DivisionByZero();
    if (num_.is_zero()) {
        den_ = Polynomial(Rat(1));
        return;
    }
    normalize_sign_and_content();
}

RationalFunction RationalFunction::variable(Variable v) {
    return RationalFunction(Polynomial::variable(v));
}

void RationalFunction::normalize_sign_and_content() {
    // den becomes integer-primitive with a positive leading coefficient.
    Rat scale = den_.rational_content();
    if (den_.leading_coeff().sign() < 0) scale = -scale;
    if (!scale.is_one()) {
        Rat inv = scale.inverse();
        num_ = num_.scaled(inv);
        den_ = den_.scaled(inv);
    }
}

void RationalFunction::canonicalize() {
    if (den_.is_zero()) throw DivisionByZero();
    if (num_.is_zero()) {
        den_ = Polynomial(Rat(1));
        return;
    }
    if (!den_.is_constant()) {
        Polynomial g = poly_gcd(num_, den_);
        if (!g.is_constant()) {
            auto qn = num_.divide_exact(g);
            auto qd = den_.divide_exact(g);
            assert(qn && qd);
            num_ = std::move(*qn);
            den_ = std::move(*qd);
        }
    }
    normalize_sign_and_content();
}

RationalFunction RationalFunction::operator+(const RationalFunction& o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    if (den_.is_one() && o.den_.is_one())
        return RationalFunction(num_ + o.num_, Polynomial(Rat(1)), CoprimeTag{});
    // Any common factor of the resulting pair divides gcd(den, o.den), so
    // the cancellation loop below only ever runs gcd against that (small)
    // polynomial rather than the full denominator product.
    Polynomial g = den_ == o.den_ ? den_ : poly_gcd(den_, o.den_);
    if (g.is_constant())
        return RationalFunction(num_ * o.den_ + o.num_ * den_, den_ * o.den_, CoprimeTag{});
    Polynomial da = *den_.divide_exact(g);
    Polynomial db = *o.den_.divide_exact(g);
    Polynomial num = num_ * db + o.num_ * da;
    Polynomial den = da * o.den_;
    Polynomial h = std::move(g);
    while (!h.is_constant() && !num.is_zero()) {
        h = poly_gcd(num, h);
        if (h.is_constant()) break;
        num = *num.divide_exact(h);
        den = *den.divide_exact(h);
    }
    return RationalFunction(std::move(num), std::move(den), CoprimeTag{});
}

RationalFunction RationalFunction::operator-(const RationalFunction& o) const {
    return *this + (-o);
}

RationalFunction RationalFunction::operator-() const {
    RationalFunction r(*this);
    r.num_ = -r.num_;
    return r;
}

RationalFunction RationalFunction::operator*(const RationalFunction& o) const {
    if (is_zero() || o.is_zero()) return RationalFunction();
    // Cross-cancel before multiplying; the products of the reduced parts are
    // then coprime by construction.
    Polynomial g1 = poly_gcd(num_, o.den_);
    Polynomial g2 = poly_gcd(o.num_, den_);
    const Polynomial n1 = g1.is_constant() ? num_ : *num_.divide_exact(g1);
    const Polynomial d2 = g1.is_constant() ? o.den_ : *o.den_.divide_exact(g1);
    const Polynomial n2 = g2.is_constant() ? o.num_ : *o.num_.divide_exact(g2);
    const Polynomial d1 = g2.is_constant() ? den_ : *den_.divide_exact(g2);
    return RationalFunction(n1 * n2, d1 * d2, CoprimeTag{});
}

RationalFunction RationalFunction::operator/(const RationalFunction& o) const {
    if (o.is_zero()) throw DivisionByZero();
    RationalFunction inv(o.den_, o.num_, CoprimeTag{});
    return *this * inv;
}

RationalFunction RationalFunction::pow(int e) const {
    if (e < 0) return RationalFunction(Rat(1)) / pow(-e);
    RationalFunction r(Rat(1));
    for (int i = 0; i < e; ++i) r = r * *this;
    return r;
}

void RationalFunction::collect_variables(std::set<Variable>& into) const {
    num_.collect_variables(into);
    den_.collect_variables(into);
}

std::set<Variable> RationalFunction::variables() const {
    std::set<Variable> vs;
    collect_variables(vs);
    return vs;
}

Rat RationalFunction::evaluate(const Valuation& v) const {
    Rat d = den_.evaluate(v);
    if (d.is_zero()) throw DenominatorZeroAtPoint();
    return num_.evaluate(v) / d;
}

double RationalFunction::evaluate_double(const Valuation& v) const {
    return evaluate(v).to_double();
}

RationalFunction RationalFunction::substituted(const std::map<Variable, RationalFunction>& m) const {
    RationalFunction n = num_.substituted(m);
    RationalFunction d = den_.substituted(m);
    return n / d;
}

RationalFunction Polynomial::substituted(const std::map<Variable, RationalFunction>& m) const {
    RationalFunction sum;
    for (const auto& [mono, c] : terms_) {
        RationalFunction t{Rat(c)};
        Polynomial untouched(Rat(1));
        for (const auto& [v, e] : mono.factors()) {
            auto it = m.find(v);
            if (it == m.end()) {
                untouched = untouched * Polynomial::term(Monomial::variable(v, e), Rat(1));
            } else {
                t = t * it->second.pow(e);
            }
        }
        t = t * RationalFunction(std::move(untouched));
        sum = sum + t;
    }
    return sum;
}

long RationalFunction::op_count() const {
    long ops = num_.op_count();
    if (!den_.is_one()) ops += den_.op_count() + 1;
    return ops;
}

std::string RationalFunction::str() const {
    if (den_.is_one()) return num_.str();
    std::string n = num_.str();
    std::string d = den_.str();
    bool nparen = num_.term_count() > 1;
    bool dparen = den_.term_count() > 1 || den_.op_count() > 0;
    std::string s;
    s += nparen ? "(" + n + ")" : n;
    s += "/";
    s += dparen ? "(" + d + ")" : d;
    return s;
}

RationalFunction operator+(long a, const RationalFunction& b) { return RationalFunction(a) + b; }
RationalFunction operator-(long a, const RationalFunction& b) { return RationalFunction(a) - b; }
RationalFunction operator*(long a, const RationalFunction& b) { return RationalFunction(a) * b; }

std::ostream& operator<<(std::ostream& os, const Polynomial& p) { return os << p.str(); }
std::ostream& operator<<(std::ostream& os, const RationalFunction& f) { return os << f.str(); }

} // namespace epmc
