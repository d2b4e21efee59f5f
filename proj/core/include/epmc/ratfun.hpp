#ifndef EPMC_RATFUN_HPP
#define EPMC_RATFUN_HPP

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "epmc/errors.hpp"
#include "epmc/rat.hpp"

namespace epmc {

/// Interned variable name. Two variables with equal names compare equal.
/// Names are identifiers: letters, digits and underscore, not starting with
/// a digit.
class Variable {
public:
    explicit Variable(std::string_view name);
    const std::string& name() const;
    std::uint32_t id() const { return id_; }
    bool operator==(const Variable& o) const { return id_ == o.id_; }
    bool operator!=(const Variable& o) const { return id_ != o.id_; }
    /// Total order by name (the order used for canonical printing).
    bool operator<(const Variable& o) const;

private:
    std::uint32_t id_;
};

/// Product of variable powers with positive integer exponents, kept sorted by
/// variable name. The empty product is the unit monomial.
class Monomial {
public:
    using Factor = std::pair<Variable, int>;

    Monomial() = default;
    static Monomial variable(Variable v, int exponent = 1);

    bool is_unit() const { return factors_.empty(); }
    int degree() const { return degree_; }
    const std::vector<Factor>& factors() const { return factors_; }
    int exponent_of(Variable v) const;

    Monomial operator*(const Monomial& o) const;
    /// Exact quotient, or nullopt if some exponent would go negative.
    std::optional<Monomial> divide(const Monomial& o) const;
    static Monomial gcd(const Monomial& a, const Monomial& b);

    bool operator==(const Monomial& o) const;
    /// Graded lexicographic comparison; > 0 means a is the "larger" (leading)
    /// monomial. Higher total degree wins; ties go to the monomial with the
    /// higher exponent on the alphabetically earliest differing variable.
    static int cmp(const Monomial& a, const Monomial& b);

    std::size_t hash() const;
    std::string str() const;

private:
    std::vector<Factor> factors_;
    int degree_ = 0;
};

/// Binding of variables to exact rationals. Doubles are converted to their
/// exact binary value on insertion.
class Valuation {
public:
    Valuation() = default;
    void set(Variable v, Rat value);
    void set(Variable v, double value) { set(v, Rat::from_double(value)); }
    void set(const std::string& name, Rat value) { set(Variable(name), std::move(value)); }
    void set(const std::string& name, double value) { set(Variable(name), value); }
    bool contains(Variable v) const;
    const Rat& get(Variable v) const; // throws UnboundVariable
    std::size_t size() const { return bindings_.size(); }
    const std::map<std::string, Rat>& bindings() const { return by_name_; }

private:
    std::map<std::uint32_t, Rat> bindings_;
    std::map<std::string, Rat> by_name_;
};

class RationalFunction;

/// Sparse multivariate polynomial with exact rational coefficients. Terms are
/// stored in descending graded-lex order; no zero coefficients are stored, so
/// the empty polynomial is zero.
class Polynomial {
public:
    using Term = std::pair<Monomial, Rat>;

    Polynomial() = default; // zero
    explicit Polynomial(Rat constant);
    explicit Polynomial(long constant) : Polynomial(Rat(constant)) {}
    static Polynomial variable(Variable v);
    static Polynomial term(Monomial m, Rat c);

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].first.is_unit()); }
    bool is_one() const;
    /// Value of a constant polynomial (zero polynomial gives 0).
    Rat constant_value() const;

    std::size_t term_count() const { return terms_.size(); }
    const std::vector<Term>& terms() const { return terms_; }
    const Monomial& leading_monomial() const { return terms_.front().first; }
    const Rat& leading_coeff() const { return terms_.front().second; }
    int total_degree() const { return terms_.empty() ? 0 : terms_.front().first.degree(); }
    int degree_in(Variable v) const;

    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial operator-() const;
    Polynomial scaled(const Rat& c) const;
    Polynomial pow(unsigned e) const;

    bool operator==(const Polynomial& o) const;
    bool operator!=(const Polynomial& o) const { return !(*this == o); }

    std::set<Variable> variables() const;
    void collect_variables(std::set<Variable>& into) const;

    Rat evaluate(const Valuation& v) const;           // throws UnboundVariable
    double evaluate_double(const Valuation& v) const; // convenience

    /// Exact quotient, or nullopt when the division is not exact.
    std::optional<Polynomial> divide_exact(const Polynomial& divisor) const;
    /// Largest monomial dividing every term (unit monomial when zero).
    Monomial monomial_content() const;
    /// Positive rational c such that (1/c) * this has coprime integer
    /// coefficients. Returns 1 for the zero polynomial.
    Rat rational_content() const;

    /// Substitute rational functions for variables; unmapped variables stay.
    RationalFunction substituted(const std::map<Variable, RationalFunction>& m) const;

    /// Arithmetic-operation count of the canonical printed form; see
    /// RationalFunction::op_count for the full rule.
    long op_count() const;

    std::string str() const;

    /// Constructor from an unsorted term list; merges duplicates, drops zeros.
    static Polynomial from_terms(std::vector<Term> terms);

private:
    std::vector<Term> terms_;
};

/// gcd over Q[x1..xn], normalized to an integer-primitive polynomial with a
/// positive leading coefficient (1 for coprime inputs).
Polynomial poly_gcd(const Polynomial& a, const Polynomial& b);

/// Quotient num/den of polynomials, canonical:
///   - den is never zero and gcd(num, den) is a unit;
///   - den is integer-primitive with positive leading coefficient;
///   - equal canonical values are structurally equal.
class RationalFunction {
public:
    RationalFunction() : num_(), den_(Rat(1)) {} // zero
    RationalFunction(Rat constant) : num_(std::move(constant)), den_(Rat(1)) {}
    RationalFunction(long constant) : num_(Rat(constant)), den_(Rat(1)) {}
    explicit RationalFunction(Polynomial p) : num_(std::move(p)), den_(Rat(1)) {}
    RationalFunction(Polynomial num, Polynomial den); // canonicalizes
    static RationalFunction variable(Variable v);
    static RationalFunction variable(const std::string& name) { return variable(Variable(name)); }

    const Polynomial& num() const { return num_; }
    const Polynomial& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_.is_one() && den_.is_one(); }
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
    Rat constant_value() const { return num_.constant_value() / den_.constant_value(); }

    RationalFunction operator+(const RationalFunction& o) const;
    RationalFunction operator-(const RationalFunction& o) const;
    RationalFunction operator*(const RationalFunction& o) const;
    RationalFunction operator/(const RationalFunction& o) const; // throws DivisionByZero
    RationalFunction operator-() const;
    RationalFunction pow(int e) const;

    bool operator==(const RationalFunction& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const RationalFunction& o) const { return !(*this == o); }

    std::set<Variable> variables() const;
    void collect_variables(std::set<Variable>& into) const;

    Rat evaluate(const Valuation& v) const; // throws UnboundVariable, DenominatorZeroAtPoint
    double evaluate_double(const Valuation& v) const;

    RationalFunction substituted(const std::map<Variable, RationalFunction>& m) const;

    /// Number of arithmetic operations in the canonical printed form:
    /// per polynomial, (#terms - 1) additions plus, per term, one
    /// multiplication per factor beyond the first (a coefficient counts as a
    /// factor unless it is +/-1) and one exponentiation per power > 1;
    /// plus one division when den != 1.
    long op_count() const;

    std::string str() const;

private:
    struct CoprimeTag {};
    RationalFunction(Polynomial num, Polynomial den, CoprimeTag);
    void canonicalize();
    void normalize_sign_and_content();
    Polynomial num_, den_;
};

RationalFunction operator+(long a, const RationalFunction& b);
RationalFunction operator-(long a, const RationalFunction& b);
RationalFunction operator*(long a, const RationalFunction& b);

/// Re-canonicalizes from scratch. Values are canonical by construction, so
/// this is the identity; it exists as an explicit idempotence check point.
inline RationalFunction simplify(const RationalFunction& f) {
    return RationalFunction(f.num(), f.den());
}

std::ostream& operator<<(std::ostream& os, const Polynomial& p);
std::ostream& operator<<(std::ostream& os, const RationalFunction& f);

/// Scoped cooperative resource guard. While an instance is alive on a thread,
/// polynomial arithmetic on that thread periodically checks the wall-clock
/// deadline (throwing TimeoutError) and aborts results growing past
/// `term_limit` terms (throwing ResourceLimitError). Scopes nest; the
/// innermost one wins.
class ComputeBudget {
public:
    ComputeBudget(std::optional<std::chrono::steady_clock::time_point> deadline,
                  std::size_t term_limit);
    ~ComputeBudget();
    ComputeBudget(const ComputeBudget&) = delete;
    ComputeBudget& operator=(const ComputeBudget&) = delete;

    static void check(std::size_t pending_terms); // called from hot paths
    static constexpr std::size_t kDefaultTermLimit = 8'000'000;

private:
    const ComputeBudget* prev_;
    std::optional<std::chrono::steady_clock::time_point> deadline_;
    std::size_t term_limit_;
};

} // namespace epmc

#endif
