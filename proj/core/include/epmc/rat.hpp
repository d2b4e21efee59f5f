#ifndef EPMC_RAT_HPP
#define EPMC_RAT_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace epmc {

/// Arbitrary-precision rational, always kept canonical (coprime, positive
/// denominator). Thin value wrapper around GMP's mpq_class.
class Rat {
public:
    Rat() : v_(0) {}
    Rat(int n) : v_(n) {}
    Rat(long n) : v_(static_cast<signed long>(n)) {}
    Rat(long num, long den);
    explicit Rat(mpq_class q) : v_(std::move(q)) { v_.canonicalize(); }

    /// Exact value of a decimal literal such as "0.95" or "12".
    static Rat from_decimal(std::string_view text);
    /// Exact binary value of a double (doubles are dyadic rationals).
    static Rat from_double(double d);

    Rat operator+(const Rat& o) const { return Rat(mpq_class(v_ + o.v_), NoCanon{}); }
    Rat operator-(const Rat& o) const { return Rat(mpq_class(v_ - o.v_), NoCanon{}); }
    Rat operator*(const Rat& o) const { return Rat(mpq_class(v_ * o.v_), NoCanon{}); }
    Rat operator/(const Rat& o) const;
    Rat operator-() const { return Rat(mpq_class(-v_), NoCanon{}); }
    Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
    Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
    Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
    Rat& operator/=(const Rat& o);

    bool operator==(const Rat& o) const { return v_ == o.v_; }
    bool operator!=(const Rat& o) const { return v_ != o.v_; }
    bool operator<(const Rat& o) const { return v_ < o.v_; }
    bool operator<=(const Rat& o) const { return v_ <= o.v_; }
    bool operator>(const Rat& o) const { return v_ > o.v_; }
    bool operator>=(const Rat& o) const { return v_ >= o.v_; }

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_one() const { return v_ == 1; }
    bool is_integer() const { return v_.get_den() == 1; }
    int sign() const { return sgn(v_); }
    Rat abs() const { return Rat(mpq_class(::abs(v_)), NoCanon{}); }
    Rat inverse() const;

    const mpz_class& num() const { return v_.get_num(); }
    const mpz_class& den() const { return v_.get_den(); }
    const mpq_class& mpq() const { return v_; }

    double to_double() const { return v_.get_d(); }
    /// "a" for integers, "a/b" otherwise.
    std::string str() const;
    std::size_t hash() const;

    /// gcd(|a|,|b|) as a nonnegative rational: gcd of numerators over lcm of
    /// denominators. gcd(0,b) = |b|.
    static Rat gcd(const Rat& a, const Rat& b);

private:
    struct NoCanon {};
    Rat(mpq_class q, NoCanon) : v_(std::move(q)) {}
    mpq_class v_;
};

std::ostream& operator<<(std::ostream& os, const Rat& r);

} // namespace epmc

template <>
struct std::hash<epmc::Rat> {
    std::size_t operator()(const epmc::Rat& r) const { return r.hash(); }
};

#endif
