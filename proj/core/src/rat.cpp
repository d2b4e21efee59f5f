#include "epmc/rat.hpp"

#include <ostream>
#include <stdexcept>

#include "epmc/errors.hpp"

namespace epmc {

Rat::Rat(long num, long den) : v_(static_cast<signed long>(num), static_cast<signed long>(den)) {
    if (den == 0) throw DivisionByZero();
    v_.canonicalize();
}

Rat Rat::from_decimal(std::string_view text) {
    auto dot = text.find('.');
    if (dot == std::string_view::npos) {
        mpq_class q(std::string(text), 10);
        q.canonicalize();
        return Rat(std::move(q));
    }
    std::string digits(text.substr(0, dot));
    std::string frac(text.substr(dot + 1));
    if (frac.empty()) frac = "0";
    mpz_class num(digits.empty() ? "0" : digits, 10);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    num *= scale;
    num += mpz_class(frac, 10);
    mpq_class q(num, scale);
    q.canonicalize();
    return Rat(std::move(q));
}

Rat Rat::from_double(double d) {
    mpq_class q(d);
    q.canonicalize();
    return Rat(std::move(q));
}

Rat Rat::operator/(const Rat& o) const {
    if (o.is_zero()) throw DivisionByZero();
    return Rat(mpq_class(v_ / o.v_), NoCanon{});
}

Rat& Rat::operator/=(const Rat& o) {
    if (o.is_zero()) throw DivisionByZero();
    v_ /= o.v_;
    return *this;
}

Rat Rat::inverse() const {
    if (is_zero()) throw DivisionByZero();
    return Rat(mpq_class(1 / v_), NoCanon{});
}

std::string Rat::str() const {
    return v_.get_str();
}

std::size_t Rat::hash() const {
    // Cheap but effective: mix the low limbs of numerator and denominator.
    auto limb = [](const mpz_class& z) -> std::size_t {
        std::size_t h = static_cast<std::size_t>(mpz_size(z.get_mpz_t()));
        if (h > 0) h ^= static_cast<std::size_t>(mpz_getlimbn(z.get_mpz_t(), 0));
        if (sgn(z) < 0) h = ~h;
        return h;
    };
    std::size_t h = limb(v_.get_num());
    h ^= limb(v_.get_den()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

Rat Rat::gcd(const Rat& a, const Rat& b) {
    if (a.is_zero()) return b.abs();
    if (b.is_zero()) return a.abs();
    mpz_class gn, lcm_d;
    mpz_gcd(gn.get_mpz_t(), a.num().get_mpz_t(), b.num().get_mpz_t());
    mpz_lcm(lcm_d.get_mpz_t(), a.den().get_mpz_t(), b.den().get_mpz_t());
    mpq_class q(gn, lcm_d);
    q.canonicalize();
    return Rat(std::move(q));
}

std::ostream& operator<<(std::ostream& os, const Rat& r) {
    return os << r.str();
}

} // namespace epmc
