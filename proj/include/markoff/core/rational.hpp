#pragma once

#include <gmpxx.h>

#include <compare>
#include <concepts>
#include <cstdlib>
#include <ostream>
#include <string>
#include <string_view>

#include "markoff/core/error.hpp"

namespace markoff {

using BigInt = mpz_class;

inline BigInt parse_bigint(std::string_view text) {
    std::string s(text);
    if (!s.empty() && s.front() == '+') s.erase(0, 1);
    if (s.empty()) throw parse_error("empty integer literal");
    BigInt v;
    std::size_t first = (s.front() == '-') ? 1 : 0;
    if (first == s.size()) throw parse_error("malformed integer '" + s + "'");
    for (std::size_t i = first; i < s.size(); ++i)
        if (s[i] < '0' || s[i] > '9') throw parse_error("malformed integer '" + s + "'");
    if (v.set_str(s, 10) != 0) throw parse_error("malformed integer '" + s + "'");
    return v;
}

inline std::string to_string(const BigInt& v) { return v.get_str(10); }

inline BigInt gcd(const BigInt& a, const BigInt& b) {
    BigInt g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline BigInt abs(const BigInt& a) {
    BigInt r;
    mpz_abs(r.get_mpz_t(), a.get_mpz_t());
    return r;
}

/// True iff d divides n (d != 0). Zero is divisible by everything.
inline bool divides(const BigInt& d, const BigInt& n) {
    if (d == 0) return n == 0;
    return mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t()) != 0;
}

/// Floor-free exact quotient; caller guarantees d | n.
inline BigInt exact_div(const BigInt& n, const BigInt& d) {
    BigInt q;
    mpz_divexact(q.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    return q;
}

inline BigInt pow(const BigInt& base, unsigned long e) {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

/// Exact rational number, always held in lowest terms with a positive
/// denominator. Every constructor and operator re-establishes that form.
class Rational {
public:
    Rational() = default;

    template <std::signed_integral I>
    Rational(I v) : q_(static_cast<long>(v)) {}  // NOLINT(google-explicit-constructor)

    template <std::unsigned_integral I>
    Rational(I v) : q_(static_cast<unsigned long>(v)) {}  // NOLINT

    Rational(const BigInt& v) : q_(v) {}  // NOLINT(google-explicit-constructor)

    Rational(const BigInt& num, const BigInt& den) {
        if (den == 0) throw division_by_zero("rational with zero denominator");
        q_ = mpq_class(num, den);
        q_.canonicalize();
    }

    /// Parses "p", "-p" or "p/q".
    static Rational parse(std::string_view text) {
        auto slash = text.find('/');
        if (slash == std::string_view::npos) return Rational(parse_bigint(text));
        BigInt den = parse_bigint(text.substr(slash + 1));
        return Rational(parse_bigint(text.substr(0, slash)), den);
    }

    BigInt num() const { return q_.get_num(); }
    BigInt den() const { return q_.get_den(); }
    const mpq_class& raw() const { return q_; }

    bool is_integer() const { return q_.get_den() == 1; }
    bool is_zero() const { return sgn(q_) == 0; }
    int sign() const { return sgn(q_); }

    /// Canonical-form audit: lowest terms and positive denominator.
    bool is_canonical() const {
        if (q_.get_den() <= 0) return false;
        return markoff::gcd(q_.get_num(), q_.get_den()) == 1;
    }

    /// Integral value; throws if the number is not an integer.
    BigInt to_integer() const {
        if (!is_integer()) throw precondition_failed("rational " + str() + " is not integral");
        return q_.get_num();
    }

    /// "num/den", with the denominator omitted when it is 1.
    std::string str() const {
        std::string s = q_.get_num().get_str(10);
        if (q_.get_den() != 1) s += "/" + q_.get_den().get_str(10);
        return s;
    }

    Rational operator-() const { return from_raw(-q_); }

    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
    Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw division_by_zero("rational division by zero");
        q_ /= o.q_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        int c = cmp(a.q_, b.q_);
        return c < 0 ? std::strong_ordering::less
             : c > 0 ? std::strong_ordering::greater
                     : std::strong_ordering::equal;
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    static Rational from_raw(mpq_class q) {
        Rational r;
        r.q_ = std::move(q);
        return r;
    }

    mpq_class q_;
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

} // namespace markoff
