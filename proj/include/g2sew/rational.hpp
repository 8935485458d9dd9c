#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace g2sew {

/// Exact rational number; always canonical (lowest terms, positive denominator).
using Rational = mpq_class;
using Integer = mpz_class;

inline Rational make_rational(long num, long den = 1) {
    if (den == 0) throw std::domain_error("zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline Rational ratio(const Integer& num, const Integer& den) {
    if (den == 0) throw std::domain_error("zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

/// Parses "p", "-p" or "p/q".
inline Rational parse_rational(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw std::invalid_argument("empty rational");
    Rational r;
    if (r.set_str(s, 10) != 0) throw std::invalid_argument("malformed rational: " + s);
    if (r.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
    r.canonicalize();
    return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(10); }

inline bool is_zero(const Rational& r) { return sgn(r) == 0; }
inline bool is_exact_zero(const Rational& r) { return sgn(r) == 0; }
inline bool is_one(const Rational& r) { return r == 1; }

inline Rational ring_one(const Rational&) { return Rational(1); }
inline Rational ring_zero(const Rational&) { return Rational(0); }

inline Rational ring_inv(const Rational& r) {
    if (is_zero(r)) throw std::domain_error("division by zero");
    return Rational(1) / r;
}

inline Integer factorial(unsigned long n) {
    Integer out;
    mpz_fac_ui(out.get_mpz_t(), n);
    return out;
}

inline Integer binomial(long n, long k) {
    if (k < 0) return 0;
    Integer out;
    Integer top(static_cast<signed long>(n));
    mpz_bin_ui(out.get_mpz_t(), top.get_mpz_t(), static_cast<unsigned long>(k));
    return out;
}

inline Rational rpow(const Rational& base, unsigned long e) {
    Rational out(1);
    for (unsigned long i = 0; i < e; ++i) out *= base;
    return out;
}

}  // namespace g2sew
