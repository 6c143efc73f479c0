/*
 * rational.hpp -- exact integer/rational arithmetic used everywhere else.
 *
 * Thin layer over GMP's mpz_class/mpq_class.  mpq_class keeps values in
 * reduced canonical form (gcd(num, den) = 1, den > 0) after arithmetic;
 * the helpers here cover the few constructions where canonicalize() must
 * be called by hand, plus the factorial-style products the norm calculus
 * needs (gap products instead of full factorials, so quantities like
 * (a+n)!/a! never materialize a huge intermediate factorial).
 */
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fhharm {

using Int = mpz_class;
using Rational = mpq_class;

inline Rational rat(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline Rational rat(const Int& num, const Int& den) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

// Parses "p", "-p", or "p/q".  Throws on anything else (including q = 0).
inline Rational rat_from_string(const std::string& s) {
    Rational q;
    if (s.empty() || q.set_str(s, 10) != 0) {
        throw std::invalid_argument("bad rational literal: '" + s + "'");
    }
    if (q.get_den() == 0) throw std::invalid_argument("rational with zero denominator: '" + s + "'");
    q.canonicalize();
    return q;
}

// Canonical "p" / "p/q" form; round-trips bit-exactly through rat_from_string.
inline std::string rat_to_string(const Rational& q) { return q.get_str(); }

inline Int factorial(unsigned long n) {
    Int f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return f;
}

// b!/a! = (a+1)(a+2)...(b) for a <= b.  Empty product = 1.
inline Int factorial_gap(unsigned long a, unsigned long b) {
    if (a > b) throw std::invalid_argument("factorial_gap: a > b");
    Int p = 1;
    for (unsigned long i = a + 1; i <= b; ++i) p *= i;
    return p;
}

// (2b-1)!! = 1*3*5*...*(2b-1); empty product for b = 0.
inline Int double_factorial_odd(unsigned long b) {
    Int p = 1;
    for (unsigned long i = 1; i < 2 * b; i += 2) p *= i;
    return p;
}

inline Int binomial(unsigned long n, unsigned long k) {
    Int b;
    mpz_bin_uiui(b.get_mpz_t(), n, k);
    return b;
}

inline Rational pow_rational(const Rational& base, long e) {
    if (e == 0) return Rational(1);
    if (base == 0 && e < 0) throw std::invalid_argument("0 raised to a negative power");
    unsigned long a = static_cast<unsigned long>(e < 0 ? -e : e);
    Rational r;
    mpz_pow_ui(mpq_numref(r.get_mpq_t()), mpq_numref(base.get_mpq_t()), a);
    mpz_pow_ui(mpq_denref(r.get_mpq_t()), mpq_denref(base.get_mpq_t()), a);
    if (e < 0) {
        if (r == 0) throw std::invalid_argument("0 raised to a negative power");
        r = 1 / r;
    }
    return r;  // powers of a canonical p/q stay canonical
}

inline Rational square(const Rational& q) { return q * q; }

// Truncated integer square root helper for tests/certificates.
inline Int isqrt(const Int& n) {
    if (n < 0) throw std::invalid_argument("isqrt of negative");
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

}  // namespace fhharm
