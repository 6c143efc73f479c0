/*
 * bigfloat.hpp -- RAII wrapper around MPFR.
 *
 * Default working precision is 256 bits.  Every operation takes the
 * precision of its destination from the operands (max), so mixing
 * precisions widens rather than silently truncates.  Directed-rounding
 * variants are provided for the handful of places that need certified
 * one-sided bounds (tail majorants, fitted constants).
 */
#pragma once

#include <mpfr.h>

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

#include "fhharm/rational.hpp"

namespace fhharm {

class BigFloat {
  public:
    static constexpr mpfr_prec_t kDefaultPrec = 256;

    BigFloat() { mpfr_init2(v_, kDefaultPrec); mpfr_set_zero(v_, 1); }
    BigFloat(const BigFloat& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    BigFloat(BigFloat&& o) noexcept { mpfr_init2(v_, kDefaultPrec); mpfr_swap(v_, o.v_); }
    BigFloat(long n) { mpfr_init2(v_, kDefaultPrec); mpfr_set_si(v_, n, MPFR_RNDN); }
    BigFloat(int n) { mpfr_init2(v_, kDefaultPrec); mpfr_set_si(v_, n, MPFR_RNDN); }
    BigFloat(unsigned long n) { mpfr_init2(v_, kDefaultPrec); mpfr_set_ui(v_, n, MPFR_RNDN); }
    BigFloat(unsigned n) { mpfr_init2(v_, kDefaultPrec); mpfr_set_ui(v_, n, MPFR_RNDN); }
    BigFloat(double d) { mpfr_init2(v_, kDefaultPrec); mpfr_set_d(v_, d, MPFR_RNDN); }
    ~BigFloat() { mpfr_clear(v_); }

    // Zero at a chosen precision (mpfr_prec_t aliases long, so this cannot
    // be a constructor overload without colliding with BigFloat(long)).
    static BigFloat with_prec(mpfr_prec_t prec) {
        BigFloat r;
        mpfr_set_prec(r.v_, prec);
        mpfr_set_zero(r.v_, 1);
        return r;
    }

    BigFloat& operator=(const BigFloat& o) {
        if (this != &o) mpfr_set(v_, o.v_, MPFR_RNDN);
        return *this;
    }
    BigFloat& operator=(BigFloat&& o) noexcept {
        if (this != &o) mpfr_swap(v_, o.v_);
        return *this;
    }

    static BigFloat from_rational(const Rational& q, mpfr_rnd_t rnd = MPFR_RNDN,
                                  mpfr_prec_t prec = kDefaultPrec) {
        BigFloat r = with_prec(prec);
        mpfr_set_q(r.v_, q.get_mpq_t(), rnd);
        return r;
    }
    static BigFloat from_int(const Int& n, mpfr_rnd_t rnd = MPFR_RNDN,
                             mpfr_prec_t prec = kDefaultPrec) {
        BigFloat r = with_prec(prec);
        mpfr_set_z(r.v_, n.get_mpz_t(), rnd);
        return r;
    }

    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }
    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    bool is_nan() const { return mpfr_nan_p(v_) != 0; }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }

    // Nearest dyadic rational; exact conversion of the stored value.
    Rational to_rational() const {
        if (!mpfr_number_p(v_)) throw std::domain_error("BigFloat::to_rational on non-finite value");
        Rational q;
        mpfr_get_q(q.get_mpq_t(), v_);
        q.canonicalize();
        return q;
    }

    // Fixed-format scientific string; deterministic across runs/platforms.
    std::string str(int digits = 40) const {
        char buf[128];
        mpfr_snprintf(buf, sizeof buf, "%.*Re", digits, v_);
        return std::string(buf);
    }

#define FHHARM_BF_BINOP(op, fn)                                              \
    friend BigFloat operator op(const BigFloat& a, const BigFloat& b) {      \
        BigFloat r = with_prec(std::max(a.prec(), b.prec()));                \
        fn(r.v_, a.v_, b.v_, MPFR_RNDN);                                     \
        return r;                                                            \
    }
    FHHARM_BF_BINOP(+, mpfr_add)
    FHHARM_BF_BINOP(-, mpfr_sub)
    FHHARM_BF_BINOP(*, mpfr_mul)
    FHHARM_BF_BINOP(/, mpfr_div)
#undef FHHARM_BF_BINOP

    BigFloat& operator+=(const BigFloat& b) { mpfr_add(v_, v_, b.v_, MPFR_RNDN); return *this; }
    BigFloat& operator-=(const BigFloat& b) { mpfr_sub(v_, v_, b.v_, MPFR_RNDN); return *this; }
    BigFloat& operator*=(const BigFloat& b) { mpfr_mul(v_, v_, b.v_, MPFR_RNDN); return *this; }
    BigFloat& operator/=(const BigFloat& b) { mpfr_div(v_, v_, b.v_, MPFR_RNDN); return *this; }
    friend BigFloat operator-(const BigFloat& a) {
        BigFloat r = with_prec(a.prec());
        mpfr_neg(r.v_, a.v_, MPFR_RNDN);
        return r;
    }

    friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) < 0; }
    friend bool operator>(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) > 0; }
    friend bool operator<=(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) <= 0; }
    friend bool operator>=(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) >= 0; }
    friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }

  private:
    mpfr_t v_;
};

inline BigFloat bf_add(const BigFloat& a, const BigFloat& b, mpfr_rnd_t rnd) {
    BigFloat r = BigFloat::with_prec(std::max(a.prec(), b.prec()));
    mpfr_add(r.raw(), a.raw(), b.raw(), rnd);
    return r;
}
inline BigFloat bf_sub(const BigFloat& a, const BigFloat& b, mpfr_rnd_t rnd) {
    BigFloat r = BigFloat::with_prec(std::max(a.prec(), b.prec()));
    mpfr_sub(r.raw(), a.raw(), b.raw(), rnd);
    return r;
}
inline BigFloat bf_mul(const BigFloat& a, const BigFloat& b, mpfr_rnd_t rnd) {
    BigFloat r = BigFloat::with_prec(std::max(a.prec(), b.prec()));
    mpfr_mul(r.raw(), a.raw(), b.raw(), rnd);
    return r;
}
inline BigFloat bf_div(const BigFloat& a, const BigFloat& b, mpfr_rnd_t rnd) {
    BigFloat r = BigFloat::with_prec(std::max(a.prec(), b.prec()));
    mpfr_div(r.raw(), a.raw(), b.raw(), rnd);
    return r;
}

inline BigFloat bf_exp(const BigFloat& a, mpfr_rnd_t rnd = MPFR_RNDN) {
    BigFloat r = BigFloat::with_prec(a.prec());
    mpfr_exp(r.raw(), a.raw(), rnd);
    return r;
}
inline BigFloat bf_log(const BigFloat& a, mpfr_rnd_t rnd = MPFR_RNDN) {
    BigFloat r = BigFloat::with_prec(a.prec());
    mpfr_log(r.raw(), a.raw(), rnd);
    return r;
}
inline BigFloat bf_sqrt(const BigFloat& a, mpfr_rnd_t rnd = MPFR_RNDN) {
    BigFloat r = BigFloat::with_prec(a.prec());
    mpfr_sqrt(r.raw(), a.raw(), rnd);
    return r;
}
inline BigFloat bf_abs(const BigFloat& a) {
    BigFloat r = BigFloat::with_prec(a.prec());
    mpfr_abs(r.raw(), a.raw(), MPFR_RNDN);
    return r;
}
inline BigFloat bf_pow_si(const BigFloat& a, long e, mpfr_rnd_t rnd = MPFR_RNDN) {
    BigFloat r = BigFloat::with_prec(a.prec());
    mpfr_pow_si(r.raw(), a.raw(), e, rnd);
    return r;
}
// a^(p/q) for rational exponents (used for r^(N/2 - 3/4) style bounds).
// The exponent must be exactly representable at the working precision, so
// the directed rounding of the pow is the only rounding involved.
inline BigFloat bf_pow_rational_exp(const BigFloat& a, const Rational& e, mpfr_rnd_t rnd = MPFR_RNDN) {
    BigFloat ef = BigFloat::from_rational(e, MPFR_RNDN, a.prec());
    if (!(ef.to_rational() == e)) throw std::invalid_argument("bf_pow_rational_exp: exponent not dyadic at this precision");
    BigFloat r = BigFloat::with_prec(a.prec());
    mpfr_pow(r.raw(), a.raw(), ef.raw(), rnd);
    return r;
}
// log(n!) via lngamma(n+1), directed.
inline BigFloat bf_lnfac(unsigned long n, mpfr_rnd_t rnd = MPFR_RNDN,
                         mpfr_prec_t prec = BigFloat::kDefaultPrec) {
    BigFloat x = BigFloat::with_prec(prec);
    mpfr_set_ui(x.raw(), n + 1, MPFR_RNDN);
    BigFloat r = BigFloat::with_prec(prec);
    mpfr_lngamma(r.raw(), x.raw(), rnd);
    return r;
}
inline BigFloat bf_max(const BigFloat& a, const BigFloat& b) { return a < b ? b : a; }

}  // namespace fhharm
