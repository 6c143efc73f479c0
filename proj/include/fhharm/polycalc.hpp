/*
 * polycalc.hpp -- sparse multivariate polynomials over Q.
 *
 * A polynomial is a map from monomials to nonzero rational coefficients,
 * ordered graded-lexicographically (total degree first, then exponent
 * vectors with x1 heaviest).  The zero polynomial is the empty map and has
 * no degree.  All operations are exact; this module is the single source
 * of symbolic truth for everything downstream.
 */
#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fhharm/rational.hpp"

namespace fhharm {

struct Monomial {
    std::vector<uint32_t> e;  // exponent per variable, fixed length = nvars

    Monomial() = default;
    explicit Monomial(std::vector<uint32_t> exps) : e(std::move(exps)) {}
    static Monomial unit(unsigned nvars) { return Monomial(std::vector<uint32_t>(nvars, 0)); }

    unsigned degree() const {
        unsigned d = 0;
        for (uint32_t x : e) d += x;
        return d;
    }

    // Graded lexicographic order; within a degree the vector with the larger
    // leading exponent (x1 first) compares greater.
    friend bool operator<(const Monomial& a, const Monomial& b) {
        unsigned da = a.degree(), db = b.degree();
        if (da != db) return da < db;
        return a.e < b.e;
    }
    friend bool operator==(const Monomial& a, const Monomial& b) { return a.e == b.e; }
};

class Polynomial {
  public:
    Polynomial() = default;
    explicit Polynomial(unsigned nvars) : nvars_(nvars) {}

    static Polynomial zero(unsigned nvars) { return Polynomial(nvars); }
    static Polynomial constant(unsigned nvars, const Rational& c);
    static Polynomial variable(unsigned nvars, unsigned axis);  // axis is 1-based

    unsigned nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }
    const std::map<Monomial, Rational>& terms() const { return terms_; }

    // Total degree; empty for the zero polynomial.
    std::optional<unsigned> degree() const {
        if (terms_.empty()) return std::nullopt;
        return terms_.rbegin()->first.degree();
    }

    Rational coeff(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    // Accumulate c * m, dropping the entry if the sum cancels.
    void add_term(const Monomial& m, const Rational& c);

    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { a += b; return a; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { a -= b; return a; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Rational& c, const Polynomial& p);
    friend Polynomial operator-(const Polynomial& p) { return Rational(-1) * p; }
    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
    }

  private:
    unsigned nvars_ = 0;
    std::map<Monomial, Rational> terms_;
};

// d^order/dx_axis^order, exact.  axis is 1-based; order 0 is the identity.
Polynomial differentiate(const Polynomial& p, unsigned axis, unsigned order = 1);

// Sum of second partials over all variables.
Polynomial laplacian(const Polynomial& p);

// Exact evaluation at a rational point (size must equal nvars).
Rational evaluate(const Polynomial& p, const std::vector<Rational>& x);

// Exact evaluation at a double point (for sampled suprema only).
double evaluate_d(const Polynomial& p, const std::vector<double>& x);

// Nonzero graded pieces, ascending by total degree.
std::vector<std::pair<unsigned, Polynomial>> graded_parts(const Polynomial& p);

// Homogeneous harmonic polynomial: validated on construction.
struct HomogeneousHarmonic {
    unsigned degree = 0;
    Polynomial poly;

    HomogeneousHarmonic() = default;
    HomogeneousHarmonic(unsigned deg, Polynomial p);  // throws unless homogeneous of deg and harmonic

    struct unchecked_t {};
    HomogeneousHarmonic(unsigned deg, Polynomial p, unchecked_t)
        : degree(deg), poly(std::move(p)) {}
};

// Splits a harmonic polynomial into its homogeneous harmonic parts.
// Throws std::domain_error naming every degree whose graded part fails
// harmonicity (each graded part of a harmonic polynomial must itself be
// harmonic, so this check subsumes the precondition on the input).
std::vector<HomogeneousHarmonic> homogeneous_components(const Polynomial& p);

// Canonical text form: terms highest-first, "coeff * x1^a1 * ..." with the
// coefficient always present as a canonical rational and zero exponents
// omitted.  parse_polynomial(to_text(p), p.nvars()) == p bit-exactly.
std::string to_text(const Polynomial& p);
Polynomial parse_polynomial(const std::string& text, unsigned nvars);

}  // namespace fhharm
