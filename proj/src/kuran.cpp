#include "fhharm/kuran.hpp"

#include <json.hpp>

#include <algorithm>
#include <cassert>
#include <stdexcept>

#include "fhharm/spheremeans.hpp"

namespace fhharm {

Int dim_harmonic(unsigned long m, unsigned N) {
    if (N == 0) throw std::invalid_argument("dim_harmonic: N must be >= 1");
    if (N == 1) return (m <= 1) ? 1 : 0;
    if (N == 2 && m == 0) return 1;
    // ((N+2m-2)/(N+m-2)) * C(N+m-2, m); the quotient is always an integer.
    unsigned long top = N + m - 2;
    Int b = binomial(top, std::min<unsigned long>(m, N - 2));
    Rational d = rat(Int(N + 2 * m - 2) * b, Int(top));
    if (d.get_den() != 1) throw std::logic_error("dim_harmonic: non-integral value");
    return d.get_num();
}

std::vector<Rational> axial_coefficients(unsigned m, unsigned N) {
    if (N < 2) throw std::invalid_argument("axial_coefficients: N must be >= 2");
    std::vector<Rational> a;
    a.reserve(m / 2 + 1);
    a.push_back(Rational(1));
    for (unsigned j = 0; 2 * (j + 1) <= m; ++j) {
        long num = static_cast<long>(m - 2 * j) * static_cast<long>(m - 2 * j - 1);
        long den = 2L * static_cast<long>(j + 1) * static_cast<long>(2 * j + N - 1);
        a.push_back(-a.back() * rat(num, den));
    }
    return a;
}

namespace {

// (x2^2 + ... + xN^2)^j over N variables; the empty sum (N = 1) gives the
// zero polynomial for j >= 1 and the constant 1 for j = 0.
Polynomial rho_power(unsigned N, unsigned j) {
    Polynomial rho2(N);
    for (unsigned i = 2; i <= N; ++i) {
        Monomial mm = Monomial::unit(N);
        mm.e[i - 1] = 2;
        rho2.add_term(mm, Rational(1));
    }
    Polynomial acc = Polynomial::constant(N, Rational(1));
    for (unsigned t = 0; t < j; ++t) acc = acc * rho2;
    return acc;
}

}  // namespace

Polynomial restrict_axial(unsigned m, unsigned N, unsigned p) {
    if (N == 0) throw std::invalid_argument("restrict_axial: N must be >= 1");
    std::vector<Rational> a = axial_coefficients(m, N + 2 * p);
    Polynomial out(N);
    for (unsigned j = 0; j < a.size(); ++j) {
        if (a[j] == 0) continue;
        Polynomial term = a[j] * rho_power(N, j);
        if (m - 2 * j > 0) {
            Monomial x1 = Monomial::unit(N);
            x1.e[0] = m - 2 * j;
            Polynomial pw(N);
            pw.add_term(x1, Rational(1));
            term = term * pw;
        }
        out += term;
    }
    return out;
}

AxialHarmonic axial_harmonic(unsigned m, unsigned N) {
    AxialHarmonic ax;
    ax.m = m;
    ax.N = N;
    ax.h = HomogeneousHarmonic(m, restrict_axial(m, N, 0));
    return ax;
}

// ---- Kuran decomposition ---------------------------------------------------

namespace {

bool is_x1_free(const Polynomial& p) {
    for (const auto& [mm, c] : p.terms()) {
        if (mm.e[0] != 0) return false;
    }
    return true;
}

}  // namespace

KuranDecomposition kuran_decompose(const HomogeneousHarmonic& H) {
    const Polynomial& P = H.poly;
    unsigned N = P.nvars();
    unsigned m = H.degree;
    KuranDecomposition dec;
    dec.m = m;
    dec.N = N;
    dec.parts.assign(m + 1, Polynomial(N));
    if (P.is_zero()) return dec;

    // Slice by x1-degree: P = sum_i x1^i h_i with h_i free of x1.
    std::vector<Polynomial> slice(m + 1, Polynomial(N));
    for (const auto& [mm, c] : P.terms()) {
        Monomial stripped = mm;
        uint32_t i = stripped.e[0];
        stripped.e[0] = 0;
        slice[i].add_term(stripped, c);
    }

    // The monomial-basis system is block-triangular in the x1-degree:
    // matching the coefficient of x1^(m-p) gives
    //   u_p = h_{m-p} - sum_{q<p, q=p mod 2} a_{(p-q)/2}^{(m-q, N+2q)} rho^(p-q) u_q.
    for (unsigned p = 0; p <= m; ++p) {
        Polynomial u = slice[m - p];
        for (unsigned q = (p % 2); q < p; q += 2) {
            if (dec.parts[q].is_zero()) continue;
            unsigned j = (p - q) / 2;
            std::vector<Rational> a = axial_coefficients(m - q, N + 2 * q);
            if (a[j] == 0) continue;
            u -= a[j] * (rho_power(N, j) * dec.parts[q]);
        }
        dec.parts[p] = std::move(u);
    }

    // Validity is guaranteed for harmonic input; these checks surface an
    // inconsistent system (i.e. a bug) rather than a user error.
    for (unsigned p = 0; p <= m; ++p) {
        if (!is_x1_free(dec.parts[p])) {
            throw std::logic_error("kuran_decompose: inconsistent system (part depends on x1)");
        }
        if (!laplacian(dec.parts[p]).is_zero()) {
            throw std::logic_error("kuran_decompose: inconsistent system (part not harmonic)");
        }
    }
    if (!(kuran_recombine(dec) == P)) {
        throw std::logic_error("kuran_decompose: inconsistent system (recombination mismatch)");
    }
    return dec;
}

KuranDecomposition kuran_decompose(const Polynomial& H) {
    if (H.is_zero()) {
        KuranDecomposition dec;
        dec.m = 0;
        dec.N = H.nvars();
        dec.parts.assign(1, Polynomial(H.nvars()));
        return dec;
    }
    return kuran_decompose(HomogeneousHarmonic(*H.degree(), H));
}

Polynomial kuran_recombine(const KuranDecomposition& dec) {
    Polynomial acc(dec.N);
    for (unsigned p = 0; p < dec.parts.size(); ++p) {
        if (dec.parts[p].is_zero()) continue;
        acc += dec.parts[p] * restrict_axial(dec.m - p, dec.N, p);
    }
    return acc;
}

std::string kuran_to_json(const KuranDecomposition& dec, bool pretty) {
    nlohmann::json j;
    j["m"] = dec.m;
    j["N"] = dec.N;
    nlohmann::json parts = nlohmann::json::array();
    for (unsigned p = 0; p < dec.parts.size(); ++p) {
        parts.push_back({{"p", p}, {"u_p", to_text(dec.parts[p])}});
    }
    j["parts"] = parts;
    return pretty ? j.dump(2) : j.dump();
}

KuranDecomposition kuran_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    KuranDecomposition dec;
    dec.m = j.at("m").get<unsigned>();
    dec.N = j.at("N").get<unsigned>();
    dec.parts.assign(dec.m + 1, Polynomial(dec.N));
    for (const auto& item : j.at("parts")) {
        unsigned p = item.at("p").get<unsigned>();
        if (p > dec.m) throw std::invalid_argument("kuran_from_json: part index exceeds degree");
        dec.parts[p] = parse_polynomial(item.at("u_p").get<std::string>(), dec.N);
    }
    return dec;
}

// ---- primitives ------------------------------------------------------------

HomogeneousHarmonic primitive(const HomogeneousHarmonic& H, unsigned k) {
    if (k == 0) return H;
    KuranDecomposition dec = kuran_decompose(H);
    unsigned m = dec.m, N = dec.N;
    Polynomial acc(N);
    for (unsigned p = 0; p <= m; ++p) {
        if (dec.parts[p].is_zero()) continue;
        Rational w = rat(Int(1), factorial_gap(m - p, m - p + k));  // (m-p)!/(m-p+k)!
        acc += w * (dec.parts[p] * restrict_axial(m - p + k, N, p));
    }
    return HomogeneousHarmonic(m + k, acc);
}

Rational primitive_bound_constant(unsigned k, unsigned m, unsigned N) {
    if (N < 2) throw std::invalid_argument("primitive_bound_constant: N must be >= 2");
    if (k == 0) return Rational(1);  // P_0 is the identity
    // 1 / ( (N+2m-2+1)...(N+2m+k-3) * k! * (N+2m+2k-2) )
    Int gap = factorial_gap(N + 2 * m - 2, N + 2 * m + k - 3);
    Int den = gap * factorial(k) * Int(N + 2 * m + 2 * k - 2);
    return rat(Int(1), den);
}

// ---- growth constant -------------------------------------------------------

namespace {

// Univariate polynomial helpers over Polynomial(1).
Polynomial uni_const(const Rational& c) { return Polynomial::constant(1, c); }

Polynomial uni_linear(const Rational& a, const Rational& b) {  // a*x + b
    Polynomial p(1);
    Monomial x = Monomial::unit(1);
    x.e[0] = 1;
    p.add_term(x, a);
    p.add_term(Monomial::unit(1), b);
    return p;
}

Rational uni_eval(const Polynomial& p, const Rational& x) { return evaluate(p, {x}); }

// All real roots of p lie in [-B, B] for either bound below.  Cauchy:
// B = 1 + max |c_i / c_deg|.  Fujiwara: B = 2 max_k |c_{deg-k} / c_deg|^(1/k).
// Difference polynomials of ratio sequences lose most of their leading
// coefficient to cancellation, which inflates Cauchy by orders of magnitude
// while the k-th roots keep Fujiwara small, so the window takes the minimum.
Int cauchy_root_bound(const Polynomial& p) {
    unsigned deg = *p.degree();
    Rational lead;
    for (const auto& [mm, c] : p.terms()) {
        if (mm.degree() == deg) lead = c;
    }
    Rational maxratio(0);
    for (const auto& [mm, c] : p.terms()) {
        if (mm.degree() == deg) continue;
        Rational r = abs(c / lead);
        if (r > maxratio) maxratio = r;
    }
    Rational bound = 1 + maxratio;
    Int k;
    mpz_cdiv_q(k.get_mpz_t(), bound.get_num().get_mpz_t(), bound.get_den().get_mpz_t());
    return k;
}

Int fujiwara_root_bound(const Polynomial& p) {
    unsigned deg = *p.degree();
    Rational lead;
    for (const auto& [mm, c] : p.terms()) {
        if (mm.degree() == deg) lead = c;
    }
    Int best(0);
    for (const auto& [mm, c] : p.terms()) {
        unsigned k = deg - mm.degree();
        if (k == 0) continue;
        Rational r = abs(c / lead);
        Int up;  // ceil(|c_{deg-k}/c_deg|), then ceil of its k-th root
        mpz_cdiv_q(up.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
        if (up <= 0) continue;
        Int root;
        int exact = mpz_root(root.get_mpz_t(), up.get_mpz_t(), k);
        if (!exact) root += 1;
        if (root > best) best = root;
    }
    Int bound = 2 * best;
    return bound;
}

unsigned long root_window(const Polynomial& p) {
    if (p.is_zero() || *p.degree() == 0) return 0;
    Int b = std::min(cauchy_root_bound(p), fujiwara_root_bound(p));
    if (!b.fits_ulong_p()) throw std::domain_error("growth_constant: certificate bound overflows");
    return b.get_ui();
}

// A_k = c_{k,m,N} ((k+m)!)^2 (k+m+1)^(N-2), exactly, any k >= 0.
Rational ratio_seq(unsigned long k, unsigned m, unsigned N) {
    Rational c = primitive_bound_constant(static_cast<unsigned>(k), m, N);
    Int f = factorial(k + m);
    Rational a = c * Rational(f) * Rational(f);
    Int pw;
    mpz_ui_pow_ui(pw.get_mpz_t(), k + m + 1, N - 2);
    return a * Rational(pw);
}

// num/den of A(k) as polynomials in k, valid for k >= 1.
void ratio_polys(unsigned m, unsigned N, long shift, Polynomial& num, Polynomial& den) {
    long j = static_cast<long>(N) + 2L * m - 3;
    num = uni_const(Rational(factorial(N + 2 * m - 2)));
    for (long i = 1; i <= static_cast<long>(m); ++i) {
        num = num * uni_linear(1, rat(i + shift));
    }
    if (j < static_cast<long>(m)) {
        for (long i = j + 1; i <= static_cast<long>(m); ++i) num = num * uni_linear(1, rat(i + shift));
    }
    for (unsigned t = 0; t + 2 < N; ++t) num = num * uni_linear(1, rat(static_cast<long>(m) + 1 + shift));
    den = uni_linear(2, rat(static_cast<long>(N) + 2L * m - 2 + 2 * shift));
    if (j > static_cast<long>(m)) {
        for (long i = static_cast<long>(m) + 1; i <= j; ++i) den = den * uni_linear(1, rat(i + shift));
    }
}

}  // namespace

GrowthConstant growth_constant(unsigned m, unsigned N, unsigned long k_max) {
    if (N < 2) throw std::invalid_argument("growth_constant: N must be >= 2");
    if (k_max < 1) throw std::invalid_argument("growth_constant: k_max must be >= 1");

    Polynomial num, den, num1, den1;
    ratio_polys(m, N, 0, num, den);
    ratio_polys(m, N, 1, num1, den1);  // evaluated at k+1

    // A(k+1) - A(k) has the sign of num1*den - num*den1 (denominators > 0 on k >= 1).
    Polynomial d_r = num1 * den - num * den1;
    unsigned long kstar = std::max<unsigned long>(1, root_window(d_r));

    if (k_max < kstar + 1) {
        throw std::domain_error("growth_constant: monotonicity certificate needs k_max >= " +
                                std::to_string(kstar + 1) + " for (m=" + std::to_string(m) +
                                ", N=" + std::to_string(N) + "); raise k_max");
    }

    // Exact window scan, then the limit L = (N+2m-2)!/2 controls the tail:
    // beyond K* the sequence is monotone with limit L, so its sup over the
    // tail is max(A_{K*+1}, L) and both are included below.  The scan uses
    // the rational-function form (cheap fixed-size arithmetic; the factorial
    // form would drag ((k+m)!)^2 through every step), cross-validated
    // against the factorial definition at the head of the window.
    auto a_poly = [&](unsigned long k) -> Rational {
        const Rational x = rat(static_cast<long>(k));
        return uni_eval(num, x) / uni_eval(den, x);
    };
    Rational best = ratio_seq(0, m, N);
    for (unsigned long k = 1; k <= 3 && k <= kstar + 1; ++k) {
        if (a_poly(k) != ratio_seq(k, m, N))
            throw std::logic_error("growth_constant: ratio polynomials disagree with values");
    }
    for (unsigned long k = 1; k <= kstar + 1; ++k) {
        Rational a = a_poly(k);
        if (a > best) best = a;
    }
    Rational limit = rat(factorial(N + 2 * m - 2), Int(2));
    bool tail_increasing = uni_eval(d_r, rat(static_cast<long>(kstar + 2))) > 0;
    if (limit > best) best = limit;

    // Consistency: the certified tail direction must match the direct values.
    Rational a_hi = a_poly(kstar + 5);
    Rational a_lo = a_poly(kstar + 1);
    if (tail_increasing ? (a_hi < a_lo) : (a_hi > a_lo)) {
        throw std::logic_error("growth_constant: certificate direction contradicts values");
    }

    GrowthConstant g;
    g.m = m;
    g.N = N;
    g.c_squared = best;
    g.window_end = kstar + 1;
    g.tail_increasing = tail_increasing;
    BigFloat up = bf_sqrt(BigFloat::from_rational(best, MPFR_RNDU), MPFR_RNDU);
    g.c_upper = up.to_rational();
    if (g.c_upper * g.c_upper < g.c_squared) {
        throw std::logic_error("growth_constant: upper bound rounding failed");
    }
    return g;
}

std::vector<GrowthConstant> growth_constants_upto(unsigned m_max, unsigned N, unsigned long k_max) {
    std::vector<GrowthConstant> out;
    out.reserve(m_max + 1);
    for (unsigned m = 0; m <= m_max; ++m) {
        GrowthConstant g = growth_constant(m, N, k_max);
        if (!out.empty() && out.back().c_squared > g.c_squared) {
            // cumulative max: m -> c_m must be nondecreasing
            g.c_squared = out.back().c_squared;
            g.c_upper = out.back().c_upper;
        }
        out.push_back(std::move(g));
    }
    return out;
}

// ---- decomposed polynomials and the block-norm calculus ---------------------

DecomposedPoly decompose_poly(const Polynomial& F) {
    DecomposedPoly d;
    d.N = F.nvars();
    d.F = F;
    d.m = F.is_zero() ? 0 : *F.degree();
    d.norm2 = m2_mean_squared(F, Rational(1));
    for (const HomogeneousHarmonic& comp : homogeneous_components(F)) {
        KuranDecomposition dec = kuran_decompose(comp);
        DecomposedComponent c;
        c.j = comp.degree;
        c.part_norm2.reserve(dec.parts.size());
        for (const Polynomial& u : dec.parts) {
            c.part_norm2.push_back(u.is_zero() ? Rational(0) : m2_mean_squared(u, Rational(1)));
        }
        d.components.push_back(std::move(c));
    }
    return d;
}

Rational block_norm_squared(const PrimitiveTerm& t, const Rational& r) {
    if (t.base == nullptr) throw std::invalid_argument("block_norm_squared: missing base");
    if (r <= 0) throw std::invalid_argument("block_norm_squared: radius must be positive");
    const DecomposedPoly& b = *t.base;
    Rational acc(0);
    for (const DecomposedComponent& comp : b.components) {
        Rational rpow = pow_rational(r, 2 * (static_cast<long>(t.n) + comp.j));
        for (unsigned p = 0; p <= comp.j; ++p) {
            if (comp.part_norm2[p] == 0) continue;
            Int gap = factorial_gap(comp.j - p, comp.j - p + t.n);  // (j-p+n)!/(j-p)!
            Int d = dim_harmonic(comp.j - p + t.n, b.N + 2 * p);
            acc += comp.part_norm2[p] * rpow / Rational(gap * gap * d);
        }
    }
    return acc;
}

BigFloat block_norm_squared_f(const PrimitiveTerm& t, const BigFloat& r) {
    if (t.base == nullptr) throw std::invalid_argument("block_norm_squared_f: missing base");
    const DecomposedPoly& b = *t.base;
    BigFloat acc;
    BigFloat lr = bf_log(r);
    for (const DecomposedComponent& comp : b.components) {
        for (unsigned p = 0; p <= comp.j; ++p) {
            if (comp.part_norm2[p] == 0) continue;
            unsigned long a = comp.j - p, bb = comp.j - p + t.n;
            BigFloat lgap = bf_lnfac(bb) - bf_lnfac(a);
            BigFloat ln_term = BigFloat(2L * static_cast<long>(t.n + comp.j)) * lr - BigFloat(2) * lgap;
            BigFloat term = bf_exp(ln_term);
            term *= BigFloat::from_rational(comp.part_norm2[p]);
            term /= BigFloat::from_int(dim_harmonic(bb, b.N + 2 * p));
            acc += term;
        }
    }
    return acc;
}

// ---- canonical basis --------------------------------------------------------

namespace {

Polynomial lift_one(const Polynomial& u, unsigned newN) {
    Polynomial out(newN);
    for (const auto& [mm, c] : u.terms()) {
        Monomial shifted = Monomial::unit(newN);
        for (std::size_t i = 0; i < mm.e.size(); ++i) shifted.e[i + 1] = mm.e[i];
        out.add_term(shifted, c);
    }
    return out;
}

}  // namespace

std::vector<HomogeneousHarmonic> harmonic_basis(unsigned m, unsigned N) {
    if (N == 0) throw std::invalid_argument("harmonic_basis: N must be >= 1");
    std::vector<HomogeneousHarmonic> out;
    if (N == 1) {
        if (m <= 1) {
            Polynomial p(1);
            Monomial mm = Monomial::unit(1);
            mm.e[0] = m;
            p.add_term(mm, Rational(1));
            out.emplace_back(m, std::move(p), HomogeneousHarmonic::unchecked_t{});
        }
        return out;
    }
    for (unsigned p = 0; p <= m; ++p) {
        std::vector<HomogeneousHarmonic> lower = harmonic_basis(p, N - 1);
        if (lower.empty()) continue;
        Polynomial star = restrict_axial(m - p, N, p);
        for (const HomogeneousHarmonic& u : lower) {
            Polynomial prod = lift_one(u.poly, N) * star;
            out.emplace_back(m, std::move(prod));  // validated: homogeneous + harmonic
        }
    }
    if (Int(static_cast<unsigned long>(out.size())) != dim_harmonic(m, N)) {
        throw std::logic_error("harmonic_basis: size disagrees with dim_harmonic");
    }
    return out;
}

}  // namespace fhharm
