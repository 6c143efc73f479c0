/*
 * verify.cpp -- quantitative verification suite.
 *
 * Conventions for certified quantities: every bound produced here is the
 * result of directed rounding (MPFR RNDU for upper bounds, RNDD for the
 * quantities they are compared against), or exact rational arithmetic.
 * Round-to-nearest appears only in display values (ratios, tables) whose
 * correctness is separately cross-checked against exact evaluation.
 */
#include "fhharm/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <string>

#include <json.hpp>

#include "fhharm/parallel.hpp"

namespace fhharm {

namespace {

// Upper bracket of e^2: 7389056098930650.22... / 10^15 lies strictly between
// the two integer-over-10^15 neighbors used here and in the tests.
const char* kESquaredUpper = "7389056098930651/1000000000000000";

BigFloat bf_from_int_exact(const Int& n) {
    if (mpz_sizeinbase(n.get_mpz_t(), 2) > 255)
        throw std::domain_error("integer exceeds one BigFloat limb budget");
    return BigFloat::from_int(n);
}

// log(v!), directed, for counts beyond unsigned long.
BigFloat lnfac_int(const Int& v, mpfr_rnd_t rnd) {
    BigFloat x = bf_from_int_exact(v + 1);
    BigFloat r;
    mpfr_lngamma(r.raw(), x.raw(), rnd);
    return r;
}

// log of a positive integer, directed (pre-rounding the integer keeps the
// bound one-sided even when it exceeds the mantissa).
BigFloat ln_int_dir(const Int& n, mpfr_rnd_t rnd) {
    BigFloat x;
    mpfr_set_z(x.raw(), n.get_mpz_t(), rnd);
    return bf_log(x, rnd);
}

BigFloat one_minus_dn(const BigFloat& a) {
    BigFloat r;
    mpfr_ui_sub(r.raw(), 1, a.raw(), MPFR_RNDD);
    return r;
}

}  // namespace

/* ------------------------------------------------------------------ */
/* Lower density                                                       */
/* ------------------------------------------------------------------ */

DensityReport lower_density(unsigned long k, const EllSequence& ell, unsigned long T,
                            const Scale& scale) {
    if (T == 0) throw std::invalid_argument("lower_density: horizon T must be >= 1");
    DensityReport rep;
    rep.k = k;
    rep.ell_k = ell.at(k);
    rep.T = T;
    rep.relaxed = scale.relaxed;
    const unsigned long lk = rep.ell_k;
    const Int step = Int(lk) << k;
    const Int thr(scale.threshold(lk));
    const Int limit(T);
    Int count(0);
    // Orders of block n = (2u-1) lk 2^k are n^2 + j lk for 1 <= j <= n/lk,
    // so the count below T is min(floor((T - n^2)/lk), n/lk) per block.
    for (Int u = 1;; u += 2) {
        const Int n = u * step;
        if (n * n + lk > limit) break;
        if (n < thr) continue;
        const Int avail = (limit - n * n) / lk;
        const Int J = n / lk;
        count += (avail < J ? avail : J);
    }
    rep.count = count;
    rep.ratio = rat(count, limit);
    rep.target = rat(Int(1), (Int(lk) * Int(lk)) << (k + 2));
    return rep;
}

/* ------------------------------------------------------------------ */
/* Certified tail majorant                                             */
/* ------------------------------------------------------------------ */

// For every order v >= v0 of a family-k block with index >= n0, the piece of
// M2^2(P_v(F_k), r) contributed by the Kuran part u_{j,p} is
//
//     M2^2(u_{j,p},1) ((j-p)!)^2 r^(2p) * r^(2w) / (w!^2 d_{w,N+2p}),
//
// with w = v + j - p >= v.  d is nondecreasing in both degree and dimension,
// so d_{w,N+2p} >= d_{v0,N}, and with tau(w) = r^(2w)/w!^2 the whole family
// tail is at most  K_k / d_{v0,N} * sum_{w >= v0} tau(w), where
// K_k = sum_{j,p} M2^2(u_{j,p},1) ((j-p)!)^2 r^(2p).  Once v0 >= 2r the
// term ratio tau(w+1)/tau(w) = r^2/(w+1)^2 is <= 1/4, closing the sum by a
// geometric factor 4/3.  Orders are distinct integers within a family, so
// overcounting every integer w >= v0 only loosens the bound.
BigFloat tail_majorant_squared(const DensePlan& plan, const EllSequence& ell,
                               unsigned long n0, unsigned long s, const Rational& r,
                               const Scale& scale) {
    if (r <= 0) throw std::invalid_argument("tail_majorant_squared: r must be positive");
    const BigFloat lnr_up = bf_log(BigFloat::from_rational(r, MPFR_RNDU), MPFR_RNDU);
    const BigFloat four_thirds = bf_div(BigFloat(4), BigFloat(3), MPFR_RNDU);
    BigFloat total;
    for (unsigned long k = 1; k <= ell.k_max(); ++k) {
        const unsigned long lk = ell.at(k);
        const Int step = Int(lk) << k;
        const Int lo(std::max<unsigned long>(n0, scale.threshold(lk)));
        Int u;
        mpz_cdiv_q(u.get_mpz_t(), lo.get_mpz_t(), step.get_mpz_t());
        if (u < 1) u = 1;
        if (mpz_even_p(u.get_mpz_t())) u += 1;
        const Int n1 = u * step;  // first retained block index of family k
        if (Int(s) >= n1 * n1)
            throw std::invalid_argument("tail_majorant_squared: derivative order reaches into the tail");
        const Int v0 = n1 * n1 + lk - s;  // smallest derived order in the family tail
        if (Rational(v0) < Rational(2) * r)
            throw std::domain_error(
                "tail_majorant_squared: first tail order below 2r, geometric closure unavailable; "
                "raise n0 or shrink r");
        const PlanEntryView e = plan.entry(k);
        Rational K(0);
        for (const DecomposedComponent& comp : e.F->components) {
            for (unsigned p = 0; p <= comp.j; ++p) {
                const Rational& w2 = comp.part_norm2[p];
                if (w2 == 0) continue;
                K += w2 * Rational(square(Rational(factorial(comp.j - p)))) *
                     pow_rational(r, 2 * static_cast<long>(p));
            }
        }
        if (K == 0) continue;
        // tau(v0)/d = exp(2 v0 ln r - 2 ln v0! - ln d_{v0,N}), rounded up
        BigFloat ln_t = bf_mul(bf_from_int_exact(Int(2) * v0), lnr_up, MPFR_RNDU);
        const BigFloat lf = lnfac_int(v0, MPFR_RNDD);
        ln_t = bf_sub(ln_t, lf, MPFR_RNDU);
        ln_t = bf_sub(ln_t, lf, MPFR_RNDU);
        // d_{v0,N} when v0 is machine-sized; d >= 1 always, so dropping the
        // factor for astronomically large v0 stays an upper bound.
        if (mpz_fits_ulong_p(v0.get_mpz_t())) {
            const Int d = dim_harmonic(mpz_get_ui(v0.get_mpz_t()), plan.N);
            if (d > 1) ln_t = bf_sub(ln_t, ln_int_dir(d, MPFR_RNDD), MPFR_RNDU);
        }
        BigFloat term = bf_mul(BigFloat::from_rational(K, MPFR_RNDU), bf_exp(ln_t, MPFR_RNDU), MPFR_RNDU);
        term = bf_mul(term, four_thirds, MPFR_RNDU);
        total = bf_add(total, term, MPFR_RNDU);
    }
    return total;
}

NormValue tail_bound(const DensePlan& plan, const EllSequence& ell, unsigned long n0,
                     const Rational& r, const Scale& scale) {
    return NormValue::approximate(
        bf_sqrt(tail_majorant_squared(plan, ell, n0, 0, r, scale), MPFR_RNDU), 0.0, false);
}

/* ------------------------------------------------------------------ */
/* Residual                                                            */
/* ------------------------------------------------------------------ */

ResidualReport fhc_residual(const DensePlan& plan, const EllSequence& ell,
                            unsigned long k, unsigned long n, unsigned long s,
                            const Rational& r, unsigned long n_max, const Scale& scale) {
    if (r <= 0) throw std::invalid_argument("fhc_residual: r must be positive");
    ResidualReport rep;
    rep.k = k;
    rep.n = n;
    rep.s = s;
    rep.r = r;
    rep.n_max = n_max;
    rep.relaxed = scale.relaxed;
    rep.ell_k = ell.at(k);
    const unsigned long lk = rep.ell_k;

    const BlockQ q0 = block_Q(n, plan, ell, scale);
    if (q0.zero() || q0.k != k)
        throw std::invalid_argument("fhc_residual: n is not an admissible block index of family k");
    const unsigned long J = n / lk;
    if (s < n * n + lk || s > n * n + J * lk || (s - n * n) % lk != 0)
        throw std::invalid_argument("fhc_residual: s is not an admitted derivative order of block n");
    const unsigned long t = (s - n * n) / lk;
    if (n_max < n + 2)
        throw std::invalid_argument("fhc_residual: n_max must include at least one block above n");

    // (e r)^2 <= l_k, certified through the upper rational bracket of e^2.
    rep.er2_certified = (r * r * rat_from_string(kESquaredUpper) <= Rational(static_cast<long>(lk)));
    if (!scale.relaxed && !rep.er2_certified)
        throw std::domain_error(
            "fhc_residual: cannot certify (e r)^2 <= l_k at this radius; the residual bound "
            "requires it");

    // F part: d^s Q_n - F_k = sum_{i=1}^{J-t} P_{i l_k}(F_k); orders i l_k are
    // spaced by more than deg F_k, so the squared means add exactly.
    const PlanEntryView ek = plan.entry(k);
    Rational f2(0);
    for (unsigned long i = 1; i + t <= J; ++i)
        f2 += block_norm_squared(PrimitiveTerm{i * lk, ek.F}, r);
    rep.f_part2 = f2;

    // G part: every block strictly above n survives differentiation with all
    // orders shifted by -s; blocks at or below n other than Q_n die (their
    // top degree is below s).  Assembling the truncation revalidates the
    // pairwise disjointness that makes the sum exact.
    const TruncatedH h = assemble_truncated(plan, ell, n_max, scale);
    Rational g2(0);
    for (const BlockQ& q : h.blocks) {
        if (q.n <= n) continue;
        for (unsigned long o : q.orders)
            g2 += block_norm_squared(PrimitiveTerm{o - s, q.base}, r);
    }
    rep.g_part2_truncated = g2;
    rep.g_tail2 = tail_majorant_squared(plan, ell, n_max + 1, s, r, scale);

    const BigFloat total_up =
        bf_add(BigFloat::from_rational(f2 + g2, MPFR_RNDU), rep.g_tail2, MPFR_RNDU);
    rep.residual = NormValue::approximate(bf_sqrt(total_up, MPFR_RNDU), 0.0, false);

    Int lpow;
    mpz_ui_pow_ui(lpow.get_mpz_t(), lk, plan.N - 1);
    rep.part_bound2 = rat(Int(1), Int(2) * lpow);
    rep.total_bound2 = rat(Int(1), Int(lk) * Int(lk));
    rep.f_ok = f2 <= rep.part_bound2;
    rep.g_ok = g2 <= rep.part_bound2 &&
               rep.g_tail2 <= BigFloat::from_rational(rep.part_bound2 - g2, MPFR_RNDD);
    rep.total_ok = f2 + g2 <= rep.total_bound2 &&
                   rep.g_tail2 <= BigFloat::from_rational(rep.total_bound2 - f2 - g2, MPFR_RNDD);
    return rep;
}

/* ------------------------------------------------------------------ */
/* Growth profile                                                      */
/* ------------------------------------------------------------------ */

GrowthTable growth_profile(const TruncatedH& h, const std::vector<Rational>& r_grid,
                           const Rational& C, unsigned exact_checks) {
    if (h.plan == nullptr || h.ell == nullptr)
        throw std::invalid_argument("growth_profile: truncation is not backed by a plan");
    if (r_grid.empty()) throw std::invalid_argument("growth_profile: empty radius grid");
    for (const Rational& r : r_grid)
        if (r <= 0) throw std::invalid_argument("growth_profile: radii must be positive");
    if (C <= 0) throw std::invalid_argument("growth_profile: C must be positive");

    GrowthTable table;
    table.N = h.plan->N;
    table.C = C;
    table.n_max = h.n_max;
    table.relaxed = h.scale.relaxed;
    table.rows.resize(r_grid.size());

    const Rational expo = rat(2 * static_cast<long>(table.N) - 3, 4);  // N/2 - 3/4
    const BigFloat C_dn = BigFloat::from_rational(C, MPFR_RNDD);
    const BigFloat tail_cap = bf_pow_si(BigFloat(2), -kGrowthTailBits);
    std::vector<BigFloat> m2sq(r_grid.size());
    std::vector<std::string> errors(r_grid.size());

    parallel_for(r_grid.size(), [&](std::size_t i) {
        try {
            const Rational& r = r_grid[i];
            GrowthRow row;
            row.r = r;
            m2sq[i] = h.norm2_f(BigFloat::from_rational(r));
            row.m2 = bf_sqrt(m2sq[i]);
            row.tail = bf_sqrt(tail_majorant_squared(*h.plan, *h.ell, h.n_max + 1, 0, r, h.scale),
                               MPFR_RNDU);
            const BigFloat er = bf_exp(BigFloat::from_rational(r, MPFR_RNDD), MPFR_RNDD);
            const BigFloat rpow =
                bf_pow_rational_exp(BigFloat::from_rational(r, MPFR_RNDU), expo, MPFR_RNDU);
            row.bound = bf_div(bf_mul(C_dn, er, MPFR_RNDD), rpow, MPFR_RNDD);
            if (!(row.tail <= bf_mul(tail_cap, row.bound, MPFR_RNDD))) {
                errors[i] = "growth_profile: tail policy unsatisfied at r = " + rat_to_string(r) +
                            "; increase n_max";
                return;
            }
            row.ratio = (row.m2 + row.tail) / row.bound;
            table.rows[i] = std::move(row);
        } catch (const std::exception& ex) {
            errors[i] = ex.what();
        }
    });
    for (const std::string& e : errors)
        if (!e.empty()) throw std::domain_error(e);

    // Exact spot checks at radii spread across the grid: the float mean must
    // match the exact rational mean, and the envelope comparison must close
    // with one-sided rounding.
    const std::size_t checks = std::min<std::size_t>(exact_checks, r_grid.size());
    table.exact_agree = true;
    const BigFloat rel_tol(kGrowthExactRelTol);
    for (std::size_t c = 0; c < checks; ++c) {
        const std::size_t i =
            (checks <= 1) ? 0 : (c * (r_grid.size() - 1)) / (checks - 1);
        GrowthRow& row = table.rows[i];
        if (row.exact_checked) continue;
        row.exact_checked = true;
        const Rational exact = h.norm2(row.r);
        const BigFloat exact_f = BigFloat::from_rational(exact);
        const bool agree = (exact == 0)
                               ? m2sq[i].is_zero()
                               : bf_abs(m2sq[i] - exact_f) <= rel_tol * exact_f;
        if (!agree) table.exact_agree = false;
        const BigFloat lhs = bf_add(
            bf_sqrt(BigFloat::from_rational(exact, MPFR_RNDU), MPFR_RNDU), row.tail, MPFR_RNDU);
        row.certified = lhs <= row.bound;
    }

    bool within = true;
    const BigFloat one(1);
    for (const GrowthRow& row : table.rows) {
        if (row.ratio > one) within = false;
        if (row.exact_checked && !row.certified) within = false;
    }
    table.all_within_bound = within;
    return table;
}

/* ------------------------------------------------------------------ */
/* Growth lemma                                                        */
/* ------------------------------------------------------------------ */

GrowthLemmaReport growth_lemma_check(unsigned N, unsigned long ell, unsigned long u,
                                     const std::vector<Rational>& r_grid,
                                     unsigned long max_terms) {
    if (N < 2) throw std::invalid_argument("growth_lemma_check: N >= 2 required");
    if (ell == 0 || u >= ell)
        throw std::invalid_argument("growth_lemma_check: need ell >= 1 and 0 <= u < ell");
    if (r_grid.empty()) throw std::invalid_argument("growth_lemma_check: empty radius grid");
    for (const Rational& r : r_grid)
        if (r <= 0) throw std::invalid_argument("growth_lemma_check: radii must be positive");

    GrowthLemmaReport rep;
    rep.N = N;
    rep.ell = ell;
    rep.u = u;
    rep.points.resize(r_grid.size());
    std::vector<std::string> errors(r_grid.size());
    const BigFloat eps = bf_pow_si(BigFloat(2), -80);
    const BigFloat half(0.5);

    parallel_for(r_grid.size(), [&](std::size_t idx) {
        try {
            const Rational& r = r_grid[idx];
            const BigFloat lnr_up = bf_log(BigFloat::from_rational(r, MPFR_RNDU), MPFR_RNDU);
            BigFloat S;
            bool done = false;
            // v = ell*k + u for k = ell, ell+1, ...; every term rounded up.
            unsigned long v = ell * ell + u;
            for (unsigned long iter = 0; iter < max_terms; ++iter, v += ell) {
                BigFloat ln_t = bf_mul(BigFloat(2 * v), lnr_up, MPFR_RNDU);
                const BigFloat lf = bf_lnfac(v, MPFR_RNDD);
                ln_t = bf_sub(ln_t, lf, MPFR_RNDU);
                ln_t = bf_sub(ln_t, lf, MPFR_RNDU);
                if (N > 2) {
                    const BigFloat lnv1 =
                        bf_mul(BigFloat(N - 2), ln_int_dir(Int(v) + 1, MPFR_RNDD), MPFR_RNDD);
                    ln_t = bf_sub(ln_t, lnv1, MPFR_RNDU);
                }
                const BigFloat t = bf_exp(ln_t, MPFR_RNDU);
                S = bf_add(S, t, MPFR_RNDU);
                if (!(t <= bf_mul(eps, S, MPFR_RNDN))) continue;
                // Tail certificate: the step ratio t(v+ell)/t(v) is at most
                // A = r^(2 ell) / prod_{i=1..ell} (v+i)^2 (the (v+1)^(N-2)
                // factor only shrinks it), and A decreases with v; once
                // A < 1/2 the remainder is below t*A/(1-A).
                BigFloat lnA = bf_mul(BigFloat(2 * ell), lnr_up, MPFR_RNDU);
                for (unsigned long i2 = 1; i2 <= ell; ++i2) {
                    const BigFloat li = ln_int_dir(Int(v) + Int(i2), MPFR_RNDD);
                    lnA = bf_sub(lnA, li, MPFR_RNDU);
                    lnA = bf_sub(lnA, li, MPFR_RNDU);
                }
                const BigFloat A = bf_exp(lnA, MPFR_RNDU);
                if (!(A < half)) continue;
                S = bf_add(S, bf_div(bf_mul(t, A, MPFR_RNDU), one_minus_dn(A), MPFR_RNDU),
                           MPFR_RNDU);
                done = true;
                break;
            }
            if (!done) {
                errors[idx] = "growth_lemma_check: truncation not certified within " +
                              std::to_string(max_terms) + " terms at r = " + rat_to_string(r);
                return;
            }
            BigFloat num = bf_mul(S, BigFloat(ell), MPFR_RNDU);
            num = bf_mul(num,
                         bf_pow_rational_exp(BigFloat::from_rational(r, MPFR_RNDU),
                                             rat(2 * static_cast<long>(N) - 3, 2), MPFR_RNDU),
                         MPFR_RNDU);
            const BigFloat den = bf_exp(
                bf_mul(BigFloat(2), BigFloat::from_rational(r, MPFR_RNDD), MPFR_RNDD), MPFR_RNDD);
            rep.points[idx] = GrowthLemmaPoint{r, S, bf_div(num, den, MPFR_RNDU)};
        } catch (const std::exception& ex) {
            errors[idx] = ex.what();
        }
    });
    for (const std::string& e : errors)
        if (!e.empty()) throw std::domain_error(e);

    rep.max_normalized = rep.points.front().normalized;
    for (const GrowthLemmaPoint& p : rep.points) rep.max_normalized = bf_max(rep.max_normalized, p.normalized);
    return rep;
}

CPrimeCertificate certify_c_prime(const std::vector<unsigned>& Ns, unsigned long ell_max,
                                  unsigned r_points, unsigned long max_terms) {
    if (Ns.empty() || ell_max == 0 || r_points < 2)
        throw std::invalid_argument("certify_c_prime: degenerate grid");
    const Rational r_lo = rat(2), r_hi = rat(200);
    auto sweep = [&](unsigned points) {
        const std::vector<Rational> grid = log_spaced_grid(r_lo, r_hi, points);
        BigFloat best(-1);
        for (unsigned N : Ns) {
            for (unsigned long ell = 1; ell <= ell_max; ++ell) {
                const unsigned long us[2] = {0, ell - 1};
                const std::size_t ucount = (ell == 1) ? 1 : 2;
                for (std::size_t iu = 0; iu < ucount; ++iu) {
                    const GrowthLemmaReport rep =
                        growth_lemma_check(N, ell, us[iu], grid, max_terms);
                    best = bf_max(best, rep.max_normalized);
                }
            }
        }
        return best;
    };
    CPrimeCertificate cert;
    cert.max_normalized = sweep(r_points);
    cert.refined_max = sweep(2 * r_points);
    const BigFloat hi = bf_max(cert.max_normalized, cert.refined_max);
    const BigFloat lo =
        (cert.max_normalized < cert.refined_max) ? cert.max_normalized : cert.refined_max;
    cert.stable = hi < BigFloat(2) * lo;
    cert.c_prime = bf_mul(BigFloat(2), hi, MPFR_RNDU).to_rational();
    std::string ns = "{";
    for (std::size_t i = 0; i < Ns.size(); ++i)
        ns += (i ? "," : "") + std::to_string(Ns[i]);
    ns += "}";
    cert.provenance = "growth-lemma sweep: N in " + ns + "; ell = 1.." + std::to_string(ell_max) +
                      "; u in {0, ell-1}; r log-spaced dyadic [2,200] x" + std::to_string(r_points) +
                      " (refined x" + std::to_string(2 * r_points) + "); safety factor 2";
    return cert;
}

HelpSeriesReport help_series_check(const Rational& r, unsigned long max_terms) {
    if (r <= 0) throw std::invalid_argument("help_series_check: r > 0 required");
    HelpSeriesReport rep;
    rep.r = r;
    const BigFloat r_up = BigFloat::from_rational(r, MPFR_RNDU);
    const BigFloat r2_up = bf_mul(r_up, r_up, MPFR_RNDU);
    const BigFloat eps = bf_pow_si(BigFloat(2), -80);
    const BigFloat half(0.5);
    BigFloat t(1);  // term at n = 0
    BigFloat S = t;
    rep.argmax = 0;
    rep.max_term = t;
    bool done = false;
    for (unsigned long n = 1; n <= max_terms; ++n) {
        t = bf_mul(t, r2_up, MPFR_RNDU);
        t = bf_div(t, bf_mul(BigFloat(n), BigFloat(n), MPFR_RNDN), MPFR_RNDU);
        S = bf_add(S, t, MPFR_RNDU);
        if (t > rep.max_term) {
            rep.max_term = t;
            rep.argmax = n;
        }
        const BigFloat ratio =
            bf_div(r2_up, bf_mul(BigFloat(n + 1), BigFloat(n + 1), MPFR_RNDN), MPFR_RNDU);
        if (ratio < half && t <= bf_mul(eps, S, MPFR_RNDN)) {
            S = bf_add(S, bf_div(bf_mul(t, ratio, MPFR_RNDU), one_minus_dn(ratio), MPFR_RNDU),
                       MPFR_RNDU);
            done = true;
            break;
        }
    }
    if (!done)
        throw std::domain_error("help_series_check: truncation not certified within max_terms");
    rep.S = S;
    const BigFloat e2r_dn = bf_exp(
        bf_mul(BigFloat(2), BigFloat::from_rational(r, MPFR_RNDD), MPFR_RNDD), MPFR_RNDD);
    rep.normalized_sum = bf_div(
        bf_mul(S, bf_pow_rational_exp(r_up, rat(1, 2), MPFR_RNDU), MPFR_RNDU), e2r_dn, MPFR_RNDU);
    rep.normalized_max = bf_div(bf_mul(rep.max_term, r_up, MPFR_RNDU), e2r_dn, MPFR_RNDU);
    return rep;
}

/* ------------------------------------------------------------------ */
/* Skip lemma                                                          */
/* ------------------------------------------------------------------ */

SkipLemmaReport skip_lemma_check(const SkipSequence& seq, unsigned long ell, unsigned long u) {
    if (ell == 0 || u >= ell)
        throw std::invalid_argument("skip_lemma_check: need ell >= 1 and 0 <= u < ell");
    SkipLemmaReport rep;
    rep.ell = ell;
    rep.u = u;
    if (seq.kind == SkipSequence::Kind::GeometricDecreasing) {
        if (!(seq.x > 0) || !(seq.x < 1))
            throw std::invalid_argument("skip_lemma_check: geometric ratio must lie in (0,1)");
        const Rational xl = pow_rational(seq.x, static_cast<long>(ell));
        rep.lhs = pow_rational(seq.x, static_cast<long>(ell + u)) / (Rational(1) - xl);
        rep.rhs = Rational(1) / (Rational(static_cast<long>(ell)) * (Rational(1) - seq.x));
        rep.used_sup_term = false;
    } else {
        const std::vector<Rational>& a = seq.terms;
        if (a.empty()) throw std::invalid_argument("skip_lemma_check: empty sequence");
        if (seq.peak >= a.size())
            throw std::invalid_argument("skip_lemma_check: declared peak outside the sequence");
        for (const Rational& x : a)
            if (x < 0) throw std::invalid_argument("skip_lemma_check: terms must be nonnegative");
        for (std::size_t i = 0; i < seq.peak; ++i)
            if (a[i] > a[i + 1])
                throw std::invalid_argument("skip_lemma_check: sequence not unimodal as declared "
                                            "(decreases before the peak)");
        for (std::size_t i = seq.peak; i + 1 < a.size(); ++i)
            if (a[i] < a[i + 1])
                throw std::invalid_argument("skip_lemma_check: sequence not unimodal as declared "
                                            "(increases after the peak)");
        Rational lhs(0);
        for (unsigned long kk = 1; kk * ell + u < a.size(); ++kk) lhs += a[kk * ell + u];
        Rational total(0);
        for (const Rational& x : a) total += x;
        rep.lhs = lhs;
        rep.used_sup_term = seq.peak > 0;  // peak at 0 means plainly nonincreasing
        rep.rhs = total / Rational(static_cast<long>(ell));
        if (rep.used_sup_term) rep.rhs += Rational(2) * a[seq.peak];
    }
    rep.holds = rep.lhs <= rep.rhs;
    return rep;
}

/* ------------------------------------------------------------------ */
/* Log-concavity                                                       */
/* ------------------------------------------------------------------ */

ConcavityReport log_concavity_check(unsigned N, const Rational& r, unsigned long n_lo,
                                    unsigned long n_hi) {
    if (N < 2) throw std::invalid_argument("log_concavity_check: N >= 2 required");
    if (r <= 0) throw std::invalid_argument("log_concavity_check: r > 0 required");
    if (n_lo < 1 || n_hi < n_lo)
        throw std::invalid_argument("log_concavity_check: need 1 <= n_lo <= n_hi");
    ConcavityReport rep;
    rep.N = N;
    rep.n_lo = n_lo;
    rep.n_hi = n_hi;
    // The centered second difference of log(r^(2n)/(n!^2 (n+1)^(N-2))) is
    // -2 log((n+1)/n) - (N-2) log(n(n+2)/(n+1)^2): the r term cancels, so
    // concavity at n is the exact integer inequality
    //     (n+1)^2 (n(n+2))^(N-2)  >=  n^2 ((n+1)^2)^(N-2).
    std::optional<unsigned long> last_violation;
    for (unsigned long n = n_lo; n <= n_hi; ++n) {
        const Int a(n + 1);
        const Int a2 = a * a;
        const Int mid = Int(n) * Int(n + 2);
        Int mp, ap;
        mpz_pow_ui(mp.get_mpz_t(), mid.get_mpz_t(), N - 2);
        mpz_pow_ui(ap.get_mpz_t(), a2.get_mpz_t(), N - 2);
        if (a2 * mp < Int(n) * Int(n) * ap) last_violation = n;
    }
    if (!last_violation) rep.onset = n_lo;
    else if (*last_violation < n_hi) rep.onset = *last_violation + 1;
    else rep.onset = std::nullopt;  // no onset inside the range: reported, not thrown
    return rep;
}

/* ------------------------------------------------------------------ */
/* Poisson bound                                                       */
/* ------------------------------------------------------------------ */

PoissonMargin poisson_bound_check(const Polynomial& h, const Rational& r,
                                  unsigned long samples, const PoissonConstant& c,
                                  std::uint64_t seed) {
    if (r <= 0) throw std::invalid_argument("poisson_bound_check: r > 0 required");
    if (samples == 0) throw std::invalid_argument("poisson_bound_check: samples >= 1 required");
    if (!laplacian(h).is_zero())
        throw std::domain_error("poisson_bound_check: h must be harmonic");
    PoissonMargin pm;
    pm.r = r;
    // Lower-round the constant through its declared enclosure; the sampled
    // sup is itself a lower estimate, so a true inequality can only fail by
    // the constant's relative error.
    pm.c_N = bf_div(c.value.value(), BigFloat(1.0 + c.value.rel_error), MPFR_RNDD);
    pm.m2_2r = bf_sqrt(
        BigFloat::from_rational(m2_mean_squared(h, Rational(2) * r), MPFR_RNDD), MPFR_RNDD);
    pm.sup_r = sup_on_sphere(h, r, samples, seed);
    const BigFloat prod = bf_mul(pm.c_N, pm.m2_2r, MPFR_RNDD);
    pm.margin = prod - pm.sup_r.value();
    pm.slack = (c.value.rel_error + 1e-60) * std::abs(prod.to_double());
    pm.ok = pm.margin.to_double() >= -pm.slack;
    return pm;
}

PoissonMargin poisson_bound_check(const Polynomial& h, const Rational& r,
                                  unsigned long samples, std::uint64_t seed) {
    return poisson_bound_check(h, r, samples, poisson_constant(h.nvars()), seed);
}

/* ------------------------------------------------------------------ */
/* Grids and reports                                                   */
/* ------------------------------------------------------------------ */

std::vector<Rational> log_spaced_grid(const Rational& lo, const Rational& hi, unsigned points) {
    if (!(lo > 0) || !(hi >= lo))
        throw std::invalid_argument("log_spaced_grid: need 0 < lo <= hi");
    if (points == 0) throw std::invalid_argument("log_spaced_grid: need at least one point");
    std::vector<Rational> grid;
    grid.reserve(points);
    const BigFloat ln_lo = bf_log(BigFloat::from_rational(lo));
    const BigFloat ln_hi = bf_log(BigFloat::from_rational(hi));
    for (unsigned i = 0; i < points; ++i) {
        BigFloat x;
        if (points == 1) {
            x = BigFloat::from_rational(lo);
        } else {
            const BigFloat w = bf_div(BigFloat(i), BigFloat(points - 1), MPFR_RNDN);
            x = bf_exp(ln_lo + (ln_hi - ln_lo) * w);
        }
        // Snap to a positive multiple of 2^-12; MPFR keeps this deterministic.
        mpfr_mul_2si(x.raw(), x.raw(), 12, MPFR_RNDN);
        Int z;
        mpfr_get_z(z.get_mpz_t(), x.raw(), MPFR_RNDN);
        if (z <= 0) z = 1;
        grid.push_back(rat(z, Int(4096)));
    }
    return grid;
}

namespace {

// Minimal SHA-1 (for git blob hashing only; no cryptographic claims).
struct Sha1 {
    std::uint32_t h[5] = {0x67452301u, 0xEFCDAB89u, 0x98BADCFEu, 0x10325476u, 0xC3D2E1F0u};
    unsigned char buf[64];
    std::size_t buflen = 0;
    std::uint64_t total = 0;

    static std::uint32_t rol(std::uint32_t x, int s) { return (x << s) | (x >> (32 - s)); }

    void block(const unsigned char* p) {
        std::uint32_t w[80];
        for (int i = 0; i < 16; ++i)
            w[i] = (std::uint32_t(p[4 * i]) << 24) | (std::uint32_t(p[4 * i + 1]) << 16) |
                   (std::uint32_t(p[4 * i + 2]) << 8) | std::uint32_t(p[4 * i + 3]);
        for (int i = 16; i < 80; ++i) w[i] = rol(w[i - 3] ^ w[i - 8] ^ w[i - 14] ^ w[i - 16], 1);
        std::uint32_t a = h[0], b = h[1], c = h[2], d = h[3], e = h[4];
        for (int i = 0; i < 80; ++i) {
            std::uint32_t f, kc;
            if (i < 20) { f = (b & c) | (~b & d); kc = 0x5A827999u; }
            else if (i < 40) { f = b ^ c ^ d; kc = 0x6ED9EBA1u; }
            else if (i < 60) { f = (b & c) | (b & d) | (c & d); kc = 0x8F1BBCDCu; }
            else { f = b ^ c ^ d; kc = 0xCA62C1D6u; }
            const std::uint32_t tmp = rol(a, 5) + f + e + kc + w[i];
            e = d; d = c; c = rol(b, 30); b = a; a = tmp;
        }
        h[0] += a; h[1] += b; h[2] += c; h[3] += d; h[4] += e;
    }

    void update(const void* data, std::size_t len) {
        const unsigned char* p = static_cast<const unsigned char*>(data);
        total += len;
        while (len > 0) {
            const std::size_t take = std::min<std::size_t>(len, 64 - buflen);
            std::memcpy(buf + buflen, p, take);
            buflen += take;
            p += take;
            len -= take;
            if (buflen == 64) { block(buf); buflen = 0; }
        }
    }

    std::string hex() {
        const std::uint64_t bits = total * 8;  // captured before the padding below
        unsigned char pad = 0x80;
        update(&pad, 1);
        const unsigned char zero = 0;
        while (buflen != 56) update(&zero, 1);
        unsigned char len[8];
        for (int i = 0; i < 8; ++i) len[i] = static_cast<unsigned char>(bits >> (56 - 8 * i));
        update(len, 8);
        static const char* digits = "0123456789abcdef";
        std::string out;
        out.reserve(40);
        for (std::uint32_t word : h)
            for (int i = 28; i >= 0; i -= 4) out.push_back(digits[(word >> i) & 0xF]);
        return out;
    }
};

}  // namespace

std::string git_blob_sha1(const std::string& content) {
    std::string payload = "blob " + std::to_string(content.size());
    payload.push_back('\0');
    payload += content;
    Sha1 s;
    s.update(payload.data(), payload.size());
    return s.hex();
}

std::string format_bigfloat(const BigFloat& x, int digits) { return x.str(digits); }

std::string Report::csv() const {
    std::string out;
    for (const auto& [key, value] : meta) out += "# " + key + ": " + value + "\n";
    auto join = [](const std::vector<std::string>& parts) {
        std::string line;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (i) line += ",";
            line += parts[i];
        }
        return line;
    };
    out += join(columns) + "\n";
    for (const auto& row : rows) out += join(row) + "\n";
    return out;
}

std::string Report::json(bool pretty) const {
    nlohmann::ordered_json j;
    nlohmann::ordered_json m = nlohmann::ordered_json::object();
    for (const auto& [key, value] : meta) m[key] = value;
    j["meta"] = std::move(m);
    j["columns"] = columns;
    j["rows"] = rows;
    return j.dump(pretty ? 2 : -1) + "\n";
}

namespace {

std::string bool_str(bool b) { return b ? "true" : "false"; }

void common_meta(Report& rep, const char* kind, bool relaxed, const std::string& plan_hash) {
    rep.meta.emplace_back("report", kind);
    rep.meta.emplace_back("mode", relaxed ? "relaxed" : "literal");
    rep.meta.emplace_back("precision_bits", std::to_string(BigFloat::kDefaultPrec));
    rep.meta.emplace_back("plan", plan_hash);
}

}  // namespace

Report density_report(const DensityReport& d, const std::string& plan_hash) {
    Report rep;
    common_meta(rep, "density", d.relaxed, plan_hash);
    rep.columns = {"k", "ell_k", "T", "count", "ratio", "target", "ratio_over_target"};
    rep.rows = {{std::to_string(d.k), std::to_string(d.ell_k), std::to_string(d.T),
                 d.count.get_str(), rat_to_string(d.ratio), rat_to_string(d.target),
                 format_bigfloat(BigFloat::from_rational(d.ratio / d.target), 20)}};
    return rep;
}

Report residual_report(const ResidualReport& res, const std::string& plan_hash) {
    Report rep;
    common_meta(rep, "residual", res.relaxed, plan_hash);
    rep.meta.emplace_back("r", rat_to_string(res.r));
    rep.meta.emplace_back("n_max", std::to_string(res.n_max));
    rep.meta.emplace_back("er2_certified", bool_str(res.er2_certified));
    rep.columns = {"k", "n", "s", "ell_k", "f_part2", "g_part2_truncated", "g_tail2",
                   "residual_upper", "part_bound2", "total_bound2", "f_ok", "g_ok", "total_ok"};
    rep.rows = {{std::to_string(res.k), std::to_string(res.n), std::to_string(res.s),
                 std::to_string(res.ell_k), rat_to_string(res.f_part2),
                 rat_to_string(res.g_part2_truncated), format_bigfloat(res.g_tail2),
                 format_bigfloat(res.residual.value()), rat_to_string(res.part_bound2),
                 rat_to_string(res.total_bound2), bool_str(res.f_ok), bool_str(res.g_ok),
                 bool_str(res.total_ok)}};
    return rep;
}

Report growth_report(const GrowthTable& table, const std::string& plan_hash) {
    Report rep;
    common_meta(rep, "growth", table.relaxed, plan_hash);
    rep.meta.emplace_back("N", std::to_string(table.N));
    rep.meta.emplace_back("C", rat_to_string(table.C));
    rep.meta.emplace_back("n_max", std::to_string(table.n_max));
    rep.meta.emplace_back("tail_policy_bits", std::to_string(kGrowthTailBits));
    rep.meta.emplace_back("all_within_bound", bool_str(table.all_within_bound));
    rep.meta.emplace_back("exact_agree", bool_str(table.exact_agree));
    rep.columns = {"r", "m2", "tail_bound", "envelope", "ratio", "exact_checked", "certified"};
    for (const GrowthRow& row : table.rows)
        rep.rows.push_back({rat_to_string(row.r), format_bigfloat(row.m2),
                            format_bigfloat(row.tail), format_bigfloat(row.bound),
                            format_bigfloat(row.ratio), bool_str(row.exact_checked),
                            bool_str(row.certified)});
    return rep;
}

Report growth_lemma_report(const GrowthLemmaReport& g) {
    Report rep;
    rep.meta.emplace_back("report", "growth-lemma");
    rep.meta.emplace_back("precision_bits", std::to_string(BigFloat::kDefaultPrec));
    rep.meta.emplace_back("N", std::to_string(g.N));
    rep.meta.emplace_back("ell", std::to_string(g.ell));
    rep.meta.emplace_back("u", std::to_string(g.u));
    rep.meta.emplace_back("max_normalized", format_bigfloat(g.max_normalized));
    rep.columns = {"r", "S", "normalized"};
    for (const GrowthLemmaPoint& p : g.points)
        rep.rows.push_back({rat_to_string(p.r), format_bigfloat(p.S), format_bigfloat(p.normalized)});
    return rep;
}

}  // namespace fhharm
