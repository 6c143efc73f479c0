/*
 * verify.hpp -- quantitative checks for every inequality the construction
 * relies on: lower density of the admitted order set, smallness of the
 * differentiated residual against its target, the global L2 growth envelope
 * of the truncated sum, and the three supporting lemmas (skip-summation,
 * growth of the inverse-square-factorial series, log-concavity of its terms)
 * plus the Poisson-kernel sup bound.  Everything that is asserted is either
 * exact rational arithmetic or a directed-rounding 256-bit enclosure; sampled
 * quantities are only ever used on the safe side of a comparison.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fhharm/construct.hpp"
#include "fhharm/kuran.hpp"
#include "fhharm/normvalue.hpp"
#include "fhharm/spheremeans.hpp"

namespace fhharm {

/* ------------------------------------------------------------------ */
/* Lower density of the admitted differentiation orders                */
/* ------------------------------------------------------------------ */

// Counts the orders s <= T admitted for stage k and compares the frequency
// count/T with the guaranteed lower bound 1/(4 ell_k^2 2^k).
struct DensityReport {
    unsigned long k = 0;
    unsigned long ell_k = 0;
    unsigned long T = 0;
    bool relaxed = false;
    Int count;
    Rational ratio;   // count / T
    Rational target;  // 1 / (4 ell_k^2 2^k), the asymptotic lower density
};

DensityReport lower_density(unsigned long k, const EllSequence& ell, unsigned long T,
                            const Scale& scale = Scale{});

/* ------------------------------------------------------------------ */
/* Certified tail majorant                                             */
/* ------------------------------------------------------------------ */

// Upper bound (every rounding directed outward) for the squared spherical
// mean of d^s/dx1^s applied to the sum of all blocks with index >= n0, at
// radius r.  s = 0 bounds the plain truncation tail.  Requires the first
// retained derivative order to be at least 2r, so the term ratio of the
// dominating series is below 1/4 and the geometric closure is valid.
BigFloat tail_majorant_squared(const DensePlan& plan, const EllSequence& ell,
                               unsigned long n0, unsigned long s, const Rational& r,
                               const Scale& scale = Scale{});

// Square root of the majorant wrapped as an approximate NormValue: an upper
// bound for the tail mean itself, monotone nonincreasing in n0.
NormValue tail_bound(const DensePlan& plan, const EllSequence& ell, unsigned long n0,
                     const Rational& r, const Scale& scale = Scale{});

/* ------------------------------------------------------------------ */
/* Residual of the hypercyclicity approximation                        */
/* ------------------------------------------------------------------ */

// For an admitted order s of block n at stage k, measures how far the
// s-th derivative of the truncated sum is from the stage's target F_k:
//
//   d^s/dx1^s h - F_k  =  [sum of the surviving primitives of F_k]  ("F part")
//                       + [d^s/dx1^s of all blocks above n]         ("G part")
//
// Both parts are evaluated exactly through block n_max; beyond that the G
// part is enclosed by the certified tail majorant.
struct ResidualReport {
    unsigned long k = 0;
    unsigned long n = 0;
    unsigned long s = 0;
    unsigned long ell_k = 0;
    Rational r;
    unsigned long n_max = 0;
    bool relaxed = false;

    Rational f_part2;            // exact squared mean of the F part
    Rational g_part2_truncated;  // exact squared mean over blocks n+2 .. n_max
    BigFloat g_tail2;            // certified bound for blocks above n_max
    NormValue residual;          // upper estimate of the residual norm

    Rational part_bound2;   // 1 / (2 ell_k^(N-1)), target for each part
    Rational total_bound2;  // 1 / ell_k^2, target for the sum
    bool er2_certified = false;  // (e r)^2 <= ell_k holds with a rational bracket of e^2
    bool f_ok = false;
    bool g_ok = false;
    bool total_ok = false;
};

ResidualReport fhc_residual(const DensePlan& plan, const EllSequence& ell,
                            unsigned long k, unsigned long n, unsigned long s,
                            const Rational& r, unsigned long n_max,
                            const Scale& scale = Scale{});

/* ------------------------------------------------------------------ */
/* Global growth envelope                                              */
/* ------------------------------------------------------------------ */

// One radius of the growth table.  m2 is the spherical mean of the truncated
// sum, tail a certified bound for everything beyond the truncation, bound the
// envelope C e^r / r^(N/2 - 3/4), and ratio (m2 + tail) / bound.
struct GrowthRow {
    Rational r;
    BigFloat m2;
    BigFloat tail;
    BigFloat bound;
    BigFloat ratio;
    bool exact_checked = false;  // m2 cross-checked against the exact rational mean
    bool certified = false;      // exact mean + tail <= lower-rounded bound
};

struct GrowthTable {
    unsigned N = 0;
    Rational C;
    unsigned long n_max = 0;
    bool relaxed = false;
    std::vector<GrowthRow> rows;
    bool all_within_bound = false;  // every ratio <= 1 and every spot check certified
    bool exact_agree = false;       // all spot checks matched to the pinned tolerance
};

// Tolerances pinned here; the tail must be negligible against the envelope
// (2^-kGrowthTailBits) at every radius or the profile refuses to certify.
inline constexpr long kGrowthTailBits = 40;
inline constexpr double kGrowthExactRelTol = 1e-60;

GrowthTable growth_profile(const TruncatedH& h, const std::vector<Rational>& r_grid,
                           const Rational& C, unsigned exact_checks = 5);

/* ------------------------------------------------------------------ */
/* Growth lemma for the skipped inverse-square-factorial series        */
/* ------------------------------------------------------------------ */

// S(ell, u, r) = sum_{k >= ell} r^(2(ell k + u)) / ((ell k + u)!^2 (ell k + u + 1)^(N-2)),
// evaluated with an upward-rounded truncation certificate, and normalized by
// the claimed envelope: normalized = S * ell * r^(N - 3/2) / e^(2r).
struct GrowthLemmaPoint {
    Rational r;
    BigFloat S;
    BigFloat normalized;
};

struct GrowthLemmaReport {
    unsigned N = 0;
    unsigned long ell = 0;
    unsigned long u = 0;
    std::vector<GrowthLemmaPoint> points;
    BigFloat max_normalized;
};

GrowthLemmaReport growth_lemma_check(unsigned N, unsigned long ell, unsigned long u,
                                     const std::vector<Rational>& r_grid,
                                     unsigned long max_terms = 200000);

// Sweeps the documented grid (ell = 1..ell_max, u in {0, ell-1}, r log-spaced
// in [2, 200], N in Ns), doubles the radius grid to test stability, and
// returns 2 * max normalized as a certified-from-above rational constant.
struct CPrimeCertificate {
    Rational c_prime;
    BigFloat max_normalized;
    BigFloat refined_max;
    bool stable = false;  // refined grid moved the maximum by less than 2x
    std::string provenance;
};

CPrimeCertificate certify_c_prime(const std::vector<unsigned>& Ns = {3u, 4u, 5u},
                                  unsigned long ell_max = 64, unsigned r_points = 40,
                                  unsigned long max_terms = 200000);

// The undecimated comparison series T(r) = sum_n r^(2n) / n!^2 that the
// growth lemma rests on: its certified sum, its largest term and argmax
// (which sits at n = floor(r)), and the normalizations T * r^(1/2) / e^(2r)
// and max_term * r / e^(2r), both of which stay bounded over any r-grid.
struct HelpSeriesReport {
    Rational r;
    BigFloat S;
    unsigned long argmax = 0;
    BigFloat max_term;
    BigFloat normalized_sum;  // S * r^(1/2) / e^(2r)
    BigFloat normalized_max;  // max_term * r / e^(2r)
};

HelpSeriesReport help_series_check(const Rational& r, unsigned long max_terms = 200000);

/* ------------------------------------------------------------------ */
/* Skip-summation lemma                                                */
/* ------------------------------------------------------------------ */

// sum_{k >= 1} a_{k ell + u}  <=  (1/ell) sum_n a_n            (a decreasing)
//                             <=  (1/ell) sum_n a_n + 2 sup a  (a unimodal)
// checked with exact rational sums.  Geometric sequences use the closed
// forms; finite sequences (zero beyond the last entry) are summed directly.
struct SkipSequence {
    enum class Kind { GeometricDecreasing, Truncated } kind = Kind::GeometricDecreasing;
    Rational x;                   // ratio in (0,1), geometric case
    std::vector<Rational> terms;  // a_0..a_T, truncated case
    unsigned long peak = 0;       // declared mode of a unimodal truncated sequence
};

struct SkipLemmaReport {
    unsigned long ell = 0;
    unsigned long u = 0;
    Rational lhs;         // exact skipped sum
    Rational rhs;         // exact right-hand side
    bool used_sup_term = false;  // unimodal form (peak > 0) was needed
    bool holds = false;
};

SkipLemmaReport skip_lemma_check(const SkipSequence& seq, unsigned long ell,
                                 unsigned long u);

/* ------------------------------------------------------------------ */
/* Log-concavity of the growth-series terms                            */
/* ------------------------------------------------------------------ */

// The second difference of n |-> log( r^(2n) / (n!^2 (n+1)^(N-2)) ) does not
// depend on r, and is <= 0 exactly when
//      (n+1)^2 (n (n+2))^(N-2)  >=  n^2 (n+1)^(2N-4),
// which this check decides in exact integer arithmetic over [n_lo, n_hi].
struct ConcavityReport {
    unsigned N = 0;
    unsigned long n_lo = 0;
    unsigned long n_hi = 0;
    std::optional<unsigned long> onset;  // least n0 with concavity on [n0, n_hi]
};

ConcavityReport log_concavity_check(unsigned N, const Rational& r, unsigned long n_lo,
                                    unsigned long n_hi);

/* ------------------------------------------------------------------ */
/* Poisson-kernel sup bound                                            */
/* ------------------------------------------------------------------ */

// sup_{|x| = r} |h| <= c_N M2(h, 2r) for harmonic h.  The sup is sampled
// (a lower estimate), so a true inequality can only show a nonnegative
// margin up to the declared slack of the constant's enclosure.
struct PoissonMargin {
    Rational r;
    BigFloat c_N;     // lower-rounded value of the constant
    BigFloat m2_2r;   // lower-rounded M2(h, 2r)
    NormValue sup_r;  // sampled sup (lower estimate of the true sup)
    BigFloat margin;  // c_N * m2_2r - sup
    double slack = 0.0;
    bool ok = false;  // margin >= -slack
};

PoissonMargin poisson_bound_check(const Polynomial& h, const Rational& r,
                                  unsigned long samples, const PoissonConstant& c,
                                  std::uint64_t seed = 0x5eed5eedULL);
PoissonMargin poisson_bound_check(const Polynomial& h, const Rational& r,
                                  unsigned long samples, std::uint64_t seed = 0x5eed5eedULL);

/* ------------------------------------------------------------------ */
/* Report rendering                                                    */
/* ------------------------------------------------------------------ */

// Tabular result with ordered metadata, rendered as CSV ("# key: value"
// comment lines, then a header row) or as a {meta, columns, rows} JSON
// object.  All values are preformatted strings so both renderings are
// byte-deterministic.
struct Report {
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::string csv() const;
    std::string json(bool pretty = false) const;
};

// Log-spaced grid of `points` radii from lo to hi inclusive, each snapped to
// a positive multiple of 2^-12 so grids are identical across platforms (the
// spacing comes from MPFR, never from libm).
std::vector<Rational> log_spaced_grid(const Rational& lo, const Rational& hi, unsigned points);

// Hash of a byte string in git blob form: SHA-1("blob <len>\0" + content),
// lowercase hex.  Used to fingerprint the plan file a report derives from.
std::string git_blob_sha1(const std::string& content);

// Deterministic decimal rendering used in all reports.
std::string format_bigfloat(const BigFloat& x, int digits = 40);

Report density_report(const DensityReport& d, const std::string& plan_hash);
Report residual_report(const ResidualReport& res, const std::string& plan_hash);
Report growth_report(const GrowthTable& table, const std::string& plan_hash);
Report growth_lemma_report(const GrowthLemmaReport& g);

}  // namespace fhharm
