/*
 * construct.hpp -- the frequently hypercyclic function h.
 *
 * h = sum_n Q_n, where the even indices n are split into arithmetic
 * families A_k = {(2m-1) l_k 2^k : m >= 1} (pairwise disjoint across k),
 * each family owns a harmonic polynomial F_k from a cycled dense
 * enumeration, and
 *
 *     Q_n = sum_{j=1}^{n/l_k} P_{n^2 + j l_k}(F_k)     for n in A_k, n >= 10 l_k,
 *     Q_n = 0                                          otherwise.
 *
 * Q_n lives in degrees [n^2, n^2+n+m_k], so distinct blocks are
 * L2-orthogonal on every sphere and all norms decompose block by block.
 * Derivative orders s in B_{n,k} = {n^2 + j l_k} then recover F_k up to a
 * small residual, frequently (B_k has positive lower density), while the
 * l_k growth rule keeps M_2(h,r) below C e^r / r^(N/2-3/4).
 *
 * Everything here is bookkeeping over PrimitiveTerm records; nothing is
 * expanded symbolically except the explicitly relaxed-scale oracles.
 */
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fhharm/kuran.hpp"
#include "fhharm/polycalc.hpp"
#include "fhharm/rational.hpp"

namespace fhharm {

// Operating scale.  Literal: the admission threshold for a block index is
// 10*l_k, so first orders are ~(10 l_k)^2 and nothing is expandable.
// Relaxed: a small documented threshold so the same machinery produces
// blocks tiny enough to expand and cross-check against exact integration.
struct Scale {
    bool relaxed = false;
    unsigned long relaxed_threshold = 2;

    static Scale literal() { return Scale{}; }
    static Scale relaxed_at(unsigned long threshold) { return Scale{true, threshold}; }

    unsigned long threshold(unsigned long ell_k) const {
        return relaxed ? relaxed_threshold : 10 * ell_k;
    }
    const char* name() const { return relaxed ? "relaxed" : "literal"; }
};

// One position of the cycled dense sequence, viewed with its constants.
struct PlanEntryView {
    unsigned long k = 0;                   // 1-based index
    const DecomposedPoly* F = nullptr;     // generator backing F_k
    unsigned m = 0;                        // m_k = deg F_k
    Rational norm2;                        // M2^2(F_k, 1)
    Rational c_squared;                    // exact c_{m_k}^2
    Rational c_upper;                      // dyadic rational >= c_{m_k}
};

// The dense-sequence plan: a finite generating set cycled forever
// (F_k = generators[(k-1) mod cycle]), with growth constants per degree
// and the growth-lemma constant C' used by select_ell.  Immutable after
// construction; views and blocks point into `generators`, so a plan must
// outlive everything derived from it.
struct DensePlan {
    unsigned N = 0;
    unsigned coefficient_height = 1;
    unsigned degree_cap = 2;
    std::vector<DecomposedPoly> generators;
    std::vector<GrowthConstant> growth;    // index = degree m, cumulative max
    Rational c_prime = Rational(2);        // growth-lemma constant (budget input)
    std::string c_prime_provenance = "builtin-default-2 (uncertified safe default)";

    std::size_t cycle() const { return generators.size(); }
    PlanEntryView entry(unsigned long k) const;  // k >= 1
};

// Deterministic enumeration of the generating set, cycled into a plan.
// Generators are (sum_i v_i e_i)/q over the canonical harmonic basis
// elements e_i of degree <= degree_cap, with l1(v) = w <= height,
// 1 <= q <= height, gcd(content(v), q) = 1, ordered by (w, q, vector,
// sign: + before -).  The vector order is depth-first with magnitudes
// descending, so the first generator is the constant 1.  Density in the
// compact-open metric holds as height, degree_cap -> infinity; a fixed
// plan only promises that each generator recurs infinitely often.
DensePlan default_dense_sequence(unsigned N, unsigned coefficient_height, unsigned degree_cap);

// The l_k sequence: odd, strictly increasing, with the two constraints
//     l_k >= 2 m_k + c_{m_k} 2^k (M2^2(F_k,1) + 1)
//     c_{m_k} M2^2(F_k,1) / l_k <= (C^2/C') 2^{-k}
// (c_{m_k} taken as the certified dyadic upper bound).  The geometric
// budget makes the infinite sum <= C^2/C' with margin to spare for the
// untruncated tail.  Throws if any l_k would exceed 10^9 (the C' estimate
// is too large or C too small for a representable plan).
struct EllSequence {
    Rational C;
    Rational c_prime;                 // echo of the budget constant used
    std::vector<unsigned long> ell;   // ell[k-1] = l_k

    unsigned long k_max() const { return ell.size(); }
    unsigned long at(unsigned long k) const;  // 1-based, bounds-checked
};
EllSequence select_ell(const DensePlan& plan, const Rational& C, unsigned long k_max);

// A_k up to `limit`: {(2m-1) l_k 2^k} cap [0, limit].
std::vector<unsigned long> index_set_A(unsigned long k, const EllSequence& ell, unsigned long limit);

// B_{n,k} = {n^2 + j l_k : 1 <= j <= n/l_k} for an admissible n in A_k.
// Throws if n is not in A_k or n is below the admission threshold.
std::vector<unsigned long> index_set_B(unsigned long n, unsigned long k, const EllSequence& ell,
                                       const Scale& scale = Scale{});

// One block.  Zero block (base == nullptr) when n is odd, zero, not owned
// by any k <= k_max, or below the admission threshold.
struct BlockQ {
    unsigned long n = 0;
    unsigned long k = 0;                 // owner; 0 for zero blocks
    unsigned long m = 0;                 // n = (2m-1) l_k 2^k
    const DecomposedPoly* base = nullptr;
    std::vector<unsigned long> orders;   // n^2 + j l_k, ascending
    unsigned long deg_lo = 0, deg_hi = 0;  // [n^2, n^2+n+m_k]

    bool zero() const { return base == nullptr; }
    std::vector<PrimitiveTerm> terms() const;
};
BlockQ block_Q(unsigned long n, const DensePlan& plan, const EllSequence& ell,
               const Scale& scale = Scale{});

// Degree interval of a nonzero block; throws if Q_n is zero.
struct DegreeInterval {
    unsigned long lo = 0;
    unsigned long hi = 0;
};
DegreeInterval degree_interval(unsigned long n, const DensePlan& plan, const EllSequence& ell,
                               const Scale& scale = Scale{});

// Truncation of h to blocks with n <= n_max.  Construction verifies that
// the nonzero blocks occupy pairwise disjoint degree intervals and throws
// otherwise (a corrupted ell sequence violating the l_k rule is the only
// way to get here).  Norms are exact sums of block norms by orthogonality.
struct TruncatedH {
    const DensePlan* plan = nullptr;
    const EllSequence* ell = nullptr;
    Scale scale;
    unsigned long n_max = 0;
    std::vector<BlockQ> blocks;   // nonzero blocks, ascending n

    Rational norm2(const Rational& r) const;
    BigFloat norm2_f(const BigFloat& r) const;
};
TruncatedH assemble_truncated(const DensePlan& plan, const EllSequence& ell, unsigned long n_max,
                              const Scale& scale = Scale{});

// Relaxed-scale oracles: expand symbolically so exact integration can
// cross-check the block calculus.  Guarded against literal-scale degrees.
Polynomial expand_primitive_term(const PrimitiveTerm& t);
Polynomial expand_block(const BlockQ& q);
Polynomial expand_truncated(const TruncatedH& h);

// Plan files: {format, N, height, degree_cap, C, c_prime (+provenance),
// generators as canonical text, ell, entries}.  Loading re-derives every
// decomposition, norm, and growth constant from the generator texts and
// validates the stored entry metadata against them (throws on mismatch);
// stored numbers are never trusted as computation inputs.
std::string plan_to_json(const DensePlan& plan, const EllSequence& ell, bool pretty = false);
std::pair<DensePlan, EllSequence> plan_from_json(const std::string& text);

}  // namespace fhharm
