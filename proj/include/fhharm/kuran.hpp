/*
 * kuran.hpp -- structure theory for homogeneous harmonics on R^N.
 *
 * Every H in H_m(R^N) splits uniquely as
 *
 *     H = sum_{p=0}^{m} u_p * I*_{m-p, N+2p},
 *
 * where u_p lies in H_p^0 (harmonic, homogeneous of degree p, independent
 * of x1) and I*_{m,N+2p} is the restriction to R^N of the x1-axial
 * harmonic I_{m,N+2p} normalized by I(1,0,...,0) = 1.  The decomposition
 * is what makes x1-antiderivatives ("primitives") computable term by term
 * and reduces every L2 surface norm to the part norms via
 *
 *     d_{m,N+2p} * M2^2(u * I*_{m,N+2p}, 1) = M2^2(u, 1).
 *
 * All of this is exact rational arithmetic.
 */
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fhharm/bigfloat.hpp"
#include "fhharm/polycalc.hpp"
#include "fhharm/rational.hpp"

namespace fhharm {

// dim H_m(R^N) = ((N+2m-2)/(N+m-2)) * C(N+m-2, m), with d_{0,2} = 1.
// N = 1 is supported for the basis recursion (1 for m <= 1, else 0).
Int dim_harmonic(unsigned long m, unsigned N);

// Coefficients a_j of I_{m,N} = sum_j a_j x1^(m-2j) rho^(2j), rho^2 = x2^2+...+xN^2:
// a_0 = 1,  a_{j+1} = -a_j (m-2j)(m-2j-1) / (2(j+1)(2j+N-1)).
std::vector<Rational> axial_coefficients(unsigned m, unsigned N);

struct AxialHarmonic {
    unsigned m = 0;
    unsigned N = 0;
    HomogeneousHarmonic h;
};

// The axial harmonic itself, expanded over N variables.  M2^2 = r^(2m)/d_{m,N}.
AxialHarmonic axial_harmonic(unsigned m, unsigned N);

// I*_{m, N+2p} as a polynomial in N variables: substitute the last 2p
// variables of I_{m,N+2p} by zero.  Harmonic only for p = 0.
Polynomial restrict_axial(unsigned m, unsigned N, unsigned p);

struct KuranDecomposition {
    unsigned m = 0;
    unsigned N = 0;
    std::vector<Polynomial> parts;  // parts[p] = u_p for p = 0..m (zero polynomials included)
};

// Decompose a homogeneous harmonic.  The linear system in the monomial
// basis is block-triangular in the x1-degree, so it is solved by exact
// forward substitution; the result is validated (x1-free parts, harmonic,
// recombines to H) and any failure throws, since it is impossible for
// valid input.  The Polynomial overload validates harmonicity first and
// throws std::domain_error on non-harmonic input.
KuranDecomposition kuran_decompose(const HomogeneousHarmonic& H);
KuranDecomposition kuran_decompose(const Polynomial& H);

// sum_p u_p * I*_{m-p,N+2p}; exact inverse of kuran_decompose.
Polynomial kuran_recombine(const KuranDecomposition& dec);

// JSON round-trip: {"m":..., "N":..., "parts":[{"p":..., "u_p":"<poly text>"}...]}
// parts ordered by p; deterministic.
std::string kuran_to_json(const KuranDecomposition& dec, bool pretty = false);
KuranDecomposition kuran_from_json(const std::string& text);

// P_k(H): the canonical k-th x1-antiderivative
//     P_k(H) = sum_p ((m-p)! / (m-p+k)!) u_p I*_{m-p+k, N+2p},
// homogeneous harmonic of degree m+k with d^k/dx1^k P_k(H) = H and
// P_k(P_l(H)) = P_{k+l}(H).
HomogeneousHarmonic primitive(const HomogeneousHarmonic& H, unsigned k);

// c_{k,m,N} = (N+2m-2)! / (k! (N+2m+k-3)! (N+2m+2k-2)); the sharp constant in
// M2^2(P_k(H), 1) <= c_{k,m,N} M2^2(H, 1), attained at m = 0.  c_{0,m,N} = 1.
Rational primitive_bound_constant(unsigned k, unsigned m, unsigned N);

// Smallest c_m with (c_{k,m,N})^(1/2) <= c_m / ((k+m)! (k+m+1)^(N/2-1)) for
// every k >= 0.  The squared ratio A_k = c_{k,m,N} ((k+m)!)^2 (k+m+1)^(N-2)
// is a rational function of k with limit L = (N+2m-2)!/2; beyond the Cauchy
// root bound K* of the difference polynomial A(k+1)-A(k) it is monotone, so
//     c_m^2 = max( max_{k <= K*+1} A_k , L )            (exact rational).
// Requires k_max >= K*+1, otherwise throws asking for a larger k_max.
struct GrowthConstant {
    unsigned m = 0;
    unsigned N = 0;
    Rational c_squared;       // exact c_m^2
    Rational c_upper;         // dyadic rational with c_upper >= c_m (certified)
    unsigned long window_end; // K*+1: last index checked exactly
    bool tail_increasing;     // A_k approaches L from below beyond the window
};
GrowthConstant growth_constant(unsigned m, unsigned N, unsigned long k_max);

// growth_constant for m = 0..m_max with the cumulative max applied so that
// m -> c_m is nondecreasing.
std::vector<GrowthConstant> growth_constants_upto(unsigned m_max, unsigned N, unsigned long k_max);

// A harmonic polynomial with the norms of all its Kuran part precomputed:
// everything the block-norm calculus needs, with no symbolic expansion.
struct DecomposedComponent {
    unsigned j = 0;                     // degree of the component H_j
    std::vector<Rational> part_norm2;   // M2^2(u_{j,p}, 1) for p = 0..j
};
struct DecomposedPoly {
    unsigned N = 0;
    Polynomial F;                        // the polynomial itself
    unsigned m = 0;                      // total degree (0 for a constant)
    Rational norm2;                      // M2^2(F, 1)
    std::vector<DecomposedComponent> components;  // nonzero graded parts only
};
// Throws std::domain_error (naming the failing degrees) if F is not harmonic.
DecomposedPoly decompose_poly(const Polynomial& F);

// P_n applied to a decomposed polynomial: the block-norm calculus works on
// these records directly.
struct PrimitiveTerm {
    unsigned long n = 0;            // primitive order
    const DecomposedPoly* base = nullptr;  // not owned
};

// M2^2(P_n(F), r) = sum_j sum_p ((j-p)!/(j-p+n)!)^2 r^(2(n+j))
//                              * M2^2(u_{j,p},1) / d_{j-p+n, N+2p},
// exact; factorial ratios are computed as products over the gap range.
Rational block_norm_squared(const PrimitiveTerm& t, const Rational& r);

// Same value in extended precision (round-to-nearest), for profile tables
// where exact rationals would be needlessly heavy.  log-space factorials.
BigFloat block_norm_squared_f(const PrimitiveTerm& t, const BigFloat& r);

// Canonical basis of H_m(R^N), built recursively from the factorization
// basis(H_m(R^N)) = { u * I*_{m-p,N+2p} : u in basis(H_p(R^(N-1))) },
// bottoming out at one variable.  Deterministic order: by p, then by the
// recursive index.  Size equals dim_harmonic(m, N).
std::vector<HomogeneousHarmonic> harmonic_basis(unsigned m, unsigned N);

}  // namespace fhharm
