/*
 * spheremeans.hpp -- surface means over centered spheres S(r) in R^N,
 * with the normalized measure sigma_r(S(r)) = 1.
 *
 * The single source of exactness is the closed form for a monomial:
 *
 *   (1/sigma) I x^(2b1) ... x^(2bN) dsigma
 *       = prod_i (2*b_i - 1)!!  /  prod_{t=0}^{B-1} (N + 2t),   B = sum b_i,
 *
 * and zero whenever any exponent is odd.  Every inner product / L2 mean
 * reduces to it by expanding the product polynomial, staying in Q.
 * Suprema are sampled lower estimates, never claimed as exact.
 */
#pragma once

#include <cstdint>
#include <vector>

#include "fhharm/normvalue.hpp"
#include "fhharm/polycalc.hpp"
#include "fhharm/rational.hpp"

namespace fhharm {

// Normalized integral of the monomial over the unit sphere of R^N, where
// N = m.e.size() >= 1.  Exact.
Rational monomial_sphere_integral(const Monomial& m, unsigned N);

// <g, h>_r = normalized integral of g*h over S(r), exact for rational r > 0.
Rational inner_product(const Polynomial& g, const Polynomial& h, const Rational& r);

// M2^2(h, r): squared L2 surface mean, = <h, h>_r.  Exact.
Rational m2_mean_squared(const Polynomial& h, const Rational& r);

// Deterministic sampled lower estimate of sup_{|x| = r} |h(x)|.
// The point set starts with the 2N signed axis points, then continues with
// seeded Gaussian directions; a larger `samples` only appends points, so the
// estimate is monotone nondecreasing in `samples`.
NormValue sup_on_sphere(const Polynomial& h, const Rational& r, unsigned long samples,
                        std::uint64_t seed = 0x5eed5eedULL);

// Truncated translation-invariant metric
//   d(g, h) ~= sum_{n=1..terms} 2^{-n} s_n / (1 + s_n),  s_n = sup_{S(n)} |g - h|,
// with each s_n a sampled lower estimate as above.
NormValue frechet_distance(const Polynomial& g, const Polynomial& h, unsigned terms,
                           unsigned long samples = 4096, std::uint64_t seed = 0x5eed5eedULL);

// c_N = sup_{|x| <= 1/2} ( I_S P(x,y)^2 dsigma(y) )^{1/2} for the Poisson
// kernel P(x,y) = (1 - |x|^2)/|x - y|^N of the unit ball.  Axial symmetry
// reduces the integral to one dimension:
//   I_S (1 + t^2 - 2 t y1)^{-N} dsigma(y)
//     = I_0^pi (1 + t^2 - 2 t cos a)^{-N} sin^{N-2} a da / I_0^pi sin^{N-2} a da
// which is evaluated by Romberg quadrature in 256-bit precision and
// maximized over t in [0, 1/2].
struct PoissonConstant {
    NormValue value;    // approximate, with relative error bound
    double maximizer;   // the t achieving the grid maximum
    bool monotone_on_grid;  // profile was nondecreasing on the t-grid
};
PoissonConstant poisson_constant(unsigned N, double target_rel_err = 1e-12);

// Deterministic sphere sampler shared by the sampled estimates above.
std::vector<double> sphere_point(unsigned N, double r, unsigned long index, std::uint64_t seed);

}  // namespace fhharm
