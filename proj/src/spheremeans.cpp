#include "fhharm/spheremeans.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "fhharm/parallel.hpp"

namespace fhharm {

Rational monomial_sphere_integral(const Monomial& m, unsigned N) {
    if (N == 0 || m.e.size() != N) {
        throw std::invalid_argument("monomial_sphere_integral: dimension mismatch");
    }
    unsigned long B = 0;
    for (uint32_t a : m.e) {
        if (a % 2 != 0) return Rational(0);
        B += a / 2;
    }
    Int num = 1;
    for (uint32_t a : m.e) num *= double_factorial_odd(a / 2);
    Int den = 1;
    for (unsigned long t = 0; t < B; ++t) den *= Int(N) + Int(2 * t);
    return rat(num, den);
}

Rational inner_product(const Polynomial& g, const Polynomial& h, const Rational& r) {
    if (g.nvars() != h.nvars()) throw std::invalid_argument("inner_product: dimension mismatch");
    if (r <= 0) throw std::invalid_argument("inner_product: radius must be positive");
    unsigned N = g.nvars();
    Polynomial prod = g * h;
    Rational acc(0);
    for (const auto& [m, c] : prod.terms()) {
        Rational base = monomial_sphere_integral(m, N);
        if (base == 0) continue;
        acc += c * pow_rational(r, m.degree()) * base;
    }
    return acc;
}

Rational m2_mean_squared(const Polynomial& h, const Rational& r) { return inner_product(h, h, r); }

// ---- deterministic sphere sampling -----------------------------------------

namespace {

// SplitMix64; fixed constants, platform-independent.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline double uniform01(std::uint64_t& state) {
    // in (0, 1]: never zero, so log() below is safe
    return (static_cast<double>(splitmix64(state) >> 11) + 1.0) * 0x1p-53;
}

}  // namespace

std::vector<double> sphere_point(unsigned N, double r, unsigned long index, std::uint64_t seed) {
    if (N == 0) throw std::invalid_argument("sphere_point: N must be >= 1");
    std::vector<double> x(N, 0.0);
    if (index < 2ul * N) {
        // signed axis points first: +e1, -e1, +e2, ...
        x[index / 2] = (index % 2 == 0) ? r : -r;
        return x;
    }
    // each point draws from its own stream, so prefixes are stable
    std::uint64_t state = seed ^ (0x9e3779b97f4a7c15ULL * (index + 1));
    (void)splitmix64(state);
    double norm2 = 0.0;
    for (unsigned i = 0; i < N; i += 2) {
        double u1 = uniform01(state), u2 = uniform01(state);
        double rad = std::sqrt(-2.0 * std::log(u1));
        double z0 = rad * std::cos(2.0 * M_PI * u2);
        double z1 = rad * std::sin(2.0 * M_PI * u2);
        x[i] = z0;
        norm2 += z0 * z0;
        if (i + 1 < N) {
            x[i + 1] = z1;
            norm2 += z1 * z1;
        }
    }
    if (norm2 < 1e-280) {  // essentially impossible; keep determinism anyway
        x.assign(N, 0.0);
        x[0] = r;
        return x;
    }
    double scale = r / std::sqrt(norm2);
    for (double& xi : x) xi *= scale;
    return x;
}

NormValue sup_on_sphere(const Polynomial& h, const Rational& r, unsigned long samples,
                        std::uint64_t seed) {
    if (r <= 0) throw std::invalid_argument("sup_on_sphere: radius must be positive");
    if (samples == 0) throw std::invalid_argument("sup_on_sphere: need at least one sample");
    unsigned N = h.nvars();
    double rd = Rational(r).get_d();

    std::vector<double> best(thread_count(), 0.0);
    std::atomic<std::size_t> cursor{0};
    unsigned workers = thread_count();
    std::vector<std::thread> pool;
    auto work = [&](unsigned slot) {
        double local = 0.0;
        std::vector<double> pt;
        for (;;) {
            std::size_t i = cursor.fetch_add(1);
            if (i >= samples) break;
            pt = sphere_point(N, rd, i, seed);
            double v = std::fabs(evaluate_d(h, pt));
            if (v > local) local = v;
        }
        best[slot] = local;
    };
    if (workers <= 1 || samples < 256) {
        work(0);
    } else {
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work, t);
        for (auto& th : pool) th.join();
    }
    double m = 0.0;
    for (double b : best) m = std::max(m, b);

    NormValue v = NormValue::approximate(BigFloat(m), 0.0, /*lower_estimate=*/true);
    v.samples = samples;
    return v;
}

NormValue frechet_distance(const Polynomial& g, const Polynomial& h, unsigned terms,
                           unsigned long samples, std::uint64_t seed) {
    if (g.nvars() != h.nvars()) throw std::invalid_argument("frechet_distance: dimension mismatch");
    if (terms == 0) throw std::invalid_argument("frechet_distance: need at least one term");
    Polynomial diff = g - h;
    double acc = 0.0;
    double w = 1.0;
    for (unsigned n = 1; n <= terms; ++n) {
        w *= 0.5;
        if (diff.is_zero()) continue;
        double s = sup_on_sphere(diff, Rational(static_cast<long>(n)), samples, seed).value_d();
        acc += w * (s / (1.0 + s));
    }
    NormValue v = NormValue::approximate(BigFloat(acc), 0.0, /*lower_estimate=*/true);
    v.samples = samples;
    return v;
}

// ---- Poisson constant ------------------------------------------------------

namespace {

// f(theta) = (1 + t^2 - 2 t cos theta)^(-N) * sin(theta)^(N-2)
void poisson_integrand(BigFloat& out, const BigFloat& theta, const BigFloat& t, unsigned N) {
    mpfr_prec_t prec = out.prec();
    BigFloat c = BigFloat::with_prec(prec), s = BigFloat::with_prec(prec), base = BigFloat::with_prec(prec);
    mpfr_sin_cos(s.raw(), c.raw(), theta.raw(), MPFR_RNDN);
    // base = 1 + t^2 - 2 t cos(theta)
    base = BigFloat(1) + t * t - BigFloat(2) * t * c;
    BigFloat r = BigFloat::with_prec(prec);
    mpfr_pow_si(r.raw(), base.raw(), -static_cast<long>(N), MPFR_RNDN);
    if (N >= 3) {
        BigFloat sp = BigFloat::with_prec(prec);
        mpfr_pow_si(sp.raw(), s.raw(), static_cast<long>(N) - 2, MPFR_RNDN);
        r *= sp;
    }
    out = r;
}

// Romberg on [0, pi]; returns value, writes |last correction| to err.
BigFloat romberg_0_pi(const BigFloat& t, unsigned N, int weight_only, double target_rel_err,
                      BigFloat& err, int max_level = 15) {
    const mpfr_prec_t prec = 256;
    BigFloat pi = BigFloat::with_prec(prec);
    mpfr_const_pi(pi.raw(), MPFR_RNDN);

    auto eval = [&](const BigFloat& theta) {
        BigFloat v = BigFloat::with_prec(prec);
        if (weight_only) {
            BigFloat s = BigFloat::with_prec(prec);
            mpfr_sin(s.raw(), theta.raw(), MPFR_RNDN);
            if (N >= 3) {
                mpfr_pow_si(v.raw(), s.raw(), static_cast<long>(N) - 2, MPFR_RNDN);
            } else {
                v = BigFloat(1);
            }
        } else {
            poisson_integrand(v, theta, t, N);
        }
        return v;
    };

    std::vector<BigFloat> row;  // Romberg table, previous row
    BigFloat h = pi;
    BigFloat trap = (eval(BigFloat(0)) + eval(pi)) * BigFloat(0.5) * h;
    row.push_back(trap);
    err = bf_abs(trap);
    for (int level = 1; level <= max_level; ++level) {
        // refine trapezoid with midpoints
        long pts = 1L << (level - 1);
        BigFloat sum = BigFloat::with_prec(prec);
        BigFloat h2 = h * BigFloat(0.5);
        for (long i = 0; i < pts; ++i) {
            BigFloat theta = h2 * BigFloat(static_cast<long>(2 * i + 1));
            sum += eval(theta);
        }
        BigFloat t0 = row[0] * BigFloat(0.5) + sum * h2;
        std::vector<BigFloat> next;
        next.push_back(t0);
        BigFloat pow4(1);
        for (std::size_t k = 0; k < row.size(); ++k) {
            pow4 *= BigFloat(4);
            BigFloat extrap = (pow4 * next[k] - row[k]) / (pow4 - BigFloat(1));
            next.push_back(extrap);
        }
        err = bf_abs(next.back() - row.back());
        BigFloat scale = bf_abs(next.back());
        row = std::move(next);
        h = h2;
        if (level >= 4 && !scale.is_zero()) {
            BigFloat rel = err / scale;
            if (rel.to_double() < target_rel_err * 0.01) break;
        }
    }
    return row.back();
}

}  // namespace

PoissonConstant poisson_constant(unsigned N, double target_rel_err) {
    if (N < 2) throw std::invalid_argument("poisson_constant: N must be >= 2");
    if (target_rel_err < 1e-60) throw std::domain_error(
        "poisson_constant: requested precision unachievable within iteration cap");

    BigFloat werr;
    BigFloat weight = romberg_0_pi(BigFloat(0), N, /*weight_only=*/1, target_rel_err, werr);

    const int kGrid = 32;
    std::vector<double> phi(kGrid + 1, 0.0);
    std::vector<BigFloat> phi_big(kGrid + 1);
    double worst_rel = 0.0;
    std::vector<double> rel_err_slot(kGrid + 1, 0.0);

    parallel_for(static_cast<std::size_t>(kGrid + 1), [&](std::size_t i) {
        BigFloat t = BigFloat(static_cast<long>(i)) / BigFloat(2L * kGrid);  // t in [0, 1/2]
        BigFloat ierr;
        BigFloat integral = romberg_0_pi(t, N, /*weight_only=*/0, target_rel_err, ierr);
        BigFloat one_minus_t2 = BigFloat(1) - t * t;
        BigFloat val = one_minus_t2 * one_minus_t2 * integral / weight;
        phi_big[i] = val;
        phi[i] = val.to_double();
        rel_err_slot[i] = (ierr / integral).to_double() + (werr / weight).to_double();
    });
    for (double e : rel_err_slot) worst_rel = std::max(worst_rel, e);

    bool monotone = true;
    std::size_t arg = 0;
    for (std::size_t i = 1; i < phi_big.size(); ++i) {
        if (phi_big[i] < phi_big[i - 1]) monotone = false;
        if (phi_big[arg] < phi_big[i]) arg = i;
    }
    // The profile t -> Phi(t) is nondecreasing on [0, 1/2] (it is a power
    // series in t^2 with nonnegative coefficients), so the grid maximum at
    // t = 1/2 is the true maximum; the monotone flag records the numerical
    // confirmation.  If it ever failed we would still report the grid max.
    BigFloat c = bf_sqrt(phi_big[arg]);
    double rel = 0.5 * worst_rel + 1e-70;
    if (rel > target_rel_err) {
        throw std::domain_error("poisson_constant: requested precision unachievable within iteration cap");
    }
    PoissonConstant out;
    out.value = NormValue::approximate(c, rel);
    out.maximizer = static_cast<double>(arg) / (2.0 * kGrid);
    out.monotone_on_grid = monotone;
    return out;
}

}  // namespace fhharm
