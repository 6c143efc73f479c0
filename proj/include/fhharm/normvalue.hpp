/*
 * normvalue.hpp -- carrier for norm-like quantities that are either exact
 * (a rational, always the *squared* quantity so sphere integrals stay in Q)
 * or approximate (extended-precision float with a declared relative error).
 * Sampled suprema are additionally flagged as lower estimates: they bound
 * the true value from below and only improve with more samples.
 */
#pragma once

#include <optional>
#include <string>

#include "fhharm/bigfloat.hpp"
#include "fhharm/rational.hpp"

namespace fhharm {

enum class NormMode { Exact, Approximate };

struct NormValue {
    NormMode mode = NormMode::Approximate;

    // Exact mode: the squared quantity as a rational.
    Rational exact_squared{0};

    // Approximate mode: the value itself plus a declared relative error bound.
    BigFloat approx{};
    double rel_error = 0.0;

    // True when the value is a sampled lower estimate of a supremum.
    bool is_lower_estimate = false;

    // Sampling resolution for sampled estimates (0 = not sampled).
    unsigned long samples = 0;

    static NormValue exact_sq(Rational sq) {
        NormValue v;
        v.mode = NormMode::Exact;
        v.exact_squared = std::move(sq);
        v.approx = bf_sqrt(BigFloat::from_rational(v.exact_squared));
        v.rel_error = 1e-75;  // one sqrt at 256-bit
        return v;
    }

    static NormValue approximate(BigFloat val, double rel_err, bool lower_estimate = false) {
        NormValue v;
        v.mode = NormMode::Approximate;
        v.approx = std::move(val);
        v.rel_error = rel_err;
        v.is_lower_estimate = lower_estimate;
        return v;
    }

    const BigFloat& value() const { return approx; }
    double value_d() const { return approx.to_double(); }
};

}  // namespace fhharm
