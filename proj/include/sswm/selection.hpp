#pragma once

#include <cmath>
#include <string>

#include "sswm/error.hpp"

namespace sswm {

/// Scaled population size N (real, >= 1) and selection strength beta (> 0).
///
/// N is deliberately real-valued: the interesting settings (N*beta = ln(11n)/2,
/// N*beta = ln n with beta = n^{-3/2}) are not integers. The analytic bound
/// envelope is only proven for integer N.
struct SelectionParams {
    double N = 1.0;
    double beta = 1.0;
    bool strict_beta = false;

    void validate() const {
        if (!(N >= 1.0) || !std::isfinite(N))
            throw domain_error("selection: N must be a finite real >= 1, got " + std::to_string(N));
        if (!(beta > 0.0) || !std::isfinite(beta))
            throw domain_error("selection: beta must be a finite real > 0, got " + std::to_string(beta));
        if (strict_beta && beta > 1.0)
            throw domain_error("selection: beta > 1 rejected in strict mode, got " + std::to_string(beta));
    }

    /// beta above the nominal range (0,1]; callers surface this as a warning.
    [[nodiscard]] bool exceeds_nominal_beta() const noexcept { return beta > 1.0; }

    [[nodiscard]] double n_beta() const noexcept { return N * beta; }

    static SelectionParams from_n_beta(double n_beta, double beta, bool strict = false) {
        SelectionParams p{n_beta / beta, beta, strict};
        p.validate();
        return p;
    }
};

/// Fitness difference f(y) - f(x). Any finite real.
struct FitnessDelta {
    double value = 0.0;
    constexpr explicit FitnessDelta(double v) noexcept : value(v) {}
};

/// ln(11 n) / 2: the population-size threshold above which SSWM climbs OneMax efficiently.
[[nodiscard]] inline double threshold_n_beta(double n) { return 0.5 * std::log(11.0 * n); }

namespace detail {

// log(1 - exp(-a)) for a > 0, accurate over the whole range.
inline double log1mexp(double a) {
    constexpr double ln2 = 0.693147180559945309417;
    return a <= ln2 ? std::log(-std::expm1(-a)) : std::log1p(-std::exp(-a));
}

// Below this 2*N*beta*df the direct ratio would overflow e^{-2N beta df}.
inline constexpr double log_domain_cutoff = -700.0;

inline double p_fix_unchecked(double df, double N, double beta) noexcept {
    if (N == 1.0) return 1.0;
    if (df == 0.0) return 1.0 / N;
    const double x = 2.0 * beta * df;
    const double y = N * x;
    if (y < log_domain_cutoff) {
        // e^{x(N-1)} (1 - e^x) / (1 - e^y), every factor bounded.
        return std::exp(x * (N - 1.0)) * (std::expm1(x) / std::expm1(y));
    }
    // expm1 keeps full relative precision for |x| < 1e-4 where 1 - e^{-x} cancels.
    const double p = std::expm1(-x) / std::expm1(-y);
    return p > 1.0 ? 1.0 : p;
}

} // namespace detail

/// Fixation probability of a mutant with fitness advantage `delta`:
///     (1 - e^{-2 beta df}) / (1 - e^{-2 N beta df}),
/// with p(0) = 1/N and p == 1 identically for N == 1.
[[nodiscard]] inline double p_fix(FitnessDelta delta, const SelectionParams& params) {
    params.validate();
    return detail::p_fix_unchecked(delta.value, params.N, params.beta);
}

/// Natural log of p_fix; finite wherever p_fix underflows to 0.
[[nodiscard]] inline double log_p_fix(FitnessDelta delta, const SelectionParams& params) {
    params.validate();
    if (params.N == 1.0) return 0.0;
    const double df = delta.value;
    if (df == 0.0) return -std::log(params.N);
    const double x = 2.0 * params.beta * df;
    const double y = params.N * x;
    if (df > 0.0) return detail::log1mexp(x) - detail::log1mexp(y);
    return x * (params.N - 1.0) + detail::log1mexp(-x) - detail::log1mexp(-y);
}

struct PfixBounds {
    double lower;
    double upper; // a bound, may exceed 1
};

/// Analytic envelope lower <= p_fix <= upper.
///
///   df >= 0:  2b df / (1 + 2b df)   <=  p  <=  2b df / (1 - e^{-2N b df})
///   df <  0:  -2b df / e^{-2N b df} <=  p  <=  e^{-2b df} / (e^{-2N b df} - 1)
///
/// At df == 0 the upper bound is its limit 1/N (the formula is 0/0 there).
[[nodiscard]] inline PfixBounds p_fix_bounds(FitnessDelta delta, const SelectionParams& params) {
    params.validate();
    const double df = delta.value;
    const double x = 2.0 * params.beta * df;
    const double y = params.N * x;
    if (df == 0.0) return {0.0, 1.0 / params.N};
    if (df > 0.0) return {x / (1.0 + x), x / -std::expm1(-y)};
    // e^{-x}/(e^{-y}-1) rewritten as e^{x(N-1)}/(1-e^{y}) so nothing overflows.
    const double lower = -x * std::exp(y);
    const double upper = std::exp(x * (params.N - 1.0)) / -std::expm1(y);
    if (!std::isfinite(upper)) throw domain_error("p_fix_bounds: upper bound undefined for this delta");
    return {lower, upper};
}

} // namespace sswm
