#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "sswm/error.hpp"
#include "sswm/mutation.hpp"
#include "sswm/random.hpp"

namespace sswm {

/// Linear-interpolation quantile of sorted data (the "type 7" definition).
[[nodiscard]] inline double quantile_sorted(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw domain_error("quantile of empty data");
    const double h = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

[[nodiscard]] inline double mean_of(std::span<const double> v) {
    detail::CompensatedSum s;
    for (double x : v) s.add(x);
    return s.value() / static_cast<double>(v.size());
}

struct ConfidenceInterval {
    double low;
    double high;
};

/// Percentile bootstrap interval for the mean. Deterministic given `seed`.
[[nodiscard]] inline ConfidenceInterval bootstrap_mean_ci(std::span<const double> v, std::size_t resamples = 10000,
                                                          double level = 0.95, std::uint64_t seed = 0xB007) {
    if (v.empty()) throw domain_error("bootstrap of empty data");
    Rng rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, v.size() - 1);
    std::vector<double> means(resamples);
    for (auto& m : means) {
        double s = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) s += v[pick(rng)];
        m = s / static_cast<double>(v.size());
    }
    std::sort(means.begin(), means.end());
    const double a = (1.0 - level) / 2.0;
    return {quantile_sorted(means, a), quantile_sorted(means, 1.0 - a)};
}

/// P(X <= k) for X ~ Binomial(trials, p).
[[nodiscard]] inline double binomial_cdf(std::size_t k, std::size_t trials, double p) {
    if (k >= trials) return 1.0;
    if (p <= 0.0) return 1.0;
    if (p >= 1.0) return 0.0;
    detail::CompensatedSum s;
    for (std::size_t i = 0; i <= k; ++i)
        s.add(std::exp(detail::log_binomial(trials, i) + static_cast<double>(i) * std::log(p) +
                       static_cast<double>(trials - i) * std::log1p(-p)));
    return std::min(1.0, s.value());
}

/// Smallest k with P(X <= k) >= confidence: the largest success count still
/// consistent with a true rate of `p`.
[[nodiscard]] inline std::size_t binomial_upper_band(std::size_t trials, double p, double confidence = 0.99) {
    for (std::size_t k = 0; k <= trials; ++k)
        if (binomial_cdf(k, trials, p) >= confidence) return k;
    return trials;
}

/// Largest k with P(X >= k) >= confidence.
[[nodiscard]] inline std::size_t binomial_lower_band(std::size_t trials, double p, double confidence = 0.99) {
    for (std::size_t k = trials + 1; k-- > 0;) {
        const double tail = k == 0 ? 1.0 : 1.0 - binomial_cdf(k - 1, trials, p);
        if (tail >= confidence) return k;
    }
    return 0;
}

/// Growth model g(n) for scaling fits.
struct GrowthModel {
    enum class Kind { n, n_log_n, power } kind = Kind::n;
    double exponent = 1.0; // for power: g(n) = n^exponent

    static GrowthModel linear() { return {Kind::n, 1.0}; }
    static GrowthModel n_log_n() { return {Kind::n_log_n, 1.0}; }
    static GrowthModel power(double e) { return {Kind::power, e}; }

    [[nodiscard]] double operator()(double n) const {
        switch (kind) {
        case Kind::n: return n;
        case Kind::n_log_n: return n * std::log(n);
        case Kind::power: return std::pow(n, exponent);
        }
        return n;
    }
};

struct ScalingFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

struct ScalingPoint {
    double n;
    double value;
};

/// Least-squares line through (log g(n), log value). Slope 1 means value ~ c g(n).
[[nodiscard]] inline ScalingFit scaling_fit(std::span<const ScalingPoint> points, GrowthModel g) {
    if (points.size() < 3) throw domain_error("scaling_fit needs at least 3 points");
    std::vector<double> xs, ys;
    for (const auto& p : points) {
        const double gx = g(p.n);
        if (!(p.value > 0.0) || !(gx > 0.0)) throw domain_error("scaling_fit needs positive values");
        xs.push_back(std::log(gx));
        ys.push_back(std::log(p.value));
    }
    const double mx = mean_of(xs), my = mean_of(ys);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0.0) throw domain_error("scaling_fit needs distinct n");
    ScalingFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    // A constant series is fitted exactly by a flat line.
    f.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return f;
}

} // namespace sswm
