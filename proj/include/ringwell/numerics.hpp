#ifndef RINGWELL_NUMERICS_HPP
#define RINGWELL_NUMERICS_HPP

#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

namespace ringwell {

inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr double ln_3 = 1.0986122886681098; // nearest double to ln 3
inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();

/// Wrap an angle into [0, 2*pi).
inline double wrap_angle(double x) {
    double y = std::fmod(x, two_pi);
    if (y < 0.0) y += two_pi;
    // fmod can return exactly two_pi after the correction when x is a tiny
    // negative value; fold that back to 0.
    if (y >= two_pi) y = 0.0;
    return y;
}

/// Shortest arc distance between two angles, in [0, pi].
inline double circle_dist(double x, double center) {
    return std::fabs(std::remainder(x - center, two_pi));
}

/// log(sum_i exp(v_i)) with the usual max shift. Empty input -> -inf.
inline double log_sum_exp(std::span<const double> v) {
    double m = neg_inf;
    for (double x : v)
        if (x > m) m = x;
    if (!std::isfinite(m)) return m; // all -inf (or empty)
    double s = 0.0;
    for (double x : v) s += std::exp(x - m);
    return m + std::log(s);
}

inline double log_sum_exp(const std::vector<double>& v) {
    return log_sum_exp(std::span<const double>(v.data(), v.size()));
}

/// log(1 - exp(-x)) for x > 0, stable for both tiny and large x.
inline double log1mexp(double x) {
    // Crossover at ln 2 keeps both branches well conditioned.
    if (x <= 0.0) return neg_inf;
    if (x < std::numbers::ln2) return std::log(-std::expm1(-x));
    return std::log1p(-std::exp(-x));
}

/// (sin(hi) - sin(lo)) / (hi - lo) for 0 <= lo < hi, the mean of cos over
/// [lo, hi]. Equals cos(xi) for some xi in (lo, hi); for hi below 1e-8 the
/// deviation from 1 is < 1e-16 and we return 1 exactly.
inline double cos_mean_over_arc(double lo, double hi) {
    if (hi < 1e-8) return 1.0;
    // sin a - sin b = 2 cos((a+b)/2) sin((a-b)/2), avoids cancellation.
    const double half_diff = 0.5 * (hi - lo);
    const double num = 2.0 * std::cos(0.5 * (hi + lo)) * std::sin(half_diff);
    return num / (hi - lo);
}

} // namespace ringwell

#endif
