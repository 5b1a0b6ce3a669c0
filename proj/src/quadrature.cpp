#include "ringwell/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ringwell/errors.hpp"
#include "ringwell/numerics.hpp"

namespace ringwell::quadrature {

namespace {

double raw_width(double epsilon, int n) { return std::pow(epsilon, std::pow(3.0, n)); }

double step_coefficient(int n) {
    return n == 1 ? 0.25 : 3.0 * std::ldexp(1.0, -(n + 1));
}

// U at distance t from the given family center, summed directly from the
// step coefficients. Local coordinates keep arcs of width 1e-57 resolvable;
// as absolute angles they would round into the center itself.
double local_potential(double t, bool center_is_zero, double epsilon, int truncation) {
    double u = 0.0;
    for (int n = 1; n <= truncation; ++n) {
        const bool well_at_zero = (n % 2 == 0);
        const double d = well_at_zero == center_is_zero ? t : std::numbers::pi - t;
        if (d <= raw_width(epsilon, n)) u += step_coefficient(n);
    }
    return u;
}

struct Simpson {
    double epsilon;
    int truncation;
    double beta;
    bool center_is_zero;

    double f(double t) const {
        return std::exp(beta * local_potential(t, center_is_zero, epsilon, truncation));
    }

    double recurse(double a, double b, double fa, double fm, double fb, double whole,
                   double tol, int depth) const {
        const double m = 0.5 * (a + b);
        const double flm = f(0.5 * (a + m)), frm = f(0.5 * (m + b));
        const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        const double delta = left + right - whole;
        if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
            return left + right + delta / 15.0;
        return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
               recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
    }

    double integrate(double a, double b, double tol) const {
        if (b <= a) return 0.0;
        const double m = 0.5 * (a + b);
        const double fa = f(a), fm = f(m), fb = f(b);
        const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        return recurse(a, b, fa, fm, fb, whole, tol, 52);
    }
};

} // namespace

double brute_potential(double x, double epsilon, int truncation) {
    double u = 0.0;
    for (int n = 1; n <= truncation; ++n) {
        const double center = (n % 2 == 0) ? 0.0 : std::numbers::pi;
        if (circle_dist(x, center) <= raw_width(epsilon, n)) u += step_coefficient(n);
    }
    return u;
}

double integrate_boltzmann(double a, double b, double epsilon, int truncation,
                           double beta, double tol) {
    // Global-angle variant for moderate arcs (used on the background).
    struct Global {
        double epsilon;
        int truncation;
        double beta;
        double f(double x) const {
            return std::exp(beta * brute_potential(x, epsilon, truncation));
        }
    } g{epsilon, truncation, beta};
    // Straight adaptive Simpson over [a, b].
    struct Rec {
        const Global& g;
        double run(double a, double b, double fa, double fm, double fb, double whole,
                   double tol, int depth) const {
            const double m = 0.5 * (a + b);
            const double flm = g.f(0.5 * (a + m)), frm = g.f(0.5 * (m + b));
            const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            const double delta = left + right - whole;
            if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
                return left + right + delta / 15.0;
            return run(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
                   run(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
        }
    } rec{g};
    if (b <= a) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = g.f(a), fm = g.f(m), fb = g.f(b);
    return rec.run(a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 52);
}

RegionMasses region_masses(double epsilon, int truncation, double beta, double tol) {
    if (raw_width(epsilon, truncation) == 0.0)
        throw RegimeViolation("raw width underflows; quadrature oracle unusable here");

    RegionMasses rm;
    rm.probability.assign(static_cast<size_t>(truncation) + 1, 0.0);

    // Annulus n occupies distances (w_{n+2}, w_n] from its center, two arms.
    for (int n = 1; n <= truncation; ++n) {
        const double hi = raw_width(epsilon, n);
        const double lo = n + 2 <= truncation ? raw_width(epsilon, n + 2) : 0.0;
        Simpson s{epsilon, truncation, beta, n % 2 == 0};
        const double mass = 2.0 * s.integrate(lo, hi, tol * (hi - lo));
        rm.probability[static_cast<size_t>(n - 1)] = mass;
        rm.total += mass;
    }
    // Background: distances (w_2, pi - w_1] from the zero center, two arms.
    {
        const double w1 = raw_width(epsilon, 1), w2 = raw_width(epsilon, 2);
        Simpson s{epsilon, truncation, beta, true};
        const double a = w2, b = std::numbers::pi - w1;
        const double mass = 2.0 * s.integrate(a, b, tol * (b - a));
        rm.probability[static_cast<size_t>(truncation)] = mass;
        rm.total += mass;
    }
    for (double& p : rm.probability) p /= rm.total;
    return rm;
}

} // namespace ringwell::quadrature
