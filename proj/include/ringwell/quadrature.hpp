#ifndef RINGWELL_QUADRATURE_HPP
#define RINGWELL_QUADRATURE_HPP

#include <vector>

namespace ringwell {

/// Independent verification path for the log-domain engine. Everything here
/// works from (epsilon, truncation, beta) alone with raw double widths, so
/// it is only usable in the moderate regime where eps^(3^N) does not
/// underflow; the exact engine is checked against it there.
namespace quadrature {

/// U(x) by direct summation of the step coefficients: 1/4 for well 1,
/// 3/2^(n+1) for well n >= 2, indicator tests against raw widths.
double brute_potential(double x, double epsilon, int truncation);

struct RegionMasses {
    std::vector<double> probability; ///< annuli 1..N then background
    double total = 0.0;              ///< unnormalized partition integral
};

/// Region probabilities of exp(beta U(x)) dx over the circle: the circle is
/// split at every well boundary and each panel is integrated by adaptive
/// Simpson with brute_potential as the integrand.
RegionMasses region_masses(double epsilon, int truncation, double beta,
                           double tol = 1e-12);

/// Adaptive Simpson integral of exp(beta * brute_potential) over [a, b].
double integrate_boltzmann(double a, double b, double epsilon, int truncation,
                           double beta, double tol = 1e-12);

} // namespace quadrature
} // namespace ringwell

#endif
