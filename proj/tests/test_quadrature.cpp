#include <doctest.h>

#include <cmath>

#include "ringwell/errors.hpp"
#include "ringwell/numerics.hpp"
#include "ringwell/quadrature.hpp"

using namespace ringwell;

TEST_CASE("brute potential step values") {
    CHECK(quadrature::brute_potential(std::numbers::pi / 2, 0.25, 4) == 0.0);
    CHECK(quadrature::brute_potential(std::numbers::pi, 0.25, 4) ==
          doctest::Approx(7.0 / 16.0)); // wells 1 and 3
    CHECK(quadrature::brute_potential(0.0, 0.25, 4) ==
          doctest::Approx(15.0 / 32.0)); // wells 2 and 4
    // just outside well 1
    const double e1 = std::pow(0.25, 3);
    CHECK(quadrature::brute_potential(std::numbers::pi + 1.01 * e1, 0.25, 4) == 0.0);
    CHECK(quadrature::brute_potential(std::numbers::pi + 0.99 * e1, 0.25, 4) ==
          doctest::Approx(0.25));
}

TEST_CASE("boltzmann integral over the whole circle at beta = 0 is 2 pi") {
    const double total = quadrature::integrate_boltzmann(0.0, two_pi, 0.25, 3, 0.0);
    CHECK(total == doctest::Approx(two_pi).epsilon(1e-12));
}

TEST_CASE("region masses at beta = 0 are arc-length fractions") {
    const double eps = 0.25;
    const auto rm = quadrature::region_masses(eps, 4, 0.0);
    CHECK(rm.total == doctest::Approx(two_pi).epsilon(1e-12));
    const double e1 = std::pow(eps, 3), e2 = std::pow(eps, 9), e3 = std::pow(eps, 27),
                 e4 = std::pow(eps, 81);
    CHECK(rm.probability[0] == doctest::Approx(2.0 * (e1 - e3) / two_pi).epsilon(1e-12));
    CHECK(rm.probability[1] == doctest::Approx(2.0 * (e2 - e4) / two_pi).epsilon(1e-12));
    CHECK(rm.probability[2] == doctest::Approx(2.0 * e3 / two_pi).epsilon(1e-12));
    CHECK(rm.probability[3] == doctest::Approx(2.0 * e4 / two_pi).epsilon(1e-12));
    CHECK(rm.probability[4] ==
          doctest::Approx((two_pi - 2.0 * e1 - 2.0 * e2) / two_pi).epsilon(1e-12));
}

TEST_CASE("masses scale with the boltzmann factor") {
    // annulus masses at beta vs beta = 0 differ by exp(beta U_n)
    const double eps = 0.2, beta = 30.0;
    const auto rm0 = quadrature::region_masses(eps, 4, 0.0);
    const auto rmb = quadrature::region_masses(eps, 4, beta);
    const double depth[] = {0.25, 0.375, 7.0 / 16.0, 15.0 / 32.0};
    for (int n = 1; n <= 4; ++n) {
        const double lhs = rmb.probability[static_cast<size_t>(n - 1)] * rmb.total;
        const double rhs = rm0.probability[static_cast<size_t>(n - 1)] * rm0.total *
                           std::exp(beta * depth[n - 1]);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
}

TEST_CASE("oracle refuses an unrepresentable regime") {
    CHECK_THROWS_AS(quadrature::region_masses(0.1, 8, 0.0), RegimeViolation);
}
