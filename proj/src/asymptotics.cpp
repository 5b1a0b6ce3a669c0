#include "ringwell/asymptotics.hpp"

#include <cmath>
#include <ostream>

#include "ringwell/csv.hpp"

namespace ringwell {

SeparatedWellsModel SeparatedWellsModel::from_epsilon(double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw InvalidParams("epsilon must lie in (0,1)");
    SeparatedWellsModel m;
    m.c_eps = -std::log(epsilon);
    return m;
}

double f_paper(int n, double beta, const WellLedger& ledger) {
    if (n < 1 || n > ledger.truncation() - 2)
        throw InvalidParams("f_paper requires 1 <= n <= truncation-2");
    const double c = ledger.c_eps();
    // ln(eps_n - eps_{n+2}) = -c 3^n + ln(1 - exp(-8 c 3^n))
    const double log_width =
        ledger.well(n).log_half_width + log1mexp(8.0 * c * std::pow(3.0, n));
    return 3.0 * beta * std::ldexp(1.0, -(n + 1)) - log_width;
}

double f_tilde(double n, double beta, const SeparatedWellsModel& model) {
    return 3.0 * beta * std::exp2(-(n + 1.0)) + model.c_eps * std::pow(3.0, n);
}

NmaxResult n_max_closed(double beta, const SeparatedWellsModel& model) {
    const double arg = 3.0 * beta * std::numbers::ln2 / (2.0 * model.c_eps * ln_3);
    if (!(arg > 0.0)) throw InvalidParams("beta must be positive");
    NmaxResult r;
    r.continuous = std::log(arg) / std::log(6.0);
    // one-ulp slack: the schedule beta for n = 1 lands exactly on the boundary
    if (r.continuous < 1.0 - 1e-9)
        throw InvalidParams("continuous n_max below 1 at beta = " + std::to_string(beta));
    r.floor_n = static_cast<int>(std::floor(r.continuous));
    r.ceil_n = static_cast<int>(std::ceil(r.continuous));
    r.f_floor = f_tilde(r.floor_n, beta, model);
    r.f_ceil = f_tilde(r.ceil_n, beta, model);
    return r;
}

double n_max_numeric(double beta, const SeparatedWellsModel& model, double n_lo,
                     double n_hi) {
    // f_tilde is strictly convex, so the central-difference slope is a
    // strictly increasing function of n with a single sign change.
    const double h = 1e-6;
    auto slope = [&](double n) {
        return f_tilde(n + h, beta, model) - f_tilde(n - h, beta, model);
    };
    double lo = n_lo, hi = n_hi;
    if (slope(lo) >= 0.0) return lo;
    if (slope(hi) <= 0.0) return hi;
    for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        (slope(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double offset_free_energy(int n_max, int k, const SeparatedWellsModel& model, int side) {
    if (k < 0) throw InvalidParams("offset k must be >= 0");
    if (side != +1 && side != -1) throw InvalidParams("side must be +-1");
    if (side < 0 && n_max - k < 1)
        throw InvalidParams("offset n_max - k must stay >= 1");
    const double kk = static_cast<double>(k);
    const double beta_term = std::exp2(side > 0 ? -kk : kk) * model.a;
    const double width_term = std::pow(3.0, side > 0 ? kk : -kk);
    return std::pow(3.0, n_max) * model.c_eps * (beta_term + width_term);
}

double ratio_exponent(int n_max, const SeparatedWellsModel& model) {
    const double plus = offset_free_energy(n_max, 1, model, +1);
    const double minus = n_max >= 2 ? offset_free_energy(n_max, 1, model, -1)
                                    : std::numeric_limits<double>::infinity();
    const double at_min = offset_free_energy(n_max, 0, model, +1);
    return std::min(plus, minus) - at_min;
}

ConvexityReport convexity_check(const SeparatedWellsModel& model, double beta,
                                int n_lo, int n_hi) {
    if (n_lo < 1 || n_hi <= n_lo) throw InvalidParams("bad convexity range");
    ConvexityReport rep;
    rep.min_second_difference = std::numeric_limits<double>::infinity();
    for (int n = n_lo + 1; n < n_hi; ++n) {
        const double d2 = f_tilde(n + 1, beta, model) - 2.0 * f_tilde(n, beta, model) +
                          f_tilde(n - 1, beta, model);
        if (d2 <= 0.0) rep.all_positive = false;
        if (d2 < rep.min_second_difference) {
            rep.min_second_difference = d2;
            rep.argmin_n = n;
        }
    }
    return rep;
}

void write_offset_table(std::ostream& os, const SeparatedWellsModel& model,
                        int n_max_hi, int k_hi) {
    os << "n_max,k,side,closed_form,direct,abs_diff\n";
    for (int n_max = 1; n_max <= n_max_hi; ++n_max) {
        const double beta = model.schedule_beta(n_max);
        for (int k = 0; k <= k_hi; ++k) {
            for (int side : {+1, -1}) {
                if (side < 0 && (n_max - k < 1 || k == 0)) continue;
                const double closed = offset_free_energy(n_max, k, model, side);
                const double direct = f_tilde(n_max + side * k, beta, model);
                os << n_max << ',' << k << ',' << (side > 0 ? '+' : '-') << ','
                   << fmt17(closed) << ',' << fmt17(direct) << ','
                   << fmt17(std::fabs(closed - direct)) << '\n';
            }
        }
    }
}

} // namespace ringwell
