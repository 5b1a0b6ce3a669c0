#ifndef RINGWELL_ASYMPTOTICS_HPP
#define RINGWELL_ASYMPTOTICS_HPP

#include <iosfwd>

#include "ringwell/potential.hpp"

namespace ringwell {

/// Constants of the separated-wells approximation.
struct SeparatedWellsModel {
    double c_eps = 0.0; ///< -ln(epsilon)
    double a = ln_3 / std::numbers::ln2;

    static SeparatedWellsModel from_epsilon(double epsilon);
    static SeparatedWellsModel from_ledger(const WellLedger& ledger) {
        return from_epsilon(ledger.params.epsilon);
    }

    /// Schedule beta pinning the continuous minimizer of f_tilde to n.
    double schedule_beta(double n) const {
        return c_eps * (2.0 / 3.0) * a * std::pow(6.0, n);
    }
};

/// Well free energy with the true annulus width:
/// 3 beta / 2^(n+1) - ln(eps_n - eps_{n+2}), subtraction done in log domain.
double f_paper(int n, double beta, const WellLedger& ledger);

/// Separated-wells free energy 3 beta / 2^(n+1) + c_eps 3^n,
/// defined for continuous n.
double f_tilde(double n, double beta, const SeparatedWellsModel& model);

struct NmaxResult {
    double continuous = 0.0; ///< log6(3 beta ln2 / (2 c_eps ln3))
    int floor_n = 0;
    int ceil_n = 0;
    double f_floor = 0.0; ///< f_tilde at the floor candidate
    double f_ceil = 0.0;
};

/// Closed-form minimizer of f_tilde over continuous n, plus the two integer
/// candidates with their f_tilde values. Throws InvalidParams when the
/// continuous solution falls below 1.
NmaxResult n_max_closed(double beta, const SeparatedWellsModel& model);

/// Numeric minimizer of f_tilde over continuous n: bisection on the
/// central-difference derivative (h = 1e-6). Independent of the closed form.
double n_max_numeric(double beta, const SeparatedWellsModel& model,
                     double n_lo = 0.25, double n_hi = 64.0);

/// f_tilde(n_max +- k) at the schedule beta for n_max, in closed form:
/// 3^n_max * c_eps * (2^(-+k) a + 3^(+-k)). side = +1 or -1.
double offset_free_energy(int n_max, int k, const SeparatedWellsModel& model, int side);

/// Largest c with f_tilde(n_max +- k) - f_tilde(n_max) >= c k for all k >= 1
/// at the schedule beta; by convexity the k = 1 gap on the shallower side:
/// 3^n_max * c_eps * (a - 2/3).
double ratio_exponent(int n_max, const SeparatedWellsModel& model);

struct ConvexityReport {
    bool all_positive = true;
    double min_second_difference = 0.0;
    int argmin_n = 0;
};

/// Discrete second differences f(n+1) - 2 f(n) + f(n-1) over [n_lo, n_hi].
ConvexityReport convexity_check(const SeparatedWellsModel& model, double beta,
                                int n_lo, int n_hi);

/// CSV table comparing the closed-form offsets against direct f_tilde
/// evaluation: columns n_max, k, side, closed_form, direct, abs_diff.
void write_offset_table(std::ostream& os, const SeparatedWellsModel& model,
                        int n_max_hi, int k_hi);

} // namespace ringwell

#endif
