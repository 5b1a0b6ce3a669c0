#ifndef RINGWELL_ACCEPTANCE_HPP
#define RINGWELL_ACCEPTANCE_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ringwell {

/// Thresholds of the verification suite. Defaults are the contract; they are
/// exposed only so a caller can demonstrate that tightening one makes the
/// corresponding criterion fail.
struct AcceptanceConfig {
    // 1: alternation along the schedule
    double alternation_min_abs_op = 0.9;
    int alternation_abs_op_from = 5;
    // 2: peak mass
    double peak_mass_delta = 0.01;
    int peak_mass_n0_max = 5;
    double peak_mass_tail = 1e-6;
    int peak_mass_tail_from = 12;
    // 3: closed-form minimizer vs numeric argmin
    double nmax_rel_tol = 1e-9;
    // 4: offset identities
    double offset_rel_tol = 1e-12;
    // 5: ratio bound
    double ratio_c_min = 1.0;
    double ratio_limit_rel_tol = 0.05;
    // 6: convexity
    double convexity_floor_slack = 1e-9;
    // 7: quadrature cross-check
    double quadrature_rel_tol = 1e-8;
    // 8: MCMC vs exact bond histogram
    double mcmc_tv_tol = 0.02;
    long mcmc_sweeps = 1000000;
    // 9: correlation factorization
    double correlation_sigmas = 3.0;
    int correlation_chains = 100000;
    // 10: d = 2 demonstration (reported, not gated)
    long d2_sweeps = 8000;
    int d2_side = 32;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool gating = true;
    bool pass = false;
    double seconds = 0.0;
    std::string details;
};

struct AcceptanceReport {
    std::vector<CriterionResult> criteria;
    bool all_gating_passed = false;
};

/// Runs every criterion, printing one pass/fail line per criterion to `os`.
AcceptanceReport run_acceptance(const AcceptanceConfig& config, std::ostream& os);

/// Machine-readable verdict.
std::string acceptance_report_json(const AcceptanceReport& report,
                                   const AcceptanceConfig& config);

} // namespace ringwell

#endif
