#ifndef RINGWELL_BOND_MEASURE_HPP
#define RINGWELL_BOND_MEASURE_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "ringwell/potential.hpp"

namespace ringwell {

enum class RegionKind { annulus, background };

/// A piece of the circle on which the potential is constant: either the set
/// of points in well n but not in well n+2 (an "annulus" of two arcs), or
/// the background outside wells 1 and 2. Arc lengths are carried as logs;
/// subtracting raw widths would underflow almost immediately.
struct Region {
    RegionKind kind = RegionKind::background;
    int well = 0;            ///< annulus index n; 0 for the background
    double log_measure = 0.0; ///< ln of total arc length
    double energy = 0.0;      ///< U on the region (exact convention)
};

/// Normalized single-bond Gibbs distribution over truncation annuli plus the
/// background, at inverse temperature beta. All arithmetic is done in log
/// domain; probabilities are exp(log_weight - log_partition).
struct BondDistribution {
    double beta = 0.0;
    Mode mode = Mode::exact;
    std::vector<Region> regions;       ///< annuli 1..N, then background
    std::vector<double> log_weights;   ///< per region
    double log_partition = 0.0;        ///< log-sum-exp of the weights
    std::vector<double> probabilities; ///< normalized masses

    const Region& background() const { return regions.back(); }
    double background_probability() const { return probabilities.back(); }
    /// Probability of annulus n (1-based).
    double annulus_probability(int n) const {
        return probabilities.at(static_cast<size_t>(n - 1));
    }
    double annulus_log_prob(int n) const {
        return log_weights.at(static_cast<size_t>(n - 1)) - log_partition;
    }
    /// ln(1 - P_n) = logsumexp of every other weight minus the partition,
    /// exact in log domain even when P_n rounds to 1.
    double log_complement(int n) const;
};

struct ArgmaxResult {
    int well = 0;                     ///< most probable annulus index
    bool degenerate = false;          ///< top two annuli within 1e-9 in log weight
    bool background_dominates = false; ///< background outweighs every annulus
};

struct ScheduleEntry {
    int n = 0;
    double beta = 0.0;
    bool corrected = false; ///< closed form failed verification, bisection used
    bool degenerate = false;
    WellCharacter character{};
};

/// Sequence (n, beta_n) pinning the dominant well to index n;
/// strictly increasing in both coordinates, each entry verified.
struct TemperatureSchedule {
    Mode mode = Mode::exact;
    std::vector<ScheduleEntry> entries;
};

/// A sampled circle angle in symbolic form. The symbolic fields are exact;
/// numeric_angle collapses to the well center once center +- exp(offset)
/// rounds to the center, which is unavoidable and documented.
struct BondSample {
    RegionKind kind = RegionKind::background;
    int well = 0;          ///< annulus index, 0 for background
    int side = +1;         ///< +1 or -1: which arc of the region
    double fraction = 0.0; ///< uniform position along the arm, in [0,1)
    double numeric_angle = 0.0; ///< best-effort floating angle in [0, 2pi)
};

/// The geometric regions of the ledger: annuli 1..N then the background.
std::vector<Region> make_regions(const WellLedger& ledger);

/// ln(measure) + beta * energy in exact mode. In paper mode the energy term
/// is the relative deficit: -3 beta / 2^(n+1) for annulus n and -3 beta / 2
/// for the background, so that paper(beta) equals exact(3 beta) region by
/// region up to an n-independent shift.
double log_region_weight(const WellLedger& ledger, const Region& region, double beta);

/// Normalized distribution at beta >= 0. Throws OverflowError if a log
/// weight leaves the finite range (requires beta beyond ~1e300).
BondDistribution bond_distribution(const WellLedger& ledger, double beta);

/// Most probable annulus (background excluded from candidacy but reported
/// when it dominates). Degenerate when the top two annuli are within 1e-9.
ArgmaxResult argmax_well(const WellLedger& ledger, double beta);

/// The beta at which annuli n and n+1 carry equal log weight, located by
/// monotone bisection. Requires n+1 <= truncation - 2.
double transition_beta(const WellLedger& ledger, int n);

/// Schedule pinning wells n_lo..n_hi via the mode's stationarity formula
/// (paper: beta_n = c_eps (2/3)(ln3/ln2) 6^n; exact: beta_n = 2 c_eps
/// (ln3/ln2) 6^n). Entries are re-verified through argmax_well; a failing
/// entry is replaced by the midpoint of the adjacent transition betas.
/// Throws ScheduleInfeasible if the correction also fails.
TemperatureSchedule beta_schedule(const WellLedger& ledger, int n_lo, int n_hi);

/// E[cos x] under the bond distribution. Annuli contribute +-(mass *
/// cos-correction) depending on character; the background contributes
/// (2 sin eps_1 - 2 sin eps_2) / Z.
double order_parameter(const WellLedger& ledger, double beta);
double order_parameter(const BondDistribution& dist, const WellLedger& ledger);

/// Draw one bond angle: region by inverse CDF on the masses, side uniform,
/// fraction uniform in [0,1).
BondSample sample_bond(const WellLedger& ledger, const BondDistribution& dist,
                       std::mt19937_64& rng);
BondSample sample_bond(const WellLedger& ledger, double beta, std::mt19937_64& rng);

} // namespace ringwell

#endif
