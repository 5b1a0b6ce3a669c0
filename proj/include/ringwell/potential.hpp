#ifndef RINGWELL_POTENTIAL_HPP
#define RINGWELL_POTENTIAL_HPP

#include <optional>
#include <string>
#include <vector>

#include "ringwell/errors.hpp"
#include "ringwell/numerics.hpp"

namespace ringwell {

/// Weight convention used by the bond measure.
///
/// exact  - annulus weights carry the cumulative well depth integrated from
///          the potential itself: exp(beta * U_n) with U_n = 1/2 - 2^-(n+1).
/// paper  - annulus weights carry the relative factor exp(-3 beta / 2^(n+1))
///          with the background assigned the full deficit exp(-3 beta / 2).
///          The two conventions describe the same family of distributions
///          under beta -> 3 beta (paper at beta == exact at 3 beta).
enum class Mode { exact, paper };

inline const char* to_string(Mode m) { return m == Mode::exact ? "exact" : "paper"; }

struct ModelParams {
    double epsilon = 0.1; ///< base width in (0,1), with epsilon^3 < pi/4
    int truncation = 8;   ///< deepest well index N >= 2
    Mode mode = Mode::exact;

    void validate() const;
};

enum class WellCharacter { ferromagnetic, antiferromagnetic };

inline const char* to_string(WellCharacter c) {
    return c == WellCharacter::ferromagnetic ? "F" : "AF";
}

/// One nested well of the circle potential. Widths shrink
/// triple-exponentially, so only the log of the half-width is stored;
/// the raw half-width underflows around n = 6 already for epsilon = 0.1.
struct Well {
    int index = 0;                 ///< n >= 1
    WellCharacter character{};     ///< even n: F (center 0), odd n: AF (center pi)
    double center = 0.0;           ///< 0 or pi
    double log_half_width = 0.0;   ///< 3^n * ln(epsilon)
    double depth = 0.0;            ///< U_n = 1/2 - 2^-(n+1)
};

/// The ordered family of nested wells, i.e. the step potential in
/// tabulated form. A point in well n is also in every shallower well of the
/// same character, so the depth stored per well is the cumulative sum of the
/// step coefficients, which telescopes to 1/2 - 2^-(n+1).
struct WellLedger {
    ModelParams params;
    std::vector<Well> wells; ///< indices 1..truncation, ascending

    const Well& well(int n) const { return wells.at(static_cast<size_t>(n - 1)); }
    int truncation() const { return params.truncation; }

    /// -ln(epsilon), the natural log-width scale.
    double c_eps() const { return -std::log(params.epsilon); }
};

/// Step coefficient of well n: 1/4 for n = 1, 3/2^(n+1) for n >= 2.
double well_coefficient(int n);

/// Build the ledger for the given parameters.
/// Throws InvalidParams if the parameter invariants do not hold.
WellLedger build_ledger(const ModelParams& params);

/// Largest well index containing angle x, or nullopt if x lies in no well.
/// Membership is tested in log domain: ln(circle distance) vs log half-width.
std::optional<int> deepest_containing_well(const WellLedger& ledger, double x);

/// U(x): depth of the deepest ledger well containing x, 0 outside all wells.
double evaluate_potential(const WellLedger& ledger, double x);

/// Ledger as a JSON string for debugging; depths and log half-widths are
/// emitted as decimal strings with full precision.
std::string ledger_to_json(const WellLedger& ledger);

} // namespace ringwell

#endif
