#include "ringwell/potential.hpp"

#include <cmath>
#include <sstream>

#include "ringwell/csv.hpp"

#include <json.hpp>

namespace ringwell {

void ModelParams::validate() const {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw InvalidParams("epsilon must lie in (0,1), got " + std::to_string(epsilon));
    // Outermost wells must be disjoint and well inside the circle halves.
    const double pi_quarter = std::numbers::pi / 4.0;
    if (!(epsilon * epsilon * epsilon < pi_quarter))
        throw InvalidParams("epsilon^3 must be < pi/4, got epsilon = " + std::to_string(epsilon));
    if (truncation < 2)
        throw InvalidParams("truncation must be >= 2, got " + std::to_string(truncation));
}

double well_coefficient(int n) {
    if (n == 1) return 0.25;
    return 3.0 * std::ldexp(1.0, -(n + 1));
}

WellLedger build_ledger(const ModelParams& params) {
    params.validate();
    WellLedger ledger;
    ledger.params = params;
    ledger.wells.reserve(static_cast<size_t>(params.truncation));
    const double log_eps = std::log(params.epsilon);
    for (int n = 1; n <= params.truncation; ++n) {
        Well w;
        w.index = n;
        w.character = (n % 2 == 0) ? WellCharacter::ferromagnetic
                                   : WellCharacter::antiferromagnetic;
        w.center = (n % 2 == 0) ? 0.0 : std::numbers::pi;
        w.log_half_width = std::pow(3.0, n) * log_eps;
        // Partial sums of the step coefficients telescope: U_n = 1/2 - 2^-(n+1).
        w.depth = 0.5 - std::ldexp(1.0, -(n + 1));
        ledger.wells.push_back(w);
    }
    return ledger;
}

namespace {

// Largest index of the given parity whose well contains a point at log
// distance log_d from the family center. Same-character wells nest, so the
// containing set is {start, start+2, ..., cutoff}; ascend until exclusion.
std::optional<int> deepest_in_family(const WellLedger& ledger, int start, double log_d) {
    const int trunc = ledger.truncation();
    if (start > trunc || log_d > ledger.well(start).log_half_width) return std::nullopt;
    int n = start;
    while (n + 2 <= trunc && log_d <= ledger.well(n + 2).log_half_width) n += 2;
    return n;
}

} // namespace

std::optional<int> deepest_containing_well(const WellLedger& ledger, double x) {
    // The two families are disjoint (epsilon^3 < pi/4), so at most one branch hits.
    const double d0 = circle_dist(x, 0.0);
    const double dpi = circle_dist(x, std::numbers::pi);
    const double log_d0 = std::log(d0);   // -inf at the center, which is fine
    const double log_dpi = std::log(dpi);
    if (auto f = deepest_in_family(ledger, 2, log_d0)) return f;
    return deepest_in_family(ledger, 1, log_dpi);
}

double evaluate_potential(const WellLedger& ledger, double x) {
    auto n = deepest_containing_well(ledger, x);
    return n ? ledger.well(*n).depth : 0.0;
}

std::string ledger_to_json(const WellLedger& ledger) {
    nlohmann::json j;
    j["epsilon"] = fmt17(ledger.params.epsilon);
    j["truncation"] = ledger.params.truncation;
    j["mode"] = to_string(ledger.params.mode);
    auto& arr = j["wells"] = nlohmann::json::array();
    for (const auto& w : ledger.wells) {
        nlohmann::json jw;
        jw["index"] = w.index;
        jw["character"] = to_string(w.character);
        jw["center"] = fmt17(w.center);
        jw["log_half_width"] = fmt17(w.log_half_width);
        jw["depth"] = fmt17(w.depth);
        arr.push_back(std::move(jw));
    }
    return j.dump(2);
}

} // namespace ringwell
