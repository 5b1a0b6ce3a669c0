#include "ringwell/bond_measure.hpp"

#include <algorithm>
#include <cmath>

namespace ringwell {

namespace {

// 8 * c_eps * 3^n is the exponent gap between eps_n and eps_{n+2}:
// eps_{n+2} = eps_n * exp(-8 c_eps 3^n).
double nested_width_exponent(const WellLedger& ledger, int n) {
    return 8.0 * ledger.c_eps() * std::pow(3.0, n);
}

} // namespace

std::vector<Region> make_regions(const WellLedger& ledger) {
    const int trunc = ledger.truncation();
    std::vector<Region> regions;
    regions.reserve(static_cast<size_t>(trunc) + 1);
    for (int n = 1; n <= trunc; ++n) {
        Region r;
        r.kind = RegionKind::annulus;
        r.well = n;
        r.energy = ledger.well(n).depth;
        // Arc length 2 (eps_n - eps_{n+2}) = 2 eps_n (1 - exp(-8 c_eps 3^n)),
        // or the full well 2 eps_n when n+2 lies beyond the truncation.
        r.log_measure = std::numbers::ln2 + ledger.well(n).log_half_width;
        if (n + 2 <= trunc) r.log_measure += log1mexp(nested_width_exponent(ledger, n));
        regions.push_back(r);
    }
    Region bg;
    bg.kind = RegionKind::background;
    bg.well = 0;
    bg.energy = 0.0;
    const double eps1 = std::exp(ledger.well(1).log_half_width);
    const double eps2 = std::exp(ledger.well(2).log_half_width);
    bg.log_measure = std::log(two_pi - 2.0 * eps1 - 2.0 * eps2);
    regions.push_back(bg);
    return regions;
}

double log_region_weight(const WellLedger& ledger, const Region& region, double beta) {
    if (ledger.params.mode == Mode::exact)
        return region.log_measure + beta * region.energy;
    // paper convention: relative deficit 3 beta / 2^(n+1), background 3 beta / 2.
    const double deficit = region.kind == RegionKind::annulus
                               ? 3.0 * std::ldexp(1.0, -(region.well + 1))
                               : 1.5;
    return region.log_measure - beta * deficit;
}

double BondDistribution::log_complement(int n) const {
    std::vector<double> others;
    others.reserve(log_weights.size() - 1);
    for (size_t i = 0; i < log_weights.size(); ++i)
        if (i != static_cast<size_t>(n - 1)) others.push_back(log_weights[i]);
    return log_sum_exp(others) - log_partition;
}

BondDistribution bond_distribution(const WellLedger& ledger, double beta) {
    if (beta < 0.0) throw InvalidParams("beta must be >= 0");
    BondDistribution dist;
    dist.beta = beta;
    dist.mode = ledger.params.mode;
    dist.regions = make_regions(ledger);
    dist.log_weights.reserve(dist.regions.size());
    for (const auto& r : dist.regions) {
        const double lw = log_region_weight(ledger, r, beta);
        if (!std::isfinite(lw))
            throw OverflowError("log weight left the representable range at beta = " +
                                std::to_string(beta));
        dist.log_weights.push_back(lw);
    }
    dist.log_partition = log_sum_exp(dist.log_weights);
    dist.probabilities.reserve(dist.log_weights.size());
    for (double lw : dist.log_weights)
        dist.probabilities.push_back(std::exp(lw - dist.log_partition));
    return dist;
}

ArgmaxResult argmax_well(const WellLedger& ledger, double beta) {
    const auto dist = bond_distribution(ledger, beta);
    const int trunc = ledger.truncation();
    int best = 1;
    for (int n = 2; n <= trunc; ++n)
        if (dist.log_weights[static_cast<size_t>(n - 1)] >
            dist.log_weights[static_cast<size_t>(best - 1)])
            best = n;
    double second = neg_inf;
    for (int n = 1; n <= trunc; ++n) {
        if (n == best) continue;
        second = std::max(second, dist.log_weights[static_cast<size_t>(n - 1)]);
    }
    ArgmaxResult res;
    res.well = best;
    res.degenerate =
        std::fabs(dist.log_weights[static_cast<size_t>(best - 1)] - second) < 1e-9;
    res.background_dominates =
        dist.log_weights.back() > dist.log_weights[static_cast<size_t>(best - 1)];
    return res;
}

double transition_beta(const WellLedger& ledger, int n) {
    if (n < 1 || n + 1 > ledger.truncation() - 2)
        throw InvalidParams("transition_beta requires 1 <= n and n+1 <= truncation-2");
    const auto regions = make_regions(ledger);
    const auto& a = regions[static_cast<size_t>(n - 1)];
    const auto& b = regions[static_cast<size_t>(n)];
    auto gap = [&](double beta) {
        return log_region_weight(ledger, b, beta) - log_region_weight(ledger, a, beta);
    };
    // gap(0) < 0 (widths shrink) and gap is strictly increasing in beta.
    double lo = 0.0, hi = 1.0;
    while (gap(hi) < 0.0) {
        lo = hi;
        hi *= 2.0;
        if (!std::isfinite(hi)) throw OverflowError("transition beta bracket overflow");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (gap(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

namespace {

double schedule_beta_formula(const WellLedger& ledger, int n) {
    const double a = ln_3 / std::numbers::ln2;
    const double c = ledger.c_eps();
    const double six_n = std::pow(6.0, n);
    return ledger.params.mode == Mode::paper ? c * (2.0 / 3.0) * a * six_n
                                             : 2.0 * c * a * six_n;
}

} // namespace

TemperatureSchedule beta_schedule(const WellLedger& ledger, int n_lo, int n_hi) {
    if (!(1 <= n_lo && n_lo < n_hi && n_hi <= ledger.truncation() - 2))
        throw InvalidParams("schedule range must satisfy 1 <= n_lo < n_hi <= truncation-2");
    TemperatureSchedule sched;
    sched.mode = ledger.params.mode;
    for (int n = n_lo; n <= n_hi; ++n) {
        ScheduleEntry e;
        e.n = n;
        e.beta = schedule_beta_formula(ledger, n);
        e.character = ledger.well(n).character;
        auto res = argmax_well(ledger, e.beta);
        if (res.well != n || res.degenerate) {
            // Any beta strictly between the adjacent transition points pins n.
            const double lo = n > 1 ? transition_beta(ledger, n - 1) : 0.0;
            const double hi = transition_beta(ledger, n);
            e.beta = 0.5 * (lo + hi);
            e.corrected = true;
            res = argmax_well(ledger, e.beta);
            if (res.well != n)
                throw ScheduleInfeasible("cannot pin well " + std::to_string(n) +
                                         "; epsilon too large");
        }
        e.degenerate = res.degenerate;
        sched.entries.push_back(e);
    }
    return sched;
}

double order_parameter(const BondDistribution& dist, const WellLedger& ledger) {
    const int trunc = ledger.truncation();
    double op = 0.0;
    for (int n = 1; n <= trunc; ++n) {
        const double p = dist.annulus_probability(n);
        if (p == 0.0) continue;
        const double hi = std::exp(ledger.well(n).log_half_width);
        const double lo = n + 2 <= trunc ? std::exp(ledger.well(n + 2).log_half_width) : 0.0;
        const double corr = cos_mean_over_arc(lo, hi);
        op += (n % 2 == 0 ? p : -p) * corr;
    }
    // Background: int of cos over the complement of wells 1 and 2 is
    // 2 sin eps_1 - 2 sin eps_2; divide by the arc to get the mean.
    const double eps1 = std::exp(ledger.well(1).log_half_width);
    const double eps2 = std::exp(ledger.well(2).log_half_width);
    const double bg_mean =
        (std::sin(eps1) - std::sin(eps2)) / (std::numbers::pi - eps1 - eps2);
    op += dist.background_probability() * bg_mean;
    return op;
}

double order_parameter(const WellLedger& ledger, double beta) {
    return order_parameter(bond_distribution(ledger, beta), ledger);
}

BondSample sample_bond(const WellLedger& ledger, const BondDistribution& dist,
                       std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double u = unit(rng);
    size_t idx = dist.probabilities.size() - 1;
    double cum = 0.0;
    for (size_t i = 0; i < dist.probabilities.size(); ++i) {
        cum += dist.probabilities[i];
        if (u < cum) {
            idx = i;
            break;
        }
    }
    BondSample s;
    const Region& r = dist.regions[idx];
    s.kind = r.kind;
    s.well = r.well;
    s.side = unit(rng) < 0.5 ? +1 : -1;
    s.fraction = unit(rng);
    if (r.kind == RegionKind::background) {
        // Two arcs (eps_2, pi - eps_1) and its mirror image.
        const double eps1 = std::exp(ledger.well(1).log_half_width);
        const double eps2 = std::exp(ledger.well(2).log_half_width);
        const double arm = eps2 + s.fraction * (std::numbers::pi - eps1 - eps2);
        s.numeric_angle = wrap_angle(static_cast<double>(s.side) * arm);
    } else {
        const int n = r.well;
        // Distance from the center is uniform on (eps_{n+2}, eps_n]:
        // d = eps_n * (f + (1-f) exp(-8 c_eps 3^n)), assembled in log domain.
        double t = s.fraction;
        if (n + 2 <= ledger.truncation()) {
            const double inner = std::exp(-nested_width_exponent(ledger, n));
            t = s.fraction + (1.0 - s.fraction) * inner;
        }
        const double log_offset =
            ledger.well(n).log_half_width + (t > 0.0 ? std::log(t) : neg_inf);
        // exp underflows for deep wells: the angle collapses to the center,
        // the symbolic fields stay exact.
        const double offset = std::exp(log_offset);
        s.numeric_angle =
            wrap_angle(ledger.well(n).center + static_cast<double>(s.side) * offset);
    }
    return s;
}

BondSample sample_bond(const WellLedger& ledger, double beta, std::mt19937_64& rng) {
    return sample_bond(ledger, bond_distribution(ledger, beta), rng);
}

} // namespace ringwell
