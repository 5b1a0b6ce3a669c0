#include "ringwell/lattice.hpp"

#include <cmath>
#include <string>

namespace ringwell {

namespace {

// Raw widths, depths and window densities for the moderate regime, plus the
// neighbor table. Rebuilt per call cluster; cost is negligible next to a sweep.
struct SimTables {
    int truncation = 0;
    std::vector<double> eps;         // [0] unused, 1..N half-widths
    std::vector<double> depth;       // cumulative U_n
    std::vector<double> inv_two_eps; // 1 / (2 eps_n)
    std::vector<int> nbr;            // flat neighbor ids
    std::vector<int> nbr_off;        // per site offset into nbr
    std::vector<int> nbr_cnt;
    std::vector<std::pair<int, int>> bonds; // each bond once

    double pair_potential(double diff) const {
        // diff in (-2pi, 2pi); fold to circle distance from 0.
        double d0 = std::fabs(diff);
        if (d0 >= two_pi) d0 -= two_pi;
        if (d0 > std::numbers::pi) d0 = two_pi - d0;
        const double dpi = std::numbers::pi - d0;
        // one family per point: widths shrink, so walk up while contained
        int m = 0;
        for (int k = 2; k <= truncation; k += 2) {
            if (d0 <= eps[static_cast<size_t>(k)]) m = k;
            else break;
        }
        if (m == 0) {
            for (int k = 1; k <= truncation; k += 2) {
                if (dpi <= eps[static_cast<size_t>(k)]) m = k;
                else break;
            }
        }
        return m ? depth[static_cast<size_t>(m)] : 0.0;
    }

    // Deepest containing well for histogram classification; 0 = background.
    int classify(double diff) const {
        double d0 = std::fabs(diff);
        if (d0 >= two_pi) d0 -= two_pi;
        if (d0 > std::numbers::pi) d0 = two_pi - d0;
        const double dpi = std::numbers::pi - d0;
        int m = 0;
        for (int k = 2; k <= truncation; k += 2) {
            if (d0 <= eps[static_cast<size_t>(k)]) m = k;
            else break;
        }
        if (m) return m;
        for (int k = 1; k <= truncation; k += 2) {
            if (dpi <= eps[static_cast<size_t>(k)]) m = k;
            else break;
        }
        return m;
    }
};

SimTables build_tables(const LatticeState& state, const WellLedger& ledger) {
    const auto& p = ledger.params;
    if (p.epsilon < 0.15 || p.truncation > 5) {
        const double lhw = ledger.well(p.truncation).log_half_width;
        throw RegimeViolation(
            "lattice simulation requires epsilon >= 0.15 and truncation <= 5; "
            "well " + std::to_string(p.truncation) + " has log half-width " +
            std::to_string(lhw));
    }
    SimTables t;
    t.truncation = p.truncation;
    t.eps.assign(static_cast<size_t>(p.truncation) + 1, 0.0);
    t.depth.assign(static_cast<size_t>(p.truncation) + 1, 0.0);
    t.inv_two_eps.assign(static_cast<size_t>(p.truncation) + 1, 0.0);
    for (int n = 1; n <= p.truncation; ++n) {
        const double w = std::exp(ledger.well(n).log_half_width);
        if (w == 0.0)
            throw RegimeViolation("well " + std::to_string(n) +
                                  " half-width underflows in double precision");
        t.eps[static_cast<size_t>(n)] = w;
        t.depth[static_cast<size_t>(n)] = ledger.well(n).depth;
        t.inv_two_eps[static_cast<size_t>(n)] = 0.5 / w;
    }

    const auto& dims = state.dims;
    const int n_sites = state.n_sites();
    t.nbr_off.assign(static_cast<size_t>(n_sites), 0);
    t.nbr_cnt.assign(static_cast<size_t>(n_sites), 0);
    if (dims.size() == 1) {
        // free boundary chain: bonds (i, i+1)
        const int L = dims[0];
        for (int i = 0; i < L; ++i) {
            t.nbr_off[static_cast<size_t>(i)] = static_cast<int>(t.nbr.size());
            if (i > 0) t.nbr.push_back(i - 1);
            if (i + 1 < L) t.nbr.push_back(i + 1);
            t.nbr_cnt[static_cast<size_t>(i)] =
                static_cast<int>(t.nbr.size()) - t.nbr_off[static_cast<size_t>(i)];
            if (i + 1 < L) t.bonds.emplace_back(i, i + 1);
        }
    } else {
        // periodic torus, d = 2
        const int Lx = dims[0], Ly = dims[1];
        auto id = [Lx](int x, int y) { return x + y * Lx; };
        for (int y = 0; y < Ly; ++y) {
            for (int x = 0; x < Lx; ++x) {
                const int i = id(x, y);
                t.nbr_off[static_cast<size_t>(i)] = static_cast<int>(t.nbr.size());
                t.nbr.push_back(id((x + 1) % Lx, y));
                t.nbr.push_back(id((x + Lx - 1) % Lx, y));
                t.nbr.push_back(id(x, (y + 1) % Ly));
                t.nbr.push_back(id(x, (y + Ly - 1) % Ly));
                t.nbr_cnt[static_cast<size_t>(i)] = 4;
                t.bonds.emplace_back(i, id((x + 1) % Lx, y));
                t.bonds.emplace_back(i, id(x, (y + 1) % Ly));
            }
        }
    }
    return t;
}

double site_parity(const std::vector<int>& dims, int i) {
    if (dims.size() == 1) return (i % 2 == 0) ? 1.0 : -1.0;
    const int x = i % dims[0], y = i / dims[0];
    return ((x + y) % 2 == 0) ? 1.0 : -1.0;
}

} // namespace

int LatticeState::n_bonds() const {
    if (dims.size() == 1) return dims[0] - 1;
    return 2 * dims[0] * dims[1];
}

LatticeState init_lattice(const std::vector<int>& dims, double beta,
                          std::uint64_t seed, InitPolicy init,
                          const WellLedger& ledger) {
    if (dims.empty() || dims.size() > 2)
        throw InvalidParams("dims must have 1 or 2 entries");
    for (int L : dims)
        if (L < 2) throw InvalidParams("each side length must be >= 2");
    if (beta < 0.0) throw InvalidParams("beta must be >= 0");

    LatticeState s;
    s.dims = dims;
    s.beta = beta;
    s.rng_seed = seed;
    s.rng.seed(seed);
    int n_sites = 1;
    for (int L : dims) n_sites *= L;
    s.angles.resize(static_cast<size_t>(n_sites));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < n_sites; ++i) {
        switch (init) {
        case InitPolicy::random: s.angles[static_cast<size_t>(i)] = two_pi * unit(s.rng); break;
        case InitPolicy::aligned: s.angles[static_cast<size_t>(i)] = 0.0; break;
        case InitPolicy::neel:
            s.angles[static_cast<size_t>(i)] =
                site_parity(dims, i) > 0.0 ? 0.0 : std::numbers::pi;
            break;
        }
    }
    s.bond_energy_sum = recompute_bond_energy(s, ledger);
    return s;
}

double recompute_bond_energy(const LatticeState& state, const WellLedger& ledger) {
    const SimTables t = build_tables(state, ledger);
    double total = 0.0;
    for (const auto& [i, j] : t.bonds)
        total += t.pair_potential(state.angles[static_cast<size_t>(i)] -
                                  state.angles[static_cast<size_t>(j)]);
    return total;
}

namespace {

inline double proposal_density(const SimTables& t, const std::vector<double>& angles,
                               int site, double theta, const ProposalMix& mix) {
    double dens = mix.w_global / two_pi;
    const int cnt = t.nbr_cnt[static_cast<size_t>(site)];
    const double per =
        mix.w_well / (static_cast<double>(cnt) * 2.0 * static_cast<double>(t.truncation));
    const int off = t.nbr_off[static_cast<size_t>(site)];
    for (int k = 0; k < cnt; ++k) {
        const int j = t.nbr[static_cast<size_t>(off + k)];
        double d0 = std::fabs(theta - angles[static_cast<size_t>(j)]);
        if (d0 >= two_pi) d0 -= two_pi;
        if (d0 > std::numbers::pi) d0 = two_pi - d0;
        const double dpi = std::numbers::pi - d0;
        for (int m = 1; m <= t.truncation; ++m) {
            const double w = t.eps[static_cast<size_t>(m)];
            const bool in0 = d0 <= w;
            const bool inpi = dpi <= w;
            if (!in0 && !inpi) break; // widths only shrink from here
            if (in0) dens += per * t.inv_two_eps[static_cast<size_t>(m)];
            if (inpi) dens += per * t.inv_two_eps[static_cast<size_t>(m)];
        }
    }
    return dens;
}

void sweep_impl(LatticeState& state, const SimTables& t, const ProposalMix& mix) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int n_sites = state.n_sites();
    const double beta = state.beta;
    auto& angles = state.angles;
    for (int i = 0; i < n_sites; ++i) {
        const double theta_old = angles[static_cast<size_t>(i)];
        double theta_new;
        if (unit(state.rng) < mix.w_global) {
            theta_new = two_pi * unit(state.rng);
            if (theta_new >= two_pi) theta_new = 0.0;
        } else {
            const int cnt = t.nbr_cnt[static_cast<size_t>(i)];
            const int off = t.nbr_off[static_cast<size_t>(i)];
            int pick = static_cast<int>(static_cast<double>(cnt) * unit(state.rng));
            if (pick >= cnt) pick = cnt - 1;
            const int j = t.nbr[static_cast<size_t>(off + pick)];
            const double c = unit(state.rng) < 0.5 ? 0.0 : std::numbers::pi;
            int m = 1 + static_cast<int>(static_cast<double>(t.truncation) * unit(state.rng));
            if (m > t.truncation) m = t.truncation;
            const double u =
                (2.0 * unit(state.rng) - 1.0) * t.eps[static_cast<size_t>(m)];
            theta_new = wrap_angle(angles[static_cast<size_t>(j)] + c + u);
        }

        double s_old = 0.0, s_new = 0.0;
        const int cnt = t.nbr_cnt[static_cast<size_t>(i)];
        const int off = t.nbr_off[static_cast<size_t>(i)];
        for (int k = 0; k < cnt; ++k) {
            const double aj = angles[static_cast<size_t>(t.nbr[static_cast<size_t>(off + k)])];
            s_old += t.pair_potential(theta_old - aj);
            s_new += t.pair_potential(theta_new - aj);
        }

        const double gain = beta * (s_new - s_old);
        const double dens_old = proposal_density(t, angles, i, theta_old, mix);
        const double dens_new = proposal_density(t, angles, i, theta_new, mix);
        const double ratio = dens_old / dens_new;

        bool accept;
        if (gain >= 0.0 && ratio >= 1.0) {
            accept = true;
        } else {
            // exp overflow (-> inf) and underflow (-> 0) both give the right
            // verdict; the crossover region is far inside the finite range.
            const double a = std::exp(gain) * ratio;
            accept = a >= 1.0 || unit(state.rng) < a;
        }
        ++state.proposals;
        if (accept) {
            angles[static_cast<size_t>(i)] = theta_new;
            state.bond_energy_sum += s_new - s_old;
            ++state.accepts;
        }
    }
    ++state.sweep_count;
}

} // namespace

void metropolis_sweep(LatticeState& state, const WellLedger& ledger,
                      const ProposalMix& mix) {
    const SimTables t = build_tables(state, ledger);
    sweep_impl(state, t, mix);
}

ObservableRecord measure(const LatticeState& state, const WellLedger& ledger) {
    const SimTables t = build_tables(state, ledger);
    ObservableRecord rec;
    rec.sweep = state.sweep_count;
    const int n_sites = state.n_sites();
    double mc = 0.0, ms = 0.0, sc = 0.0, ss = 0.0;
    for (int i = 0; i < n_sites; ++i) {
        const double a = state.angles[static_cast<size_t>(i)];
        const double p = site_parity(state.dims, i);
        mc += std::cos(a);
        ms += std::sin(a);
        sc += p * std::cos(a);
        ss += p * std::sin(a);
    }
    rec.magnetization_cos = mc / n_sites;
    rec.magnetization_sin = ms / n_sites;
    rec.staggered_cos = sc / n_sites;
    rec.staggered_sin = ss / n_sites;

    rec.bond_well_histogram.assign(static_cast<size_t>(t.truncation) + 1, 0);
    double order = 0.0, energy = 0.0;
    for (const auto& [i, j] : t.bonds) {
        const double diff =
            state.angles[static_cast<size_t>(i)] - state.angles[static_cast<size_t>(j)];
        order += std::cos(diff);
        energy += t.pair_potential(diff);
        ++rec.bond_well_histogram[static_cast<size_t>(t.classify(diff))];
    }
    const double nb = static_cast<double>(t.bonds.size());
    rec.nn_bond_order = order / nb;
    rec.energy_per_bond = -energy / nb;
    return rec;
}

std::vector<ObservableRecord> run_chain(LatticeState& state, const WellLedger& ledger,
                                        long n_sweeps, long thin, long burn_in,
                                        const ProposalMix& mix) {
    if (n_sweeps <= burn_in) throw InvalidParams("n_sweeps must exceed burn_in");
    if (thin < 1) throw InvalidParams("thin must be >= 1");
    const SimTables t = build_tables(state, ledger);
    std::vector<ObservableRecord> records;
    for (long sweep = 1; sweep <= n_sweeps; ++sweep) {
        sweep_impl(state, t, mix);
        if (sweep > burn_in && (sweep - burn_in) % thin == 0)
            records.push_back(measure(state, ledger));
    }
    return records;
}

ExactChain sample_chain_exact(int length, const WellLedger& ledger, double beta,
                              std::mt19937_64& rng) {
    if (length < 2) throw InvalidParams("chain length must be >= 2");
    ExactChain chain;
    chain.state.dims = {length};
    chain.state.beta = beta;
    chain.state.angles.resize(static_cast<size_t>(length));
    const auto dist = bond_distribution(ledger, beta);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    chain.state.angles[0] = two_pi * unit(rng);
    chain.bonds.reserve(static_cast<size_t>(length) - 1);
    for (int i = 1; i < length; ++i) {
        BondSample b = sample_bond(ledger, dist, rng);
        chain.state.angles[static_cast<size_t>(i)] =
            wrap_angle(chain.state.angles[static_cast<size_t>(i - 1)] + b.numeric_angle);
        chain.bonds.push_back(std::move(b));
    }
    return chain;
}

CtdReport ctd_demo(const WellLedger& ledger, const TemperatureSchedule& schedule,
                   const std::vector<int>& dims, long sweeps, long burn_in,
                   std::uint64_t seed, const ProposalMix& mix) {
    if (schedule.entries.empty()) throw InvalidParams("empty schedule");
    CtdReport report;
    for (size_t e = 0; e < schedule.entries.size(); ++e) {
        const auto& entry = schedule.entries[e];
        // decorrelate entries without demanding more than one user seed
        const std::uint64_t entry_seed = seed + 0x9e3779b97f4a7c15ull * (e + 1);
        LatticeState state =
            init_lattice(dims, entry.beta, entry_seed, InitPolicy::random, ledger);
        const long thin = std::max(1L, (sweeps - burn_in) / 200);
        auto records = run_chain(state, ledger, sweeps, thin, burn_in, mix);

        CtdEntryReport er;
        er.n = entry.n;
        er.beta = entry.beta;
        std::vector<long> hist;
        long total_bonds = 0;
        for (const auto& r : records) {
            er.mean_nn_bond_order += r.nn_bond_order;
            if (hist.empty()) hist.assign(r.bond_well_histogram.size(), 0);
            for (size_t k = 0; k < hist.size(); ++k) {
                hist[k] += r.bond_well_histogram[k];
                total_bonds += r.bond_well_histogram[k];
            }
        }
        er.mean_nn_bond_order /= static_cast<double>(records.size());
        size_t best = 0;
        for (size_t k = 1; k < hist.size(); ++k)
            if (hist[k] > hist[best]) best = k;
        er.dominant_well = static_cast<int>(best);
        er.dominant_fraction =
            static_cast<double>(hist[best]) / static_cast<double>(total_bonds);
        er.dominant_character = (best % 2 == 0) ? WellCharacter::ferromagnetic
                                                : WellCharacter::antiferromagnetic;
        report.entries.push_back(er);
    }
    report.alternation = report.entries.size() >= 2;
    for (size_t e = 1; e < report.entries.size(); ++e)
        if (report.entries[e].dominant_character ==
            report.entries[e - 1].dominant_character)
            report.alternation = false;
    return report;
}

} // namespace ringwell
