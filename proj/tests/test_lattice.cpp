#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "ringwell/lattice.hpp"
#include "ringwell/quadrature.hpp"

using namespace ringwell;

TEST_CASE("init policies") {
    const auto ledger = build_ledger({0.25, 4, Mode::exact});
    SUBCASE("aligned: all angles zero, bond order one") {
        auto s = init_lattice({16}, 1.0, 1, InitPolicy::aligned, ledger);
        for (double a : s.angles) CHECK(a == 0.0);
        CHECK(measure(s, ledger).nn_bond_order == doctest::Approx(1.0));
    }
    SUBCASE("neel on an even torus: bond order minus one") {
        auto s = init_lattice({8, 8}, 1.0, 1, InitPolicy::neel, ledger);
        const auto rec = measure(s, ledger);
        CHECK(rec.nn_bond_order == doctest::Approx(-1.0));
        CHECK(std::fabs(rec.magnetization_cos) < 1e-12);
        CHECK(rec.staggered_cos == doctest::Approx(1.0));
    }
    SUBCASE("random: distinct seeds give distinct states") {
        auto a = init_lattice({32}, 1.0, 1, InitPolicy::random, ledger);
        auto b = init_lattice({32}, 1.0, 2, InitPolicy::random, ledger);
        CHECK(a.angles != b.angles);
    }
    SUBCASE("dims validation") {
        CHECK_THROWS_AS(init_lattice({}, 1.0, 1, InitPolicy::random, ledger), InvalidParams);
        CHECK_THROWS_AS(init_lattice({1}, 1.0, 1, InitPolicy::random, ledger), InvalidParams);
        CHECK_THROWS_AS(init_lattice({4, 4, 4}, 1.0, 1, InitPolicy::random, ledger),
                        InvalidParams);
    }
}

TEST_CASE("moderate-regime enforcement names the offending width") {
    const auto deep = build_ledger({0.1, 4, Mode::exact});
    auto s = init_lattice({8}, 1.0, 1, InitPolicy::aligned, build_ledger({0.25, 4, Mode::exact}));
    CHECK_THROWS_WITH_AS(metropolis_sweep(s, deep),
                         doctest::Contains("epsilon >= 0.15"), RegimeViolation);
    const auto wide_but_deep = build_ledger({0.3, 7, Mode::exact});
    CHECK_THROWS_AS(metropolis_sweep(s, wide_but_deep), RegimeViolation);
}

TEST_CASE("seeded determinism of trajectories") {
    const auto ledger = build_ledger({0.25, 4, Mode::exact});
    auto a = init_lattice({24}, 10.0, 987, InitPolicy::random, ledger);
    auto b = init_lattice({24}, 10.0, 987, InitPolicy::random, ledger);
    for (int sweep = 0; sweep < 200; ++sweep) {
        metropolis_sweep(a, ledger);
        metropolis_sweep(b, ledger);
    }
    CHECK(a.angles == b.angles);
    CHECK(a.accepts == b.accepts);
    CHECK(a.bond_energy_sum == b.bond_energy_sum);
}

TEST_CASE("energy bookkeeping tracks full recomputation") {
    const auto ledger = build_ledger({0.25, 4, Mode::exact});
    for (auto dims : {std::vector<int>{50}, std::vector<int>{8, 8}}) {
        auto s = init_lattice(dims, 15.0, 314, InitPolicy::random, ledger);
        for (int sweep = 0; sweep < 1000; ++sweep) metropolis_sweep(s, ledger);
        CHECK(std::fabs(s.bond_energy_sum - recompute_bond_energy(s, ledger)) <= 1e-9);
    }
}

TEST_CASE("run_chain record bookkeeping and replay") {
    const auto ledger = build_ledger({0.25, 4, Mode::exact});
    SUBCASE("thin 1, no burn-in: one record per sweep") {
        auto s = init_lattice({16}, 5.0, 7, InitPolicy::random, ledger);
        const auto records = run_chain(s, ledger, 25, 1, 0);
        REQUIRE(records.size() == 25);
        for (size_t i = 0; i < records.size(); ++i)
            CHECK(records[i].sweep == static_cast<long>(i + 1));
        long total = 0;
        for (long c : records.back().bond_well_histogram) total += c;
        CHECK(total == s.n_bonds());
    }
    SUBCASE("burn-in and thinning") {
        auto s = init_lattice({16}, 5.0, 7, InitPolicy::random, ledger);
        const auto records = run_chain(s, ledger, 100, 10, 20);
        CHECK(records.size() == 8);
        CHECK(records.front().sweep == 30);
    }
    SUBCASE("fixed seed replays bit-identical records") {
        auto a = init_lattice({16}, 5.0, 7, InitPolicy::random, ledger);
        auto b = init_lattice({16}, 5.0, 7, InitPolicy::random, ledger);
        const auto ra = run_chain(a, ledger, 60, 5, 10);
        const auto rb = run_chain(b, ledger, 60, 5, 10);
        REQUIRE(ra.size() == rb.size());
        for (size_t i = 0; i < ra.size(); ++i) {
            CHECK(ra[i].nn_bond_order == rb[i].nn_bond_order);
            CHECK(ra[i].energy_per_bond == rb[i].energy_per_bond);
            CHECK(ra[i].bond_well_histogram == rb[i].bond_well_histogram);
        }
    }
    SUBCASE("preconditions") {
        auto s = init_lattice({16}, 5.0, 7, InitPolicy::random, ledger);
        CHECK_THROWS_AS(run_chain(s, ledger, 10, 1, 10), InvalidParams);
        CHECK_THROWS_AS(run_chain(s, ledger, 10, 0, 0), InvalidParams);
    }
}

TEST_CASE("infinite temperature preserves the uniform measure") {
    const auto ledger = build_ledger({0.25, 4, Mode::exact});
    auto s = init_lattice({64}, 0.0, 2024, InitPolicy::random, ledger);
    const auto records = run_chain(s, ledger, 5000, 10, 500);
    std::vector<double> freq(5, 0.0);
    double total = 0.0;
    for (const auto& rec : records)
        for (size_t k = 0; k < rec.bond_well_histogram.size(); ++k) {
            freq[k] += static_cast<double>(rec.bond_well_histogram[k]);
            total += static_cast<double>(rec.bond_well_histogram[k]);
        }
    const auto dist = bond_distribution(ledger, 0.0);
    double tv = std::fabs(freq[0] / total - dist.background_probability());
    for (int n = 1; n <= 4; ++n)
        tv += std::fabs(freq[static_cast<size_t>(n)] / total - dist.annulus_probability(n));
    CHECK(0.5 * tv <= 0.02);
    // The well components of the mixture concentrate proposal mass on tiny
    // windows, so the Hastings correction rejects most of them at beta = 0;
    // the measured rate sits near w_global plus the well-1 contribution.
    CHECK(s.acceptance_rate() > 0.15);
    CHECK(s.acceptance_rate() < 0.40);
    MESSAGE("beta=0 acceptance rate: ", s.acceptance_rate());
}

TEST_CASE("two-site chain reproduces the exact Gibbs bond measure") {
    // brute-force oracle via quadrature, long-run frequency over 1e6 sweeps
    const auto ledger = build_ledger({0.25, 4, Mode::exact});
    const double beta = 10.0;
    auto s = init_lattice({2}, beta, 555, InitPolicy::random, ledger);
    std::vector<double> freq(5, 0.0);
    double total = 0.0;
    const int chunks = 100, per_chunk = 10000;
    for (int chunk = 0; chunk < chunks; ++chunk) {
        const auto records = run_chain(s, ledger, per_chunk, 1, 0);
        for (const auto& rec : records)
            for (size_t k = 0; k < rec.bond_well_histogram.size(); ++k) {
                freq[k] += static_cast<double>(rec.bond_well_histogram[k]);
                total += static_cast<double>(rec.bond_well_histogram[k]);
            }
    }
    const auto oracle = quadrature::region_masses(0.25, 4, beta);
    // oracle order: annuli 1..4 then background; histogram: background, 1..4
    double tv = std::fabs(freq[0] / total - oracle.probability[4]);
    for (int n = 1; n <= 4; ++n)
        tv += std::fabs(freq[static_cast<size_t>(n)] / total -
                        oracle.probability[static_cast<size_t>(n - 1)]);
    CHECK(0.5 * tv <= 0.02);
}

TEST_CASE("exact chain sampler") {
    const auto ledger = build_ledger({0.25, 4, Mode::exact});
    SUBCASE("bond histogram within 4 sigma of the distribution") {
        std::mt19937_64 rng(31337);
        const int n_bonds = 100000;
        const auto chain = sample_chain_exact(n_bonds + 1, ledger, 20.0, rng);
        REQUIRE(chain.bonds.size() == static_cast<size_t>(n_bonds));
        const auto dist = bond_distribution(ledger, 20.0);
        std::vector<long> counts(5, 0);
        for (const auto& b : chain.bonds)
            ++counts[b.kind == RegionKind::background ? 0 : static_cast<size_t>(b.well)];
        auto check_count = [&](long count, double p) {
            const double sigma = std::sqrt(std::max(1e-30, n_bonds * p * (1.0 - p)));
            CHECK(std::fabs(count - n_bonds * p) <= 4.0 * sigma + 1e-9);
        };
        check_count(counts[0], dist.background_probability());
        for (int n = 1; n <= 4; ++n)
            check_count(counts[static_cast<size_t>(n)], dist.annulus_probability(n));
    }
    SUBCASE("bond angles uniform at beta = 0 (Kolmogorov-Smirnov)") {
        std::mt19937_64 rng(8);
        const int n = 10000;
        const auto chain = sample_chain_exact(n + 1, ledger, 0.0, rng);
        std::vector<double> u;
        u.reserve(static_cast<size_t>(n));
        for (const auto& b : chain.bonds) u.push_back(b.numeric_angle / two_pi);
        std::sort(u.begin(), u.end());
        double d_stat = 0.0;
        for (int i = 0; i < n; ++i) {
            const double lo = static_cast<double>(i) / n, hi = static_cast<double>(i + 1) / n;
            d_stat = std::max({d_stat, u[static_cast<size_t>(i)] - lo,
                               hi - u[static_cast<size_t>(i)]});
        }
        const double rt = std::sqrt(static_cast<double>(n));
        const double stephens = (rt + 0.12 + 0.11 / rt) * d_stat;
        CHECK(stephens < 1.628); // the 1% critical point
    }
    SUBCASE("spins are partial sums of the bonds") {
        std::mt19937_64 rng(4);
        const auto chain = sample_chain_exact(50, ledger, 12.0, rng);
        for (size_t i = 0; i + 1 < chain.state.angles.size(); ++i)
            CHECK(wrap_angle(chain.state.angles[i] + chain.bonds[i].numeric_angle) ==
                  doctest::Approx(chain.state.angles[i + 1]));
    }
    SUBCASE("correlation factorizes across distance (smoke)") {
        std::mt19937_64 rng(606);
        const double op = order_parameter(ledger, 20.0);
        const int reps = 20000;
        double sum[4] = {0}, sum2[4] = {0};
        for (int i = 0; i < reps; ++i) {
            const auto chain = sample_chain_exact(4, ledger, 20.0, rng);
            for (int r = 1; r <= 3; ++r) {
                const double x =
                    std::cos(chain.state.angles[0] - chain.state.angles[static_cast<size_t>(r)]);
                sum[r] += x;
                sum2[r] += x * x;
            }
        }
        for (int r = 1; r <= 3; ++r) {
            const double mean = sum[r] / reps;
            const double var = (sum2[r] - reps * mean * mean) / (reps - 1);
            const double se = std::sqrt(var / reps);
            CHECK(std::fabs(mean - std::pow(op, r)) <= 4.0 * se);
        }
    }
}

TEST_CASE("ctd demo flips the dominant character along the schedule (d=1)") {
    // the deep-well phase only invades from the free ends of the chain, at a
    // few hundredths of a bond per sweep, so the run must be long on a short
    // chain rather than the other way around
    const auto ledger = build_ledger({0.25, 5, Mode::exact});
    const auto sched = beta_schedule(ledger, 2, 3);
    const auto report = ctd_demo(ledger, sched, {32}, 40000, 20000, 77);
    REQUIRE(report.entries.size() == 2);
    CHECK(report.entries[0].dominant_well == 2);
    CHECK(report.entries[0].dominant_character == WellCharacter::ferromagnetic);
    CHECK(report.entries[0].mean_nn_bond_order > 0.5);
    CHECK(report.entries[1].dominant_well == 3);
    CHECK(report.entries[1].dominant_character == WellCharacter::antiferromagnetic);
    CHECK(report.entries[1].mean_nn_bond_order < -0.5);
    CHECK(report.alternation);
}

TEST_CASE("single-entry demo flags no alternation") {
    const auto ledger = build_ledger({0.25, 5, Mode::exact});
    TemperatureSchedule sched;
    sched.entries.push_back({2, beta_schedule(ledger, 2, 3).entries[0].beta, false, false,
                             WellCharacter::ferromagnetic});
    const auto report = ctd_demo(ledger, sched, {64}, 2000, 1000, 5);
    CHECK(report.entries.size() == 1);
    CHECK(!report.alternation);
}
