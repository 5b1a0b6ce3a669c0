#include "ringwell/cli.hpp"

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ringwell/acceptance.hpp"
#include "ringwell/asymptotics.hpp"
#include "ringwell/bond_measure.hpp"
#include "ringwell/csv.hpp"
#include "ringwell/lattice.hpp"
#include "ringwell/potential.hpp"
#include "ringwell/quadrature.hpp"
#include "ringwell/version.hpp"

#include <CLI11.hpp>
#include <json.hpp>

namespace ringwell {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCriterionFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitRegimeViolation = 3;

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

// ordered key=value pairs recorded at the top of every output file;
// re-running the command with these flags reproduces the file byte for byte
// (the timestamp line is excluded from that contract).
struct Header {
    std::vector<std::pair<std::string, std::string>> kv;

    void add(const std::string& k, const std::string& v) { kv.emplace_back(k, v); }

    std::string csv_block() const {
        std::ostringstream os;
        os << "# ringwell v" << RINGWELL_VERSION << '\n';
        for (const auto& [k, v] : kv) os << "# " << k << '=' << v << '\n';
        os << "# timestamp=" << iso_timestamp() << '\n';
        return os.str();
    }
    nlohmann::json json_block() const {
        nlohmann::json j;
        j["version"] = RINGWELL_VERSION;
        for (const auto& [k, v] : kv) j[k] = v;
        j["timestamp"] = iso_timestamp();
        return j;
    }
};

// Compute first, then write: a failing command must not leave partial output.
void emit(const std::string& out_path, const std::string& payload) {
    if (out_path.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream f(out_path, std::ios::binary | std::ios::trunc);
    if (!f) throw InvalidParams("cannot open output file: " + out_path);
    f << payload;
}

std::vector<double> parse_beta_list(const std::string& s) {
    std::vector<double> betas;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        size_t pos = 0;
        const double b = std::stod(item, &pos);
        if (pos != item.size()) throw InvalidParams("bad beta value: " + item);
        betas.push_back(b);
    }
    if (betas.empty()) throw InvalidParams("empty beta list");
    return betas;
}

std::pair<int, int> parse_schedule_range(const std::string& s) {
    const auto dots = s.find("..");
    if (dots == std::string::npos)
        throw InvalidParams("schedule range must look like n_lo..n_hi, got " + s);
    return {std::stoi(s.substr(0, dots)), std::stoi(s.substr(dots + 2))};
}

std::vector<int> parse_dims(const std::string& s) {
    std::vector<int> dims;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) dims.push_back(std::stoi(item));
    if (dims.empty() || dims.size() > 2)
        throw InvalidParams("dims must be one or two comma-separated sides");
    return dims;
}

Mode parse_mode(const std::string& s) {
    if (s == "exact") return Mode::exact;
    if (s == "paper") return Mode::paper;
    throw InvalidParams("mode must be exact or paper, got " + s);
}

std::string region_label(const Region& r) {
    return r.kind == RegionKind::background ? "background"
                                            : "annulus" + std::to_string(r.well);
}

// ---- analyze ---------------------------------------------------------------

int cmd_analyze(double epsilon, int truncation, const std::string& mode,
                const std::string& beta_list, const std::string& out,
                const std::string& format) {
    const auto betas = parse_beta_list(beta_list);
    const auto ledger = build_ledger({epsilon, truncation, parse_mode(mode)});
    Header h;
    h.add("command", "analyze");
    h.add("epsilon", fmt17(epsilon));
    h.add("truncation", std::to_string(truncation));
    h.add("mode", mode);
    h.add("beta", beta_list);
    h.add("format", format);

    if (format == "csv") {
        std::ostringstream os;
        os << h.csv_block();
        os << "beta,region,log_weight,probability,order_parameter,argmax_well\n";
        for (double beta : betas) {
            const auto dist = bond_distribution(ledger, beta);
            const double op = order_parameter(dist, ledger);
            const auto am = argmax_well(ledger, beta);
            for (size_t i = 0; i < dist.regions.size(); ++i) {
                os << fmt17(beta) << ',' << region_label(dist.regions[i]) << ','
                   << fmt17(dist.log_weights[i]) << ',' << fmt17(dist.probabilities[i])
                   << ',' << fmt17(op) << ',' << am.well << '\n';
            }
        }
        emit(out, os.str());
    } else {
        nlohmann::json j;
        j["header"] = h.json_block();
        auto& rows = j["betas"] = nlohmann::json::array();
        for (double beta : betas) {
            const auto dist = bond_distribution(ledger, beta);
            const auto am = argmax_well(ledger, beta);
            nlohmann::json jb;
            jb["beta"] = fmt17(beta);
            jb["order_parameter"] = fmt17(order_parameter(dist, ledger));
            jb["argmax_well"] = am.well;
            jb["degenerate"] = am.degenerate;
            jb["background_dominates"] = am.background_dominates;
            jb["log_partition"] = fmt17(dist.log_partition);
            auto& regions = jb["regions"] = nlohmann::json::array();
            for (size_t i = 0; i < dist.regions.size(); ++i) {
                regions.push_back({{"region", region_label(dist.regions[i])},
                                   {"log_weight", fmt17(dist.log_weights[i])},
                                   {"probability", fmt17(dist.probabilities[i])}});
            }
            rows.push_back(std::move(jb));
        }
        emit(out, j.dump(2) + "\n");
    }
    return kExitOk;
}

// ---- schedule ----------------------------------------------------------------

int cmd_schedule(double epsilon, int truncation, const std::string& mode,
                 const std::string& range, const std::string& out,
                 const std::string& format) {
    const auto [n_lo, n_hi] = parse_schedule_range(range);
    const auto ledger = build_ledger({epsilon, truncation, parse_mode(mode)});
    const auto sched = beta_schedule(ledger, n_lo, n_hi);
    Header h;
    h.add("command", "schedule");
    h.add("epsilon", fmt17(epsilon));
    h.add("truncation", std::to_string(truncation));
    h.add("mode", mode);
    h.add("schedule", range);
    h.add("format", format);

    if (format == "csv") {
        std::ostringstream os;
        os << h.csv_block();
        os << "n,beta,character,degenerate,corrected\n";
        for (const auto& e : sched.entries)
            os << e.n << ',' << fmt17(e.beta) << ',' << to_string(e.character) << ','
               << (e.degenerate ? 1 : 0) << ',' << (e.corrected ? 1 : 0) << '\n';
        emit(out, os.str());
    } else {
        nlohmann::json j;
        j["header"] = h.json_block();
        auto& rows = j["entries"] = nlohmann::json::array();
        for (const auto& e : sched.entries)
            rows.push_back({{"n", e.n},
                            {"beta", fmt17(e.beta)},
                            {"character", to_string(e.character)},
                            {"degenerate", e.degenerate},
                            {"corrected", e.corrected}});
        emit(out, j.dump(2) + "\n");
    }
    return kExitOk;
}

// ---- verify -------------------------------------------------------------------

int cmd_verify(const AcceptanceConfig& cfg, const std::string& out) {
    const auto report = run_acceptance(cfg, std::cerr);
    const std::string verdict = acceptance_report_json(report, cfg) + "\n";
    emit(out, verdict);
    return report.all_gating_passed ? kExitOk : kExitCriterionFailure;
}

// ---- sample -------------------------------------------------------------------

int cmd_sample(double epsilon, int truncation, const std::string& mode, double beta,
               const std::string& dims_s, std::uint64_t seed, const std::string& out,
               const std::string& format) {
    const auto dims = parse_dims(dims_s);
    if (dims.size() != 1) throw InvalidParams("sample is d=1 only; give a single length");
    const auto ledger = build_ledger({epsilon, truncation, parse_mode(mode)});
    std::mt19937_64 rng(seed);
    const auto chain = sample_chain_exact(dims[0], ledger, beta, rng);

    Header h;
    h.add("command", "sample");
    h.add("epsilon", fmt17(epsilon));
    h.add("truncation", std::to_string(truncation));
    h.add("mode", mode);
    h.add("beta", fmt17(beta));
    h.add("dims", dims_s);
    h.add("seed", std::to_string(seed));
    h.add("format", format);

    if (format == "csv") {
        std::ostringstream os;
        os << h.csv_block();
        os << "bond,region,side,fraction,numeric_angle\n";
        for (size_t i = 0; i < chain.bonds.size(); ++i) {
            const auto& b = chain.bonds[i];
            os << i << ','
               << (b.kind == RegionKind::background ? std::string("background")
                                                    : "annulus" + std::to_string(b.well))
               << ',' << (b.side > 0 ? '+' : '-') << ',' << fmt17(b.fraction) << ','
               << fmt17(b.numeric_angle) << '\n';
        }
        emit(out, os.str());
    } else {
        nlohmann::json j;
        j["header"] = h.json_block();
        auto& rows = j["bonds"] = nlohmann::json::array();
        for (const auto& b : chain.bonds)
            rows.push_back({{"region", b.kind == RegionKind::background
                                           ? std::string("background")
                                           : "annulus" + std::to_string(b.well)},
                            {"side", b.side},
                            {"fraction", fmt17(b.fraction)},
                            {"numeric_angle", fmt17(b.numeric_angle)}});
        emit(out, j.dump(2) + "\n");
    }
    return kExitOk;
}

// ---- mcmc ----------------------------------------------------------------------

int cmd_mcmc(double epsilon, int truncation, const std::string& mode, double beta,
             const std::string& dims_s, long sweeps, long burn_in, long thin,
             std::uint64_t seed, const std::string& init_s, double w_global,
             const std::string& out, const std::string& format) {
    const auto dims = parse_dims(dims_s);
    const auto ledger = build_ledger({epsilon, truncation, parse_mode(mode)});
    InitPolicy init = InitPolicy::random;
    if (init_s == "aligned") init = InitPolicy::aligned;
    else if (init_s == "neel") init = InitPolicy::neel;
    else if (init_s != "random") throw InvalidParams("init must be random|aligned|neel");
    ProposalMix mix{w_global, 1.0 - w_global};
    LatticeState state = init_lattice(dims, beta, seed, init, ledger);
    const auto records = run_chain(state, ledger, sweeps, thin, burn_in, mix);

    Header h;
    h.add("command", "mcmc");
    h.add("epsilon", fmt17(epsilon));
    h.add("truncation", std::to_string(truncation));
    h.add("mode", mode);
    h.add("beta", fmt17(beta));
    h.add("dims", dims_s);
    h.add("sweeps", std::to_string(sweeps));
    h.add("burn-in", std::to_string(burn_in));
    h.add("thin", std::to_string(thin));
    h.add("seed", std::to_string(seed));
    h.add("init", init_s);
    h.add("w-global", fmt17(w_global));
    h.add("format", format);

    auto hist_csv = [&](const ObservableRecord& rec) {
        std::string s;
        for (long kcount : rec.bond_well_histogram) s += ',' + std::to_string(kcount);
        return s;
    };
    if (format == "csv") {
        std::ostringstream os;
        os << h.csv_block();
        os << "sweep,energy_per_bond,magnetization_cos,magnetization_sin,"
              "staggered_cos,staggered_sin,nn_bond_order,hist_background";
        for (int n = 1; n <= truncation; ++n) os << ",hist_well" << n;
        os << '\n';
        for (const auto& rec : records)
            os << rec.sweep << ',' << fmt17(rec.energy_per_bond) << ','
               << fmt17(rec.magnetization_cos) << ',' << fmt17(rec.magnetization_sin)
               << ',' << fmt17(rec.staggered_cos) << ',' << fmt17(rec.staggered_sin)
               << ',' << fmt17(rec.nn_bond_order) << hist_csv(rec) << '\n';
        emit(out, os.str());
    } else {
        nlohmann::json j;
        j["header"] = h.json_block();
        j["acceptance_rate"] = fmt17(state.acceptance_rate());
        auto& rows = j["records"] = nlohmann::json::array();
        for (const auto& rec : records) {
            rows.push_back({{"sweep", rec.sweep},
                            {"energy_per_bond", fmt17(rec.energy_per_bond)},
                            {"magnetization_cos", fmt17(rec.magnetization_cos)},
                            {"magnetization_sin", fmt17(rec.magnetization_sin)},
                            {"staggered_cos", fmt17(rec.staggered_cos)},
                            {"staggered_sin", fmt17(rec.staggered_sin)},
                            {"nn_bond_order", fmt17(rec.nn_bond_order)},
                            {"bond_well_histogram", rec.bond_well_histogram}});
        }
        emit(out, j.dump(2) + "\n");
    }
    return kExitOk;
}

// ---- ctd-demo -------------------------------------------------------------------

int cmd_ctd_demo(double epsilon, int truncation, const std::string& mode,
                 const std::string& range, const std::string& dims_s, long sweeps,
                 long burn_in, std::uint64_t seed, const std::string& out) {
    const auto [n_lo, n_hi] = parse_schedule_range(range);
    const auto dims = parse_dims(dims_s);
    const auto ledger = build_ledger({epsilon, truncation, parse_mode(mode)});
    const auto sched = beta_schedule(ledger, n_lo, n_hi);
    const auto report = ctd_demo(ledger, sched, dims, sweeps, burn_in, seed);

    Header h;
    h.add("command", "ctd-demo");
    h.add("epsilon", fmt17(epsilon));
    h.add("truncation", std::to_string(truncation));
    h.add("mode", mode);
    h.add("schedule", range);
    h.add("dims", dims_s);
    h.add("sweeps", std::to_string(sweeps));
    h.add("burn-in", std::to_string(burn_in));
    h.add("seed", std::to_string(seed));

    nlohmann::json j;
    j["header"] = h.json_block();
    j["alternation"] = report.alternation;
    auto& rows = j["entries"] = nlohmann::json::array();
    for (const auto& e : report.entries)
        rows.push_back({{"n", e.n},
                        {"beta", fmt17(e.beta)},
                        {"mean_nn_bond_order", fmt17(e.mean_nn_bond_order)},
                        {"dominant_well", e.dominant_well},
                        {"dominant_character",
                         e.dominant_well == 0 ? "background"
                                              : to_string(e.dominant_character)},
                        {"dominant_fraction", fmt17(e.dominant_fraction)}});
    emit(out, j.dump(2) + "\n");
    return kExitOk;
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"nested circle-well spin model: exact bond measure, schedules, MCMC"};
    app.set_config("--config")->configurable(false);
    app.require_subcommand(1);

    double epsilon = 0.1;
    int truncation = 8;
    std::string mode = "exact";
    std::string beta_list = "0";
    double beta = 0.0;
    std::string range = "2..4";
    std::string dims_s = "1000";
    long sweeps = 10000, burn_in = 0, thin = 1;
    std::uint64_t seed = 0;
    std::string init_s = "random";
    double w_global = 0.2;
    std::string out, format = "csv";

    auto add_model = [&](CLI::App* sub) {
        sub->add_option("--epsilon", epsilon, "base width in (0,1), epsilon^3 < pi/4");
        sub->add_option("--truncation", truncation, "deepest well index N >= 2");
        sub->add_option("--mode", mode, "exact|paper")->check(CLI::IsMember({"exact", "paper"}));
    };
    auto add_out = [&](CLI::App* sub) {
        sub->add_option("--out", out, "output path (stdout if omitted)");
        sub->add_option("--format", format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
    };

    auto* analyze = app.add_subcommand("analyze", "bond distribution table at given betas");
    add_model(analyze);
    analyze->add_option("--beta", beta_list, "comma-separated list of inverse temperatures")
        ->required();
    add_out(analyze);

    auto* schedule = app.add_subcommand("schedule", "temperature schedule pinning wells");
    add_model(schedule);
    schedule->add_option("--schedule", range, "well range n_lo..n_hi")->required();
    add_out(schedule);

    AcceptanceConfig acfg;
    auto* verify = app.add_subcommand("verify", "run the full verification suite");
    verify->add_option("--tv-tol", acfg.mcmc_tv_tol, "TV tolerance for MCMC histogram");
    verify->add_option("--peak-n0-max", acfg.peak_mass_n0_max, "latest allowed n0");
    verify->add_option("--peak-delta", acfg.peak_mass_delta, "peak mass margin over 1/2");
    verify->add_option("--nmax-rel-tol", acfg.nmax_rel_tol, "minimizer agreement tolerance");
    verify->add_option("--offset-rel-tol", acfg.offset_rel_tol, "offset identity tolerance");
    verify->add_option("--ratio-c-min", acfg.ratio_c_min, "minimum ratio exponent");
    verify->add_option("--quadrature-rel-tol", acfg.quadrature_rel_tol,
                       "quadrature agreement tolerance");
    verify->add_option("--mcmc-sweeps", acfg.mcmc_sweeps, "sweeps for the MCMC criterion");
    verify->add_option("--correlation-chains", acfg.correlation_chains,
                       "number of exact chains for the correlation criterion");
    verify->add_option("--d2-sweeps", acfg.d2_sweeps, "sweeps for the d=2 demonstration");
    verify->add_option("--out", out, "write the JSON verdict here (stdout if omitted)");

    auto* sample = app.add_subcommand("sample", "exact i.i.d.-bond chain (d=1)");
    add_model(sample);
    sample->add_option("--beta", beta, "inverse temperature")->required();
    sample->add_option("--dims", dims_s, "chain length");
    sample->add_option("--seed", seed, "64-bit RNG seed")->required();
    add_out(sample);

    auto* mcmc = app.add_subcommand("mcmc", "Metropolis chain on a d=1/d=2 lattice");
    add_model(mcmc);
    mcmc->add_option("--beta", beta, "inverse temperature")->required();
    mcmc->add_option("--dims", dims_s, "side lengths, e.g. 1000 or 32,32");
    mcmc->add_option("--sweeps", sweeps, "total sweeps");
    mcmc->add_option("--burn-in", burn_in, "sweeps discarded before recording");
    mcmc->add_option("--thin", thin, "record every thin-th sweep");
    mcmc->add_option("--seed", seed, "64-bit RNG seed")->required();
    mcmc->add_option("--init", init_s, "random|aligned|neel");
    mcmc->add_option("--w-global", w_global, "weight of the uniform proposal component");
    add_out(mcmc);

    auto* demo = app.add_subcommand("ctd-demo", "alternation demonstration along a schedule");
    add_model(demo);
    demo->add_option("--schedule", range, "well range n_lo..n_hi")->required();
    demo->add_option("--dims", dims_s, "side lengths");
    demo->add_option("--sweeps", sweeps, "sweeps per schedule entry");
    demo->add_option("--burn-in", burn_in, "sweeps discarded per entry");
    demo->add_option("--seed", seed, "64-bit RNG seed")->required();
    demo->add_option("--out", out, "output path (stdout if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    try {
        if (analyze->parsed())
            return cmd_analyze(epsilon, truncation, mode, beta_list, out, format);
        if (schedule->parsed())
            return cmd_schedule(epsilon, truncation, mode, range, out, format);
        if (verify->parsed()) return cmd_verify(acfg, out);
        if (sample->parsed())
            return cmd_sample(epsilon, truncation, mode, beta, dims_s, seed, out, format);
        if (mcmc->parsed())
            return cmd_mcmc(epsilon, truncation, mode, beta, dims_s, sweeps, burn_in,
                            thin, seed, init_s, w_global, out, format);
        if (demo->parsed())
            return cmd_ctd_demo(epsilon, truncation, mode, range, dims_s, sweeps,
                                burn_in, seed, out);
    } catch (const RegimeViolation& e) {
        std::cerr << "regime violation: " << e.what() << '\n';
        return kExitRegimeViolation;
    } catch (const ScheduleInfeasible& e) {
        std::cerr << "schedule infeasible: " << e.what() << '\n';
        return kExitRegimeViolation;
    } catch (const InvalidParams& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfigError;
    }
    return kExitConfigError;
}

} // namespace ringwell
