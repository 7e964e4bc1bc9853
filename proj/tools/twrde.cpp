#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "twrde/bp.hpp"
#include "twrde/channel.hpp"
#include "twrde/de.hpp"
#include "twrde/ensemble.hpp"
#include "twrde/error.hpp"
#include "twrde/format.hpp"
#include "twrde/kernels.hpp"
#include "twrde/threshold.hpp"
#include "twrde/version.hpp"

namespace {

using namespace twrde;

struct Common {
    std::uint64_t seed = kDefaultSeed;
    int threads = 1;
    std::string kernel = "auto";
    std::string out;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--seed", c.seed, "rng seed")->capture_default_str();
    sub->add_option("--threads", c.threads, "worker threads for population updates")
        ->capture_default_str();
    sub->add_option("--kernel", c.kernel, "array kernels: auto|scalar|avx2")
        ->check(CLI::IsMember({"auto", "scalar", "avx2"}))
        ->capture_default_str();
    sub->add_option("-o,--out", c.out, "write output here instead of stdout");
}

struct DeOpts {
    std::size_t population = 10000;
    int max_iters = 1000;
    std::size_t ber_samples = 0;
    double clip = kClipBound;
    int streak = 10;
    double target_ber = 0.0;
    bool paper_fidelity = false;
    CLI::Option *opt_population = nullptr, *opt_max_iters = nullptr;
};

void add_de_opts(CLI::App* sub, DeOpts& d) {
    d.opt_population = sub->add_option("-N,--population", d.population,
                                       "LLR samples per message population")
                           ->capture_default_str();
    d.opt_max_iters =
        sub->add_option("-T,--max-iters", d.max_iters, "iteration budget")->capture_default_str();
    sub->add_option("--ber-samples", d.ber_samples,
                    "fresh draws per position for the BER estimate (0: population size)");
    sub->add_option("--clip", d.clip, "message clip bound in nats")->capture_default_str();
    sub->add_option("--streak", d.streak, "zero-BER streak that certifies decodability")
        ->capture_default_str();
    sub->add_option("--target-ber", d.target_ber, "BER level counted as a zero-streak hit")
        ->capture_default_str();
    sub->add_flag("--paper-fidelity", d.paper_fidelity,
                  "population 100000 and budget 2000 unless given explicitly");
}

DeConfig make_cfg(const Common& c, const DeOpts& d) {
    DeOpts eff = d;
    if (d.paper_fidelity) {
        if (!d.opt_population->count()) eff.population = 100000;
        if (!d.opt_max_iters->count()) eff.max_iters = 2000;
    }
    DeConfig cfg;
    cfg.population_size = eff.population;
    cfg.max_iters = eff.max_iters;
    cfg.seed = c.seed;
    cfg.clip_bound = eff.clip;
    cfg.ber_samples = eff.ber_samples;
    cfg.zero_streak = eff.streak;
    cfg.target_ber = eff.target_ber;
    cfg.threads = c.threads;
    cfg.validate();
    return cfg;
}

struct OutStream {
    std::ofstream file;
    std::ostream* os = &std::cout;
    explicit OutStream(const std::string& path) {
        if (!path.empty()) {
            file.open(path, std::ios::binary);
            if (!file) throw Error("io-failure", "cannot open output file " + path);
            os = &file;
        }
    }
    std::ostream& get() { return *os; }
};

void select_kernel(const std::string& name) {
    if (!kern::select(name))
        throw Error("invalid-argument", "kernel '" + name + "' is not supported on this host");
}

void write_meta(std::ostream& os, const std::string& cmd, const Common& c) {
    os << "# twrde " << kVersion << "\n";
    os << "# cmd: " << cmd << "\n";
    os << "# seed: " << c.seed << "\n";
    os << "# kernel: " << kern::active().name << "\n";
    os << "# threads: " << c.threads << "\n";
}

void write_cfg_meta(std::ostream& os, const DeConfig& cfg) {
    os << "# population: " << cfg.population_size << "\n";
    os << "# max_iters: " << cfg.max_iters << "\n";
    os << "# ber_samples: " << cfg.effective_ber_samples() << "\n";
    os << "# clip: " << g17(cfg.clip_bound) << "\n";
    os << "# zero_streak: " << cfg.zero_streak << "\n";
    os << "# target_ber: " << g17(cfg.target_ber) << "\n";
}

std::string regular_label(int dl, int dr) {
    return "regular(" + std::to_string(dl) + "," + std::to_string(dr) + ")";
}

std::string sc_label(int dl, int dr, int L) {
    return "sc(" + std::to_string(dl) + "," + std::to_string(dr) + ",L=" + std::to_string(L) +
           ")";
}

// ---- sir ----------------------------------------------------------------

void run_sir(const Common& c, const std::string& cmd, const std::vector<double>& rates,
             const std::vector<double>& sigmas, const std::vector<double>& grid) {
    select_kernel(c.kernel);
    if (rates.empty() && sigmas.empty() && grid.empty())
        throw Error("invalid-argument", "pass --rate, --sigma, or --grid");

    std::vector<double> sig = sigmas;
    if (!grid.empty()) {
        const double lo = grid[0], hi = grid[1], step = grid[2];
        if (!(lo > 0.0) || !(hi >= lo) || !(step > 0.0))
            throw Error("invalid-argument", "--grid needs 0 < lo <= hi and step > 0");
        for (int k = 0;; ++k) {
            const double s = lo + k * step;
            if (s > hi + 1e-12) break;
            sig.push_back(s);
        }
    }

    OutStream out(c.out);
    auto& os = out.get();
    write_meta(os, cmd, c);
    if (!rates.empty()) {
        os << "rate,sigma_sym\n";
        for (double r : rates) os << g17(r) << "," << g17(sigma_sym(r)) << "\n";
    }
    if (!sig.empty()) {
        os << "sigma,c_sym\n";
        for (double s : sig) os << g17(s) << "," << g17(symmetric_information_rate(s)) << "\n";
    }
}

// ---- describe -----------------------------------------------------------

void run_describe(const Common& c, int dl, int dr, std::optional<int> L, bool uncoupled) {
    OutStream out(c.out);
    auto& os = out.get();
    if (L) {
        os << make_sc(dl, dr, *L).describe_json() << "\n";
    } else if (uncoupled) {
        os << make_uncoupled(dl, dr).describe_json() << "\n";
    } else {
        const auto e = make_regular(dl, dr);
        nlohmann::json j;
        j["type"] = "regular";
        j["dl"] = dl;
        j["dr"] = dr;
        j["design_rate"] = e.design_rate();
        j["sigma_sym_at_rate"] = sigma_sym(e.design_rate());
        os << j.dump(2) << "\n";
    }
}

// ---- de-trace -----------------------------------------------------------

void run_de_trace(const Common& c, const std::string& cmd, const DeOpts& d, int dl, int dr,
                  std::optional<int> L, double sigma) {
    select_kernel(c.kernel);
    const DeConfig cfg = make_cfg(c, d);
    const ChannelParams ch(sigma);

    std::string label;
    double rate;
    DeTrace trace;
    if (L) {
        const auto p = make_sc(dl, dr, *L);
        label = sc_label(dl, dr, *L);
        rate = p.design_rate();
        trace = de_run(p, ch, cfg);
    } else {
        const auto e = make_regular(dl, dr);
        label = regular_label(dl, dr);
        rate = e.design_rate();
        trace = de_run(e, ch, cfg);
    }

    OutStream out(c.out);
    auto& os = out.get();
    write_meta(os, cmd, c);
    write_cfg_meta(os, cfg);
    os << "# ensemble: " << label << "\n";
    os << "# design_rate: " << g17(rate) << "\n";
    os << "# sigma: " << g17(sigma) << "\n";
    os << "# decodable: " << (trace.decodable ? "true" : "false") << "\n";
    os << "# decoded_at: " << trace.decoded_at << "\n";
    os << "# iters_run: " << trace.iters_run << "\n";
    write_csv(os, trace);
}

// ---- threshold ----------------------------------------------------------

struct ThresholdRow {
    std::string label;
    std::optional<int> L;
    double design_rate;
    std::optional<double> sigma_sym_at_rate;
    double lo, hi;
    ThresholdResult res;
};

void run_threshold(const Common& c, const std::string& cmd, const DeOpts& d, int dl, int dr,
                  const std::vector<int>& Ls, std::vector<double> bracket, double tol,
                  const std::string& format) {
    select_kernel(c.kernel);
    const DeConfig cfg = make_cfg(c, d);
    if (!(tol > 0.0)) throw Error("invalid-argument", "--tol must be positive");

    auto resolve_bracket = [&](double rate) -> std::pair<double, double> {
        if (!bracket.empty()) return {bracket[0], bracket[1]};
        if (!(rate > 0.0))
            throw Error("invalid-argument",
                        "degenerate design rate; pass --bracket lo hi explicitly");
        if (rate <= 0.55) return {0.4, 1.0};
        return {0.3, 0.9};
    };

    std::vector<ThresholdRow> rows;
    if (Ls.empty()) {
        const auto e = make_regular(dl, dr);
        ThresholdRow row;
        row.label = regular_label(dl, dr);
        row.design_rate = e.design_rate();
        row.sigma_sym_at_rate = sigma_sym(e.design_rate());
        std::tie(row.lo, row.hi) = resolve_bracket(e.design_rate());
        row.res = bp_threshold(e, cfg, row.lo, row.hi, tol);
        rows.push_back(std::move(row));
    } else {
        for (int L : Ls) {
            const auto p = make_sc(dl, dr, L);
            ThresholdRow row;
            row.label = sc_label(dl, dr, L);
            row.L = L;
            row.design_rate = p.design_rate();
            if (!p.degenerate_rate()) row.sigma_sym_at_rate = sigma_sym(p.design_rate());
            std::tie(row.lo, row.hi) = resolve_bracket(p.design_rate());
            row.res = bp_threshold(p, cfg, row.lo, row.hi, tol);
            rows.push_back(std::move(row));
        }
    }

    std::optional<ExtrapolationResult> fit;
    {
        std::vector<std::pair<int, double>> pts;
        std::set<int> distinct;
        for (const auto& row : rows)
            if (row.L) {
                pts.emplace_back(*row.L, row.res.estimate);
                distinct.insert(*row.L);
            }
        if (pts.size() >= 3 && distinct.size() >= 2) fit = extrapolate_threshold(pts);
    }

    OutStream out(c.out);
    auto& os = out.get();
    if (format == "csv") {
        write_meta(os, cmd, c);
        write_cfg_meta(os, cfg);
        os << "ensemble,L,design_rate,sigma_star,sigma_sym\n";
        for (const auto& row : rows) {
            os << row.label << ",";
            if (row.L) os << *row.L;
            os << "," << g17(row.design_rate) << "," << g17(row.res.estimate) << ",";
            if (row.sigma_sym_at_rate) os << g17(*row.sigma_sym_at_rate);
            os << "\n";
        }
        if (fit) {
            os << "# extrapolation_sigma_inf: " << g17(fit->sigma_inf) << "\n";
            os << "# extrapolation_slope: " << g17(fit->slope) << "\n";
        }
        return;
    }

    nlohmann::json j;
    j["tool"] = std::string("twrde ") + kVersion;
    j["command"] = cmd;
    j["seed"] = c.seed;
    j["kernel"] = kern::active().name;
    j["config"] = {{"population", cfg.population_size},
                   {"max_iters", cfg.max_iters},
                   {"ber_samples", cfg.effective_ber_samples()},
                   {"clip", cfg.clip_bound},
                   {"zero_streak", cfg.zero_streak},
                   {"target_ber", cfg.target_ber},
                   {"threads", cfg.threads}};
    j["tol"] = tol;
    auto ens = nlohmann::json::array();
    for (const auto& row : rows) {
        nlohmann::json je;
        je["ensemble"] = row.label;
        if (row.L) je["L"] = *row.L;
        je["design_rate"] = row.design_rate;
        if (row.sigma_sym_at_rate)
            je["sigma_sym_at_rate"] = *row.sigma_sym_at_rate;
        else
            je["sigma_sym_at_rate"] = nullptr;
        je["bracket"] = {row.lo, row.hi};
        je["sigma_star"] = row.res.estimate;
        je["lower"] = row.res.lower;
        je["upper"] = row.res.upper;
        auto probes = nlohmann::json::array();
        for (const auto& p : row.res.probes)
            probes.push_back({{"sigma", p.sigma},
                              {"decodable", p.decodable},
                              {"iters_run", p.iters_run},
                              {"decoded_at", p.decoded_at}});
        je["probes"] = probes;
        ens.push_back(je);
    }
    j["ensembles"] = ens;
    if (fit)
        j["extrapolation"] = {{"sigma_inf", fit->sigma_inf},
                              {"slope", fit->slope},
                              {"residuals", fit->residuals}};
    os << j.dump(2) << "\n";
}

// ---- simulate -----------------------------------------------------------

void run_simulate(const Common& c, const std::string& cmd, int n, int dl, int dr, double sigma,
                  int trials, int iters, bool ml, std::size_t ml_max_dim) {
    select_kernel(c.kernel);
    OutStream out(c.out);
    auto& os = out.get();
    write_meta(os, cmd, c);
    os << "# ensemble: " << regular_label(dl, dr) << "\n";
    os << "# n: " << n << "\n";
    os << "# sigma: " << g17(sigma) << "\n";
    os << "# trials: " << trials << "\n";
    os << "# iters: " << iters << "\n";

    if (!ml) {
        const auto res = monte_carlo_ber(n, dl, dr, sigma, trials, iters, c.seed);
        os << "# graphs_flagged: " << res.graphs_flagged << "\n";
        os << "# fer: " << g17(res.fer) << "\n";
        os << "# fer_se: " << g17(res.fer_se) << "\n";
        os << "iteration,ber,ber_se\n";
        for (int l = 1; l <= iters; ++l)
            os << l << "," << g17(res.ber[std::size_t(l - 1)]) << ","
               << g17(res.ber_se[std::size_t(l - 1)]) << "\n";
        return;
    }

    if (trials < 1 || iters < 1)
        throw Error("invalid-argument", "trials and iters must be >= 1");
    ChannelParams ch(sigma);
    int bp_err = 0, ml_err = 0, flagged = 0;
    for (int trial = 0; trial < trials; ++trial) {
        Rng rng(c.seed, (std::uint64_t(5) << 56) | (std::uint64_t(trial) << 8));
        const TannerGraph g = sample_tanner(n, dl, dr, rng);
        flagged += g.repair_incomplete;
        const auto ef = echelon_form(g.parity_matrix());
        const Gf2Vec z = sample_nullspace(ef, rng);
        const Gf2Vec xa = sample_nullspace(ef, rng);
        Gf2Vec xb = xa;
        xb.xor_with(z);
        const auto y = transmit(xa, xb, ch, rng);
        std::vector<double> lam(y.size());
        ch.llr_batch(y, lam);
        std::vector<std::uint8_t> truth(std::size_t(n), 0);
        for (int t = 0; t < n; ++t) truth[std::size_t(t)] = z.get(std::size_t(t));
        bp_err += bp_decode(g, lam, iters).decision != truth;
        ml_err += ml_decode_exhaustive(g, lam, ml_max_dim) != truth;
    }
    os << "# graphs_flagged: " << flagged << "\n";
    os << "decoder,trials,block_errors,bler,bler_se\n";
    auto row = [&](const char* name, int errs) {
        const double p = double(errs) / trials;
        os << name << "," << trials << "," << errs << "," << g17(p) << ","
           << g17(std::sqrt(p * (1.0 - p) / trials)) << "\n";
    };
    row("bp", bp_err);
    row("ml", ml_err);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"density evolution and decoding tools for the binary two-way relay channel"};
    app.require_subcommand(1);

    std::string cmd;
    for (int i = 1; i < argc; ++i) {
        if (i > 1) cmd += ' ';
        cmd += argv[i];
    }

    // sir
    Common sir_c;
    std::vector<double> sir_rates, sir_sigmas, sir_grid;
    auto* sir = app.add_subcommand("sir", "symmetric information rate of the virtual channel");
    add_common(sir, sir_c);
    sir->add_option("--rate", sir_rates, "target rate(s); prints the matching noise level");
    sir->add_option("--sigma", sir_sigmas, "noise level(s); prints the achievable rate");
    sir->add_option("--grid", sir_grid, "sigma sweep: lo hi step")->expected(3);
    sir->callback([&] { run_sir(sir_c, cmd, sir_rates, sir_sigmas, sir_grid); });

    // describe
    Common desc_c;
    int desc_dl = 3, desc_dr = 6;
    std::optional<int> desc_L;
    bool desc_unc = false;
    auto* desc = app.add_subcommand("describe", "dump ensemble structure as JSON");
    add_common(desc, desc_c);
    desc->add_option("--dl", desc_dl, "variable degree")->required();
    desc->add_option("--dr", desc_dr, "check degree")->required();
    desc->add_option("--L", desc_L, "chain length of the coupled ensemble");
    desc->add_flag("--uncoupled", desc_unc, "single-position protograph view");
    desc->callback([&] { run_describe(desc_c, desc_dl, desc_dr, desc_L, desc_unc); });

    // de-trace
    Common tr_c;
    DeOpts tr_d;
    int tr_dl = 3, tr_dr = 6;
    std::optional<int> tr_L;
    double tr_sigma = 0.0;
    auto* tr = app.add_subcommand("de-trace", "density evolution BER trace at one noise level");
    add_common(tr, tr_c);
    add_de_opts(tr, tr_d);
    tr->add_option("--dl", tr_dl, "variable degree")->required();
    tr->add_option("--dr", tr_dr, "check degree")->required();
    tr->add_option("--L", tr_L, "chain length; omit for the uncoupled ensemble");
    tr->add_option("--sigma", tr_sigma, "channel noise level")->required();
    tr->callback([&] { run_de_trace(tr_c, cmd, tr_d, tr_dl, tr_dr, tr_L, tr_sigma); });

    // threshold
    Common th_c;
    DeOpts th_d;
    int th_dl = 3, th_dr = 6;
    std::vector<int> th_Ls;
    std::vector<double> th_bracket;
    double th_tol = 2e-3;
    std::string th_format = "json";
    auto* th = app.add_subcommand("threshold", "bisect the decodability boundary in sigma");
    add_common(th, th_c);
    add_de_opts(th, th_d);
    th->add_option("--dl", th_dl, "variable degree")->required();
    th->add_option("--dr", th_dr, "check degree")->required();
    th->add_option("--L", th_Ls, "chain length(s); three or more fit the 1/L extrapolation");
    th->add_option("--bracket", th_bracket, "initial bisection bracket lo hi")->expected(2);
    th->add_option("--tol", th_tol, "bracket width at which bisection stops")
        ->capture_default_str();
    th->add_option("--format", th_format, "json|csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    th->callback(
        [&] { run_threshold(th_c, cmd, th_d, th_dl, th_dr, th_Ls, th_bracket, th_tol, th_format); });

    // simulate
    Common sim_c;
    int sim_n = 10000, sim_dl = 3, sim_dr = 6, sim_trials = 10, sim_iters = 50;
    double sim_sigma = 0.0;
    bool sim_ml = false;
    std::size_t sim_mlmax = 20;
    auto* sim = app.add_subcommand("simulate", "finite-length Monte Carlo relay decoding");
    add_common(sim, sim_c);
    sim->add_option("--n", sim_n, "code length")->required();
    sim->add_option("--dl", sim_dl, "variable degree")->required();
    sim->add_option("--dr", sim_dr, "check degree")->required();
    sim->add_option("--sigma", sim_sigma, "channel noise level")->required();
    sim->add_option("--trials", sim_trials, "independent graph and codeword draws")
        ->capture_default_str();
    sim->add_option("--iters", sim_iters, "decoder iteration budget")->capture_default_str();
    sim->add_flag("--ml", sim_ml, "also run the exhaustive decoder and compare block errors");
    sim->add_option("--ml-max-dim", sim_mlmax, "largest null-space dimension to enumerate")
        ->capture_default_str();
    sim->callback([&] {
        run_simulate(sim_c, cmd, sim_n, sim_dl, sim_dr, sim_sigma, sim_trials, sim_iters, sim_ml,
                     sim_mlmax);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const twrde::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
