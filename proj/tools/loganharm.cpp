#include "loganharm/eigensolver.hpp"
#include "loganharm/errors.hpp"
#include "loganharm/experiments.hpp"
#include "loganharm/largen.hpp"
#include "loganharm/potentials.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace {

using loganharm::potential_spec;
using ordered_json = nlohmann::ordered_json;

struct run_config {
    // potential
    std::string family = "log";
    double omega = 1.0;
    double g = 1.0;
    double lambda = -2.0;
    double alpha = 0.01;
    int p = 2;
    double N = 1.0;
    double c = 0.0;
    // solver
    int levels = 4;
    double tol = 1e-8;
    int initial_n = 2048;
    int refinements = 8;
    double domain_scale = 1.0;
    bool wavefunctions = false;
    // validity diagnostics
    int n_of_interest = 0;
    double c_lo = loganharm::default_c_lo;
    // output
    std::string format = "json";
    std::string out;
};

struct reproduce_config {
    std::string target;
    double tol = 0.0;   // 0 = per-target default
    double omega = 1.0;
    double lambda = -2.0;
    double g = 1.0;
    std::vector<double> alphas;
    std::vector<double> omega_list;
    std::string format = "json";
    std::string out;
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

potential_spec make_spec(const run_config& cfg) {
    const std::string& f = cfg.family;
    if (f == "log" || f == "loganharmonic")
        return loganharm::log_anharmonic{cfg.omega, cfg.g};
    if (f == "quad" || f == "quadratic") return loganharm::quadratic{cfg.omega};
    if (f == "power" || f == "powerlaw")
        return loganharm::power_law{cfg.omega, cfg.lambda, cfg.alpha};
    if (f == "logpower")
        return loganharm::log_power{cfg.omega, cfg.g, cfg.p};
    if (f == "centrifugal") return loganharm::centrifugal{cfg.N};
    if (f == "quadlogwell") return loganharm::quad_log_well{cfg.c};
    throw std::invalid_argument(
        "unknown family '" + f +
        "' (expected log, quad, power, logpower, centrifugal, quadlogwell)");
}

ordered_json params_json(const potential_spec& spec) {
    return std::visit(
        [](const auto& s) -> ordered_json {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, loganharm::quadratic>)
                return {{"omega", s.omega}};
            else if constexpr (std::is_same_v<T, loganharm::log_anharmonic>)
                return {{"omega", s.omega}, {"g", s.g}};
            else if constexpr (std::is_same_v<T, loganharm::power_law>)
                return {{"omega", s.omega}, {"lambda", s.lambda}, {"alpha", s.alpha}};
            else if constexpr (std::is_same_v<T, loganharm::log_power>)
                return {{"omega", s.omega}, {"g", s.g}, {"p", s.p}};
            else if constexpr (std::is_same_v<T, loganharm::centrifugal>)
                return {{"N", s.N}};
            else
                return {{"c", s.c}};
        },
        spec);
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream os(out_path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open output file: " + out_path);
    os << text;
    if (!os) throw std::runtime_error("write failed: " + out_path);
}

const char* parity_name(loganharm::parity p) {
    switch (p) {
        case loganharm::parity::even: return "even";
        case loganharm::parity::odd: return "odd";
        default: return "none";
    }
}

int run_spectrum(const run_config& cfg) {
    const potential_spec spec = make_spec(cfg);
    loganharm::validate(spec);

    loganharm::converge_options opts;
    opts.initial_n = cfg.initial_n;
    opts.max_refinements = cfg.refinements;
    opts.domain_scale = cfg.domain_scale;
    const loganharm::converge_result conv =
        loganharm::converge(spec, cfg.levels, cfg.tol, opts);

    loganharm::eigen_result states;
    if (cfg.wavefunctions)
        states = loganharm::solve_lowest(spec, conv.grid_used, cfg.levels);

    if (cfg.format == "csv") {
        std::ostringstream os;
        if (cfg.wavefunctions) {
            loganharm::dump_csv(os, spec, states);
        } else {
            os << "# loganharm-lab v1\n";
            os << "# command=spectrum family=" << loganharm::family_name(spec)
               << " tol=" << fmt(cfg.tol)
               << " achieved_tol=" << fmt(conv.achieved_tol)
               << " grid_points=" << conv.grid_used.n_points << "\n";
            os << "n,energy\n";
            for (std::size_t i = 0; i < conv.energies.size(); ++i)
                os << i << ',' << fmt(conv.energies[i]) << "\n";
        }
        emit(os.str(), cfg.out);
        return 0;
    }

    ordered_json j;
    j["command"] = "spectrum";
    j["family"] = loganharm::family_name(spec);
    j["params"] = params_json(spec);
    j["tol"] = cfg.tol;
    j["energies"] = conv.energies;
    j["achieved_tol"] = conv.achieved_tol;
    j["refinements"] = conv.refinements;
    j["grid"] = {{"x_lo", conv.grid_used.x_lo},
                 {"x_hi", conv.grid_used.x_hi},
                 {"n_points", conv.grid_used.n_points}};
    if (cfg.wavefunctions) {
        ordered_json par = ordered_json::array();
        for (auto p : states.parities) par.push_back(parity_name(p));
        j["parities"] = par;
        j["residuals"] = states.residuals;
        j["nodes"] = states.nodes;
        j["wavefunctions"] = states.wavefunctions;
    }
    emit(j.dump(2), cfg.out);
    return 0;
}

int run_largen(const run_config& cfg) {
    const potential_spec spec = make_spec(cfg);
    loganharm::validate(spec);

    const loganharm::largen_estimate est =
        loganharm::estimate_spectrum(spec, cfg.levels - 1);
    const bool is_log =
        std::holds_alternative<loganharm::log_anharmonic>(spec);
    const bool is_cf = std::holds_alternative<loganharm::centrifugal>(spec);
    std::vector<double> exact;
    if (is_cf)
        exact = loganharm::centrifugal_exact(
            std::get<loganharm::centrifugal>(spec).N, cfg.levels - 1);

    if (cfg.format == "csv") {
        std::ostringstream os;
        os << "# loganharm-lab v1\n";
        os << "# command=largen family=" << loganharm::family_name(spec)
           << " R=" << fmt(est.R) << " offset=" << fmt(est.offset)
           << " spacing=" << fmt(est.spacing) << "\n";
        if (is_log) {
            const auto& ls = std::get<loganharm::log_anharmonic>(spec);
            const auto rep =
                loganharm::assess_validity(ls, cfg.n_of_interest, cfg.c_lo);
            os << "# regime=" << loganharm::regime_name(rep.r)
               << " barrier_gap=" << fmt(rep.barrier_gap)
               << " xi_lower=" << fmt(rep.xi_lower) << "\n";
        }
        os << (is_cf ? "n,shift,energy,exact\n" : "n,shift,energy\n");
        for (std::size_t n = 0; n < est.levels.size(); ++n) {
            os << n << ',' << fmt(est.levels[n]) << ','
               << fmt(est.offset + est.levels[n]);
            if (is_cf) os << ',' << fmt(exact[n]);
            os << "\n";
        }
        emit(os.str(), cfg.out);
        return 0;
    }

    ordered_json j;
    j["command"] = "largen";
    j["family"] = loganharm::family_name(spec);
    j["params"] = params_json(spec);
    j["estimate"] = {{"offset", est.offset},
                     {"spacing", est.spacing},
                     {"R", est.R},
                     {"shifts", est.levels}};
    ordered_json rows = ordered_json::array();
    for (std::size_t n = 0; n < est.levels.size(); ++n) {
        ordered_json row = {{"n", n},
                            {"shift", est.levels[n]},
                            {"energy", est.offset + est.levels[n]}};
        if (is_cf) row["exact"] = exact[n];
        rows.push_back(row);
    }
    j["rows"] = rows;
    if (is_log) {
        const auto& ls = std::get<loganharm::log_anharmonic>(spec);
        const auto rep =
            loganharm::assess_validity(ls, cfg.n_of_interest, cfg.c_lo);
        j["validity"] = {{"R", rep.R},
                         {"ratio_g_sqrtomega", rep.ratio_g_sqrtomega},
                         {"xi_lower", rep.xi_lower},
                         {"xi_upper", rep.xi_upper},
                         {"barrier_gap", rep.barrier_gap},
                         {"regime", loganharm::regime_name(rep.r)}};
        const auto ov = loganharm::approximant_overlap(ls);
        j["overlap"] = {{"value", ov.value}, {"log_value", ov.log_value}};
    }
    emit(j.dump(2), cfg.out);
    return 0;
}

std::vector<double> default_sweep_omegas() {
    std::vector<double> w(10);
    for (int i = 0; i < 10; ++i) w[i] = std::pow(10.0, -3.0 + 3.0 * i / 9.0);
    return w;
}

int run_reproduce(const reproduce_config& cfg) {
    const std::string& t = cfg.target;
    auto tol_or = [&](double d) { return cfg.tol > 0.0 ? cfg.tol : d; };
    std::string text;
    bool pass = false;

    if (t == "table1") {
        const auto r = loganharm::table1(tol_or(1e-8));
        text = cfg.format == "csv" ? r.to_csv() : r.to_json();
        pass = r.pass;
    } else if (t == "fig1" || t == "fig2" || t == "fig3" || t == "fig4") {
        const loganharm::figure which =
            t == "fig1" ? loganharm::figure::fig1
            : t == "fig2" ? loganharm::figure::fig2
            : t == "fig3" ? loganharm::figure::fig3
                          : loganharm::figure::fig4;
        const auto r = loganharm::figure_data(which, tol_or(1e-6));
        text = cfg.format == "csv" ? r.to_csv() : r.to_json();
        pass = r.pass;
    } else if (t == "delta") {
        std::vector<double> alphas = cfg.alphas;
        if (alphas.empty()) alphas = {0.04, 0.02, 0.01, 0.005};
        const auto r = loganharm::delta_expansion_check(cfg.omega, cfg.lambda,
                                                        alphas, tol_or(1e-7));
        text = cfg.format == "csv" ? r.to_csv() : r.to_json();
        pass = r.pass;
    } else if (t == "sweep") {
        std::vector<double> omegas = cfg.omega_list;
        if (omegas.empty()) omegas = default_sweep_omegas();
        const auto r = loganharm::splitting_sweep(cfg.g, omegas, tol_or(1e-6));
        text = cfg.format == "csv" ? r.to_csv() : r.to_json();
        pass = r.pass;
    } else {
        std::cerr << "unknown target '" << t
                  << "' (expected table1, fig1, fig2, fig3, fig4, delta, sweep)\n";
        return 1;
    }

    emit(text, cfg.out);
    if (!pass) {
        std::cerr << "reproduction assertions failed for target '" << t << "'\n";
        return 3;
    }
    return 0;
}

void add_output_options(CLI::App* sc, std::string& format, std::string& out) {
    sc->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    sc->add_option("--out", out, "write output to this path instead of stdout");
}

void add_family_options(CLI::App* sc, run_config& cfg) {
    sc->add_option("--family", cfg.family,
                   "potential family: log, quad, power, logpower, centrifugal, "
                   "quadlogwell")
        ->capture_default_str();
    sc->add_option("--omega", cfg.omega, "harmonic frequency")
        ->capture_default_str();
    sc->add_option("--g", cfg.g, "logarithmic coupling")->capture_default_str();
    sc->add_option("--lambda", cfg.lambda, "power-law coupling (power family)")
        ->capture_default_str();
    sc->add_option("--alpha", cfg.alpha, "power-law exponent (power family)")
        ->capture_default_str();
    sc->add_option("--p", cfg.p, "log power (logpower family)")
        ->capture_default_str();
    sc->add_option("--N", cfg.N, "angular quantum number (centrifugal family)")
        ->capture_default_str();
    sc->add_option("--c", cfg.c, "well offset (quadlogwell family)")
        ->capture_default_str();
    sc->add_option("--levels", cfg.levels, "number of levels n=0..levels-1")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "loganharm: bound states of one-dimensional Schrodinger operators "
        "with logarithmic anharmonicity"};
    app.footer("Environment: LOGANHARM_THREADS caps worker threads.");
    app.set_config("--config", "", "read options from an INI-style file");
    app.allow_config_extras(false);
    app.require_subcommand(1);

    run_config scfg;
    CLI::App* sp = app.add_subcommand(
        "spectrum", "grid-converged energies (and optionally wavefunctions)");
    add_family_options(sp, scfg);
    sp->add_option("--tol", scfg.tol, "convergence tolerance")
        ->capture_default_str();
    sp->add_option("--initial-n", scfg.initial_n, "starting grid size")
        ->check(CLI::Range(16, 1 << 22))
        ->capture_default_str();
    sp->add_option("--refinements", scfg.refinements, "maximum grid refinements")
        ->check(CLI::Range(0, 16))
        ->capture_default_str();
    sp->add_option("--domain-scale", scfg.domain_scale,
                   "multiplier on the automatic domain half-width")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sp->add_flag("--wavefunctions", scfg.wavefunctions,
                 "include wavefunction samples in the output");
    add_output_options(sp, scfg.format, scfg.out);

    run_config lcfg;
    CLI::App* ln = app.add_subcommand(
        "largen", "leading-order analytic estimate and validity diagnostics");
    add_family_options(ln, lcfg);
    ln->add_option("--n-of-interest", lcfg.n_of_interest,
                   "level used in the barrier-gap diagnostic")
        ->capture_default_str();
    ln->add_option("--c-lo", lcfg.c_lo,
                   "tail-mass constant in xi_lower = c_lo/sqrt(omega)")
        ->capture_default_str();
    add_output_options(ln, lcfg.format, lcfg.out);

    reproduce_config rcfg;
    CLI::App* rp = app.add_subcommand(
        "reproduce", "rebuild a published table or figure and check it");
    rp->add_option("target", rcfg.target,
                   "one of: table1, fig1, fig2, fig3, fig4, delta, sweep")
        ->required();
    rp->add_option("--tol", rcfg.tol,
                   "convergence tolerance (0 = per-target default)");
    rp->add_option("--omega", rcfg.omega, "delta target: frequency")
        ->capture_default_str();
    rp->add_option("--lambda", rcfg.lambda, "delta target: power-law coupling")
        ->capture_default_str();
    rp->add_option("--g", rcfg.g, "sweep target: coupling")
        ->capture_default_str();
    rp->add_option("--alpha", rcfg.alphas,
                   "delta target: comma-separated exponent list")
        ->delimiter(',');
    rp->add_option("--omega-list", rcfg.omega_list,
                   "sweep target: comma-separated frequencies")
        ->delimiter(',');
    add_output_options(rp, rcfg.format, rcfg.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(sp)) return run_spectrum(scfg);
        if (app.got_subcommand(ln)) return run_largen(lcfg);
        return run_reproduce(rcfg);
    } catch (const loganharm::convergence_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        if (!e.best_energies.empty()) {
            std::cerr << "best estimate (n=" << e.last_n_points << " cells):";
            for (double v : e.best_energies) {
                char buf[32];
                std::snprintf(buf, sizeof buf, " %.12g", v);
                std::cerr << buf;
            }
            std::cerr << "\n";
        }
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
