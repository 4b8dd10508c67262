// Copyright (c) 2026 nxl contributors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: feasibility tables, single-foil emission series,
// the N-foil cascade, and the pumping Monte Carlo.  Every run leaves a
// manifest.json with digests of all artifacts; reruns with identical
// inputs are byte-identical.

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nxl/cascade.hpp"
#include "nxl/emission.hpp"
#include "nxl/io.hpp"
#include "nxl/nuclides.hpp"
#include "nxl/pump.hpp"
#include "nxl/units.hpp"
#include "nxl/version.hpp"

namespace fs = std::filesystem;

namespace {

struct Options {
    std::vector<std::string> scenarios;
    std::string out = ".";
    int grid_points = 0;        // 0: use scenario value
    double t_max_factor = 0.0;  // 0: use scenario value
    std::uint64_t seed = 1;
    int ensemble = 1000;
    bool dump_series = false;
    int jobs = 1;
};

std::string fmt6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

constexpr std::size_t mc_subpulses = 1000;

nxl::Scenario load_with_overrides(const std::string& path, const Options& opt) {
    nxl::Scenario sc = nxl::load_scenario(path);
    if (opt.grid_points > 0) {
        if (opt.grid_points < 16) {
            throw nxl::ConfigError("--grid-points: expected >= 16");
        }
        sc.grid_points = opt.grid_points;
    }
    if (opt.t_max_factor > 0.0) sc.t_max_factor = opt.t_max_factor;
    return sc;
}

nxl::RunManifest base_manifest(const std::string& command,
                               const std::string& scenario_path,
                               const nxl::Scenario& sc) {
    nxl::RunManifest m;
    m.command = command;
    m.scenario_path = scenario_path;
    m.parameters = {
        {"transition", sc.transition.label},
        {"omega_eV", sc.transition.omega.to_ev()},
        {"gamma_single_eV", sc.transition.gamma_single.to_ev()},
        {"lifetime_s", sc.transition.lifetime.to_seconds()},
        {"n_foils", sc.n_foils},
        {"s_first", sc.s_first},
        {"s_rest", sc.s_rest},
        {"l_perp_nm", sc.l_perp.to_nanometers()},
        {"grid_points", sc.grid_points},
        {"t_max_factor", sc.t_max_factor},
        {"n_wavecycles", sc.n_wavecycles},
    };
    return m;
}

void cmd_feasibility(const std::string& path, const nxl::Scenario& sc,
                     const fs::path& out_dir, const Options&,
                     std::ostream& out, std::ostream&) {
    nxl::Foil first(sc.transition, sc.s_first, 0.5 * sc.s_first, sc.l_perp);
    double tau_single_s = sc.transition.lifetime.to_seconds();
    nxl::Quantity tau_sp = nxl::tau_spontaneous(first);
    double ratio = tau_sp.to_seconds() / tau_single_s;
    double advantage = nxl::coherence_advantage(sc.s_first, sc.l_perp,
                                                sc.transition.wavelength());
    double g_tilde = nxl::coupling_from_linewidth(sc.transition);
    nxl::Quantity i_pump =
        nxl::required_pump_intensity(sc.transition, sc.n_wavecycles);
    double area = nxl::pi_pulse_area(g_tilde);

    out << "feasibility: " << sc.transition.label << " (S1 = "
        << fmt6(sc.s_first) << ", L_perp = " << fmt6(sc.l_perp.to_micrometers())
        << " um)\n";
    out << "  tau_single        " << fmt6(tau_single_s) << " s\n";
    out << "  tau_sp            " << fmt6(tau_sp.to_seconds()) << " s\n";
    out << "  tau_sp/tau_single " << fmt6(ratio) << "\n";
    out << "  g_tilde           " << fmt6(g_tilde) << "\n";
    out << "  gamma_coll        " << fmt6(first.gamma_coll.to_ev()) << " eV\n";
    out << "  I_pump(N=" << fmt6(sc.n_wavecycles) << ")  "
        << fmt6(i_pump.to_w_per_cm2()) << " W/cm^2\n";
    out << "  pi_pulse_area     " << fmt6(area) << "\n";

    nlohmann::json j = {
        {"transition", sc.transition.label},
        {"tau_single_s", tau_single_s},
        {"tau_sp_s", tau_sp.to_seconds()},
        {"advantage_ratio", ratio},
        {"advantage_ratio_geometric", advantage},
        {"g_tilde", g_tilde},
        {"gamma_coll_eV", first.gamma_coll.to_ev()},
        {"n_wavecycles", sc.n_wavecycles},
        {"i_pump_W_per_cm2", i_pump.to_w_per_cm2()},
        {"pi_pulse_area", area},
    };
    nxl::RunManifest m = base_manifest("feasibility", path, sc);
    nxl::emit_artifact(m, out_dir, "feasibility.json", j.dump(2) + "\n");
    m.write(out_dir);
}

void cmd_emission(const std::string& path, const nxl::Scenario& sc,
                  const fs::path& out_dir, const Options&,
                  std::ostream& out, std::ostream&) {
    nxl::Foil first(sc.transition, sc.s_first, 0.5 * sc.s_first, sc.l_perp);
    nxl::Quantity tau_sp = nxl::tau_spontaneous(first);
    nxl::TimeGrid grid{sc.t_max_factor * tau_sp.value()
                           / double(sc.grid_points - 1),
                       static_cast<std::size_t>(sc.grid_points)};
    nxl::PulseSeries series = nxl::spontaneous_series(first, grid);

    std::ostringstream csv;
    series.write_csv(csv);
    nxl::RunManifest m = base_manifest("emission", path, sc);
    nxl::emit_artifact(m, out_dir, "emission.csv", csv.str());
    m.write(out_dir);

    out << "emission: " << sc.transition.label << ", tau_sp = "
        << fmt6(tau_sp.to_seconds()) << " s, peak = "
        << fmt6(series.intensity()[0] * nxl::constants::ev4_w_per_cm2)
        << " W/cm^2, " << grid.n << " samples\n";
}

void cmd_cascade(const std::string& path, const nxl::Scenario& sc,
                 const fs::path& out_dir, const Options& opt,
                 std::ostream& out, std::ostream& err) {
    nxl::CascadeResult result = nxl::run_cascade(sc, opt.dump_series);

    nlohmann::json per_foil = nlohmann::json::array();
    for (const auto& f : result.per_foil) {
        per_foil.push_back({
            {"n", f.n},
            {"tau_st_s", f.tau_st.to_seconds()},
            {"avg_intensity_W_per_cm2", f.avg_intensity.to_w_per_cm2()},
            {"clamp_events", f.clamp_events},
        });
    }
    std::size_t total_clamps = 0;
    for (const auto& f : result.per_foil) total_clamps += f.clamp_events;

    nlohmann::json summary = {
        {"transition", sc.transition.label},
        {"n_foils", sc.n_foils},
        {"tau_sp_s", result.per_foil.front().tau_st.to_seconds()},
        {"per_foil", per_foil},
        {"warnings", result.warnings},
        {"total_clamp_events", total_clamps},
    };
    if (std::isnan(result.fit_exponent)) {
        summary["fit"] = nullptr;
    } else {
        summary["fit"] = {
            {"exponent", result.fit_exponent},
            {"amplitude_W_per_cm2",
             result.fit_amplitude * nxl::constants::ev4_w_per_cm2},
            {"r2", result.fit_r2},
        };
    }
    if (sc.n_foils >= 2) {
        summary["pulse_area_residual"] = nxl::pulse_area_identity_check(
            result, nxl::coupling_from_linewidth(sc.transition),
            sc.transition.omega);
    } else {
        summary["pulse_area_residual"] = nullptr;
    }

    std::ostringstream fig3;
    fig3 << "n,avg_over_avg2\n";
    if (sc.n_foils >= 2) {
        double avg2 = result.per_foil[1].avg_intensity.value();
        for (const auto& f : result.per_foil) {
            if (f.n < 2) continue;
            fig3 << f.n << ','
                 << nxl::format_number(f.avg_intensity.value() / avg2) << '\n';
        }
    }

    nxl::RunManifest m = base_manifest("cascade", path, sc);
    nxl::emit_artifact(m, out_dir, "cascade_summary.json",
                       summary.dump(2) + "\n");
    nxl::emit_artifact(m, out_dir, "fig3.csv", fig3.str());
    if (opt.dump_series) {
        for (std::size_t i = 0; i < result.series_total.size(); ++i) {
            char name[32];
            std::snprintf(name, sizeof(name), "foil_%03d_total.csv",
                          int(i + 1));
            std::ostringstream csv;
            result.series_total[i].write_csv(csv);
            nxl::emit_artifact(m, out_dir, name, csv.str());
        }
    }
    m.write(out_dir);

    for (const auto& w : result.warnings) err << "warning: " << w << '\n';
    out << "cascade: " << sc.n_foils << " foils";
    if (!std::isnan(result.fit_exponent)) {
        out << ", fit exponent " << fmt6(result.fit_exponent) << " (r2 "
            << fmt6(result.fit_r2) << ")";
    }
    out << ", gain avg[N]/avg[2] ";
    if (sc.n_foils >= 2) {
        out << fmt6(result.per_foil.back().avg_intensity.value()
                    / result.per_foil[1].avg_intensity.value());
    } else {
        out << "n/a";
    }
    out << '\n';
}

std::string mc_csv(const nxl::PumpMcResult& r) {
    std::ostringstream csv;
    csv << "j,mean_n,stderr_n\n";
    for (const auto& row : r.rows) {
        csv << row.j << ',' << nxl::format_number(row.mean_n) << ','
            << nxl::format_number(row.stderr_n) << '\n';
    }
    return csv.str();
}

nxl::PowerLawFit mc_slope(const nxl::PumpMcResult& r) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& row : r.rows) {
        if (row.j >= 10) pts.emplace_back(double(row.j), row.mean_n);
    }
    return nxl::fit_power_law(pts);
}

void cmd_pump_mc(const std::string& path, const nxl::Scenario& sc,
                 const fs::path& out_dir, const Options& opt,
                 std::ostream& out, std::ostream& err) {
    double g_tilde = nxl::coupling_from_linewidth(sc.transition);
    double big_s = sc.s_rest;
    // |beta| = 0.01 per sub-pulse keeps the walk deep inside the
    // Holstein-Primakoff regime for the default 1000 sub-pulses.
    double area = 0.01 / (g_tilde * std::sqrt(big_s));

    nxl::PumpMcResult incoherent = nxl::simulate_incoherent_pump(
        big_s, g_tilde, area, mc_subpulses, opt.seed,
        static_cast<std::size_t>(opt.ensemble), true);
    nxl::PumpMcResult coherent = nxl::simulate_incoherent_pump(
        big_s, g_tilde, area, mc_subpulses, opt.seed,
        static_cast<std::size_t>(opt.ensemble), false);

    nxl::PowerLawFit fit_inc = mc_slope(incoherent);
    nxl::PowerLawFit fit_coh = mc_slope(coherent);

    nlohmann::json summary = {
        {"s", big_s},
        {"g_tilde", g_tilde},
        {"sub_pulse_area", area},
        {"beta_per_subpulse", incoherent.beta_per_subpulse},
        {"subpulses", mc_subpulses},
        {"ensemble", opt.ensemble},
        {"seed", opt.seed},
        {"incoherent",
         {{"slope", fit_inc.exponent},
          {"r2", fit_inc.r2},
          {"regime_warning", incoherent.regime_warning}}},
        {"coherent",
         {{"slope", fit_coh.exponent},
          {"r2", fit_coh.r2},
          {"regime_warning", coherent.regime_warning}}},
    };

    nxl::RunManifest m = base_manifest("pump-mc", path, sc);
    m.seed = opt.seed;
    m.parameters["ensemble"] = opt.ensemble;
    m.parameters["subpulses"] = mc_subpulses;
    m.parameters["sub_pulse_area"] = area;
    nxl::emit_artifact(m, out_dir, "pump_mc_incoherent.csv",
                       mc_csv(incoherent));
    nxl::emit_artifact(m, out_dir, "pump_mc_coherent.csv", mc_csv(coherent));
    nxl::emit_artifact(m, out_dir, "pump_mc_summary.json",
                       summary.dump(2) + "\n");
    m.write(out_dir);

    if (incoherent.regime_warning || coherent.regime_warning) {
        err << "warning: exciton number approaches S; "
               "Holstein-Primakoff picture degrading\n";
    }
    out << "pump-mc: incoherent slope " << fmt6(fit_inc.exponent)
        << ", coherent slope " << fmt6(fit_coh.exponent) << " (ensemble "
        << opt.ensemble << ", seed " << opt.seed << ")\n";
}

// 0 = ok, 1 = simulation failure, 2 = usage/config failure.
int run_one(const std::string& command, const std::string& scenario_path,
            const fs::path& out_dir, const Options& opt, std::ostream& out,
            std::ostream& err) {
    try {
        nxl::Scenario sc = load_with_overrides(scenario_path, opt);
        fs::create_directories(out_dir);
        if (command == "feasibility") {
            cmd_feasibility(scenario_path, sc, out_dir, opt, out, err);
        } else if (command == "emission") {
            cmd_emission(scenario_path, sc, out_dir, opt, out, err);
        } else if (command == "cascade") {
            cmd_cascade(scenario_path, sc, out_dir, opt, out, err);
        } else {
            cmd_pump_mc(scenario_path, sc, out_dir, opt, out, err);
        }
        return 0;
    } catch (const nxl::ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    } catch (const nxl::Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return 1;
    }
}

int run_command(const std::string& command, const Options& opt) {
    const bool batch = opt.scenarios.size() > 1;
    std::vector<std::ostringstream> outs(opt.scenarios.size());
    std::vector<std::ostringstream> errs(opt.scenarios.size());
    std::vector<int> codes(opt.scenarios.size(), 0);

    auto worker = [&](std::size_t i) {
        const std::string& path = opt.scenarios[i];
        fs::path out_dir = opt.out;
        if (batch) out_dir /= fs::path(path).stem();
        codes[i] = run_one(command, path, out_dir, opt, outs[i], errs[i]);
    };

    int jobs = std::max(1, opt.jobs);
    if (jobs == 1 || opt.scenarios.size() == 1) {
        for (std::size_t i = 0; i < opt.scenarios.size(); ++i) worker(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        std::size_t nthreads =
            std::min<std::size_t>(jobs, opt.scenarios.size());
        for (std::size_t t = 0; t < nthreads; ++t) {
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1);
                     i < opt.scenarios.size(); i = next.fetch_add(1)) {
                    worker(i);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    int exit_code = 0;
    for (std::size_t i = 0; i < opt.scenarios.size(); ++i) {
        std::cout << outs[i].str();
        std::cerr << errs[i].str();
        exit_code = std::max(exit_code, codes[i]);
    }
    return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nuclear-exciton laser feasibility and cascade simulator"};
    app.set_version_flag("--version", std::string(nxl::version));
    app.require_subcommand(1);

    Options opt;
    std::string command;
    for (const char* name :
         {"feasibility", "emission", "cascade", "pump-mc"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--scenario", opt.scenarios, "scenario JSON file")
            ->required();
        sub->add_option("--out", opt.out, "output directory");
        sub->add_option("--grid-points", opt.grid_points,
                        "override scenario grid_points");
        sub->add_option("--t-max-factor", opt.t_max_factor,
                        "override scenario t_max_factor");
        sub->add_option("--seed", opt.seed, "PRNG seed (pump-mc)");
        sub->add_option("--ensemble", opt.ensemble,
                        "Monte Carlo ensemble size (pump-mc)");
        sub->add_flag("--dump-series", opt.dump_series,
                      "write per-foil intensity series (cascade)");
        sub->add_option("--jobs", opt.jobs,
                        "parallel jobs for scenario batches");
        sub->callback([&command, name] { command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (opt.ensemble < 1) {
        std::cerr << "config error: --ensemble must be >= 1\n";
        return 2;
    }
    return run_command(command, opt);
}
