// Copyright (c) 2026 nxl contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nxl/errors.hpp"
#include "nxl/units.hpp"

namespace nxl {

// A recoil-free Moessbauer transition.  gamma_single is the radiative
// linewidth of one nucleus; lifetime is its inverse, kept alongside so
// either view is available without conversion noise.
struct Transition {
    std::string label;
    Quantity omega;         // transition energy
    Quantity gamma_single;  // single-nucleus linewidth (energy)
    Quantity lifetime;      // 1/gamma_single (time)

    static Transition from_lifetime(std::string label, Quantity omega,
                                    Quantity lifetime) {
        omega.require_dim(1, "energy");
        if (omega.value() <= 0.0)
            throw DomainError("transition energy must be positive");
        Quantity gamma = time_to_energy(lifetime);
        return {std::move(label), omega, gamma, lifetime};
    }

    static Transition from_linewidth(std::string label, Quantity omega,
                                     Quantity gamma) {
        omega.require_dim(1, "energy");
        if (omega.value() <= 0.0)
            throw DomainError("transition energy must be positive");
        Quantity lifetime = energy_to_time(gamma);
        return {std::move(label), omega, gamma, lifetime};
    }

    Quantity wavelength() const { return wavelength_of(omega); }
};

inline std::vector<std::string> builtin_transition_labels() {
    return {"Fe57", "Hg201"};
}

// Fe-57 14.4 keV (141 ns) and Hg-201 1.6 keV (81 ns).
inline Transition builtin_transition(const std::string& label) {
    if (label == "Fe57") {
        return Transition::from_lifetime("Fe57", Quantity::energy_kev(14.4),
                                         Quantity::from_seconds(141e-9));
    }
    if (label == "Hg201") {
        return Transition::from_lifetime("Hg201", Quantity::energy_kev(1.6),
                                         Quantity::from_seconds(81e-9));
    }
    std::string msg = "unknown transition '" + label + "'; available:";
    for (const auto& l : builtin_transition_labels()) msg += " " + l;
    throw UnknownTransitionError(msg);
}

// ---------------------------------------------------------------------
// Quantity strings: "<number> <unit>".  Bare numbers are rejected so a
// scenario can never silently mix unit conventions.

inline Quantity parse_quantity(const std::string& text,
                               const std::string& field) {
    std::istringstream in(text);
    double v = 0.0;
    std::string unit, extra;
    if (!(in >> v)) {
        throw ConfigError(field + ": cannot parse number from '" + text + "'");
    }
    if (!(in >> unit)) {
        throw ConfigError(field + ": bare number '" + text
                          + "' (unit suffix required, e.g. \"14.4 keV\")");
    }
    if (in >> extra) {
        throw ConfigError(field + ": trailing content in '" + text + "'");
    }

    if (unit == "eV") return Quantity::energy_ev(v);
    if (unit == "keV") return Quantity::energy_kev(v);
    if (unit == "MeV") return Quantity::energy_ev(v * 1e6);

    if (unit == "s") return Quantity::from_seconds(v);
    if (unit == "ms") return Quantity::from_seconds(v * 1e-3);
    if (unit == "us") return Quantity::from_seconds(v * 1e-6);
    if (unit == "ns") return Quantity::from_seconds(v * 1e-9);
    if (unit == "ps") return Quantity::from_seconds(v * 1e-12);
    if (unit == "fs") return Quantity::from_seconds(v * 1e-15);

    if (unit == "m") return Quantity::from_nanometers(v * 1e9);
    if (unit == "cm") return Quantity::from_nanometers(v * 1e7);
    if (unit == "mm") return Quantity::from_nanometers(v * 1e6);
    if (unit == "um") return Quantity::from_micrometers(v);
    if (unit == "nm") return Quantity::from_nanometers(v);
    if (unit == "pm") return Quantity::from_nanometers(v * 1e-3);

    if (unit == "W/cm2" || unit == "W/cm^2") return Quantity::from_w_per_cm2(v);

    throw ConfigError(field + ": unknown unit '" + unit + "' in '" + text + "'");
}

inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------------
// Scenario: one self-contained run description.

struct Scenario {
    Transition transition;
    int n_foils = 1;
    double s_first = 0.0;    // quasispin S of the pumped foil
    double s_rest = 0.0;     // quasispin S of each downstream foil
    Quantity l_perp;         // transverse foil size
    int grid_points = 16384;
    double t_max_factor = 10.0;  // window length in units of tau_sp
    double n_wavecycles = 1e6;   // pump pulse length in wave cycles
};

namespace detail {

inline const nlohmann::json& require_field(const nlohmann::json& j,
                                           const std::string& key) {
    if (!j.contains(key)) throw ConfigError("missing field '" + key + "'");
    return j.at(key);
}

inline std::string require_string(const nlohmann::json& j,
                                  const std::string& key) {
    const auto& v = require_field(j, key);
    if (v.is_number()) {
        throw ConfigError(key + ": bare number (unit suffix required)");
    }
    if (!v.is_string()) throw ConfigError(key + ": expected string");
    return v.get<std::string>();
}

inline double require_number(const nlohmann::json& j, const std::string& key) {
    const auto& v = require_field(j, key);
    if (!v.is_number()) throw ConfigError(key + ": expected number");
    return v.get<double>();
}

inline Transition parse_transition(const nlohmann::json& j) {
    if (j.is_string()) return builtin_transition(j.get<std::string>());
    if (!j.is_object()) {
        throw ConfigError("transition: expected label string or object");
    }
    for (const auto& [key, _] : j.items()) {
        if (key != "label" && key != "omega" && key != "lifetime"
            && key != "gamma") {
            throw ConfigError("transition: unknown field '" + key + "'");
        }
    }
    std::string label = require_string(j, "label");
    Quantity omega = parse_quantity(require_string(j, "omega"),
                                    "transition.omega")
                         .require_dim(1, "energy");
    bool have_lifetime = j.contains("lifetime");
    bool have_gamma = j.contains("gamma");
    if (!have_lifetime && !have_gamma) {
        throw ConfigError("transition: need 'lifetime' or 'gamma'");
    }
    Transition t = have_lifetime
        ? Transition::from_lifetime(
              label, omega,
              parse_quantity(require_string(j, "lifetime"),
                             "transition.lifetime")
                  .require_dim(-1, "time"))
        : Transition::from_linewidth(
              label, omega,
              parse_quantity(require_string(j, "gamma"), "transition.gamma")
                  .require_dim(1, "energy"));
    if (have_lifetime && have_gamma) {
        Quantity gamma = parse_quantity(require_string(j, "gamma"),
                                        "transition.gamma")
                             .require_dim(1, "energy");
        double rel = std::abs(gamma.value() * t.lifetime.value() - 1.0);
        if (rel > 1e-9) {
            throw ConfigError("transition: gamma and lifetime disagree (rel "
                              + format_number(rel) + ")");
        }
    }
    return t;
}

}  // namespace detail

inline Scenario parse_scenario(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("scenario JSON parse error: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("scenario: expected JSON object");

    static const char* known[] = {"transition", "n_foils",     "s_first",
                                  "s_rest",     "l_perp",      "grid_points",
                                  "t_max_factor", "n_wavecycles"};
    for (const auto& [key, _] : j.items()) {
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) throw ConfigError("scenario: unknown field '" + key + "'");
    }

    Scenario s;
    s.transition = detail::parse_transition(detail::require_field(j, "transition"));
    double n_foils = detail::require_number(j, "n_foils");
    if (n_foils < 1 || n_foils != std::floor(n_foils)) {
        throw ConfigError("n_foils: expected integer >= 1");
    }
    s.n_foils = static_cast<int>(n_foils);
    s.s_first = detail::require_number(j, "s_first");
    s.s_rest = detail::require_number(j, "s_rest");
    if (s.s_first < 1.0) throw ConfigError("s_first: expected >= 1");
    if (s.s_rest < 1.0) throw ConfigError("s_rest: expected >= 1");
    s.l_perp = parse_quantity(detail::require_string(j, "l_perp"), "l_perp")
                   .require_dim(-1, "length");
    if (s.l_perp.value() <= 0.0) throw ConfigError("l_perp: must be positive");

    if (j.contains("grid_points")) {
        double g = detail::require_number(j, "grid_points");
        if (g < 16 || g != std::floor(g)) {
            throw ConfigError("grid_points: expected integer >= 16");
        }
        s.grid_points = static_cast<int>(g);
    }
    if (j.contains("t_max_factor")) {
        s.t_max_factor = detail::require_number(j, "t_max_factor");
        if (s.t_max_factor <= 0.0) {
            throw ConfigError("t_max_factor: must be positive");
        }
    }
    if (j.contains("n_wavecycles")) {
        s.n_wavecycles = detail::require_number(j, "n_wavecycles");
        if (s.n_wavecycles < 1.0) {
            throw ConfigError("n_wavecycles: expected >= 1");
        }
    }
    return s;
}

inline Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_scenario(buf.str());
    } catch (ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

inline std::string scenario_to_json(const Scenario& s) {
    nlohmann::json j;
    j["transition"] = {
        {"label", s.transition.label},
        {"omega", format_number(s.transition.omega.to_ev()) + " eV"},
        {"lifetime", format_number(s.transition.lifetime.to_seconds()) + " s"},
    };
    j["n_foils"] = s.n_foils;
    j["s_first"] = s.s_first;
    j["s_rest"] = s.s_rest;
    j["l_perp"] = format_number(s.l_perp.to_nanometers()) + " nm";
    j["grid_points"] = s.grid_points;
    j["t_max_factor"] = s.t_max_factor;
    j["n_wavecycles"] = s.n_wavecycles;
    return j.dump(2) + "\n";
}

inline void save_scenario(const Scenario& s, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write scenario file: " + path.string());
    out << scenario_to_json(s);
}

}  // namespace nxl
