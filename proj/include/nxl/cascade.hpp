// Copyright (c) 2026 nxl contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "nxl/constants.hpp"
#include "nxl/emission.hpp"
#include "nxl/errors.hpp"
#include "nxl/nuclides.hpp"
#include "nxl/units.hpp"

namespace nxl {

struct FoilOutcome {
    int n;                   // foil index, 1-based
    Quantity tau_st;         // depletion time (tau_sp window for foil 1)
    Quantity avg_intensity;  // mean of I_total^(n) over [0, tau_st]
    std::size_t clamp_events;  // negative drive samples seen by this foil
};

struct PowerLawFit {
    double exponent = 0.0;
    double amplitude = 0.0;
    double r2 = 0.0;
};

struct CascadeResult {
    std::vector<FoilOutcome> per_foil;
    PulseSeries i_total_final;  // I_total^(N)
    PulseSeries last_drive;     // I_total^(N-1), what the last foil saw
    double fit_exponent = std::numeric_limits<double>::quiet_NaN();
    double fit_amplitude = std::numeric_limits<double>::quiet_NaN();
    double fit_r2 = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::string> warnings;
    // I_total^(n) for n = 1..N; filled only when requested.
    std::vector<PulseSeries> series_total;
};

// Ibar = (1/tau) int_0^tau I dtau.
inline Quantity average_intensity(const PulseSeries& series, Quantity tau) {
    tau.require_dim(-1, "time");
    if (!(tau.value() > 0.0)) {
        throw DomainError("average_intensity: tau must be positive");
    }
    // integral_to throws if tau lies beyond the grid
    return Quantity::intensity_ev4(series.integral_to(tau.value())
                                   / tau.value());
}

// OLS in log-log: ln I = exponent * ln n + ln amplitude.
inline PowerLawFit fit_power_law(
    const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3) {
        throw DomainError("fit_power_law: need at least 3 points");
    }
    double sx = 0.0, sy = 0.0;
    for (const auto& [n, v] : points) {
        if (!(n > 0.0) || !(v > 0.0)) {
            throw DomainError("fit_power_law: points must be positive");
        }
        sx += std::log(n);
        sy += std::log(v);
    }
    const double mx = sx / double(points.size());
    const double my = sy / double(points.size());
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& [n, v] : points) {
        double dx = std::log(n) - mx;
        double dy = std::log(v) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw DomainError("fit_power_law: degenerate abscissae");
    PowerLawFit fit;
    fit.exponent = sxy / sxx;
    fit.amplitude = std::exp(my - fit.exponent * mx);
    double ss_res = syy - sxy * sxy / sxx;
    fit.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    return fit;
}

// The multi-foil sequence: a half-filled first foil radiates the sech^2
// superradiant pulse; each downstream fully inverted foil adds its
// stimulated emission to the running total, I_total^(n) = I_total^(n-1)
// + I_st^(n), all on the first foil's grid.
inline CascadeResult run_cascade(const Scenario& scenario,
                                 bool keep_series = false) {
    Foil first(scenario.transition, scenario.s_first, 0.5 * scenario.s_first,
               scenario.l_perp);
    Quantity tau_sp = tau_spontaneous(first);
    TimeGrid grid{scenario.t_max_factor * tau_sp.value()
                      / double(scenario.grid_points - 1),
                  static_cast<std::size_t>(scenario.grid_points)};

    CascadeResult result;
    PulseSeries total = spontaneous_series(first, grid);
    result.per_foil.push_back(
        {1, tau_sp, average_intensity(total, tau_sp), 0});
    if (keep_series) result.series_total.push_back(total);
    result.last_drive = total;

    for (int n = 2; n <= scenario.n_foils; ++n) {
        Foil foil(scenario.transition, scenario.s_rest, scenario.s_rest,
                  scenario.l_perp);
        Quantity tau_n;
        try {
            tau_n = tau_stimulated(foil, total);
        } catch (const InsufficientDriveError& e) {
            throw InsufficientDriveError(
                "foil " + std::to_string(n) + ": " + e.what(),
                e.attained_fraction);
        }
        std::size_t clamps = total.clamp_events();
        PulseSeries st = stimulated_intensity(foil, total);
        result.last_drive = total;
        total = total + st;
        result.per_foil.push_back(
            {n, tau_n, average_intensity(total, tau_n), clamps});
        if (keep_series) result.series_total.push_back(total);
    }
    result.i_total_final = total;
    if (scenario.n_foils == 1) result.last_drive = total;

    // Fig.-3 fit over the stimulated stages only (n >= 2).
    if (scenario.n_foils >= 4) {
        std::vector<std::pair<double, double>> pts;
        for (const auto& f : result.per_foil) {
            if (f.n >= 2) pts.emplace_back(f.n, f.avg_intensity.value());
        }
        PowerLawFit fit = fit_power_law(pts);
        result.fit_exponent = fit.exponent;
        result.fit_amplitude = fit.amplitude;
        result.fit_r2 = fit.r2;
    }

    // Separation of scales: the downstream foils' collective response,
    // 1/(gamma S_n), must be slower than the first foil's burst so that
    // treating them as passive amplifiers of I_total is consistent.
    Foil probe(scenario.transition, scenario.s_rest, scenario.s_rest,
               scenario.l_perp);
    double buildup = 1.0 / (probe.gamma_coll.value() * probe.big_s);
    if (!(buildup > tau_sp.value())) {
        result.warnings.push_back(
            "separation of scales violated: 1/(gamma S_n) = "
            + format_number(buildup) + " <= tau_sp(S_1) = "
            + format_number(tau_sp.value())
            + " (natural units); downstream foils are not slow amplifiers");
    }
    return result;
}

// Residual of the pi rotation identity at the last foil,
// |(2 g~ / omega) int_0^tau_N sqrt(I_total^(N-1)) - pi| / pi.
inline double pulse_area_identity_check(const CascadeResult& result,
                                        double g_tilde, Quantity omega) {
    omega.require_dim(1, "energy");
    if (result.per_foil.size() < 2) {
        throw ContractError(
            "pulse_area_identity_check: cascade has no stimulated stage");
    }
    double tau_n = result.per_foil.back().tau_st.value();
    double phi = 2.0 * g_tilde / omega.to_ev()
                 * result.last_drive.cumulative_root_at(tau_n);
    return std::abs(phi - constants::pi) / constants::pi;
}

}  // namespace nxl
