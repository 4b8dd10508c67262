// Copyright (c) 2026 nxl contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace nxl::constants {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

// SI-2019 exact values and CODATA-2018 recommended values.  Every unit
// conversion in the library routes through the constants below; nothing
// else in the code introduces a physical constant.
inline constexpr double hbar_ev_s = 6.582119569e-16;  // hbar [eV s]
inline constexpr double hc_ev_nm = 1239.8419843;      // 2*pi*hbar*c [eV nm]

// hbar*c derived from the pinned 2*pi*hbar*c so that lambda * E = 2*pi*hbar*c
// holds to double precision; agrees with CODATA 197.3269804 eV nm.
inline constexpr double hbar_c_ev_nm = hc_ev_nm / two_pi;

inline constexpr double ev_joule = 1.602176634e-19;   // [J], exact
inline constexpr double hbar_joule_s = 1.054571817e-34;
inline constexpr double c_cm_per_s = 2.99792458e10;   // [cm/s], exact

inline constexpr double bohr_radius_nm = 0.0529177210903;
inline constexpr double fine_structure = 7.2973525693e-3;

// 1 eV^4 of intensity in W/cm^2: e^4 / (hbar^3 c^2) = 6.25132e5.
inline constexpr double ev4_w_per_cm2 =
    (ev_joule * ev_joule) * (ev_joule * ev_joule)
    / (hbar_joule_s * hbar_joule_s * hbar_joule_s * c_cm_per_s * c_cm_per_s);

}  // namespace nxl::constants
