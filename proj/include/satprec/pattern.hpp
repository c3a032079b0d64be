// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>

#include "satprec/types.hpp"

namespace satprec {

// Tapered-aperture reflector pattern, the standard multibeam surrogate:
//   |g(u)|^2 = G_max * [J1(u)/(2u) + 36*J3(u)/u^3]^2,
//   u = 2.07123 * sin(theta) / sin(theta_3dB).
// The bracket equals 1 at u=0 and 1/sqrt(2) at u=2.07123, so theta_3dB is
// the one-sided half-power angle. First null near u = 5.9072.
struct TaperedAperturePattern {
  double peak_gain_dbi = 52.0;
  double theta_3db_rad = 0.0;

  static double envelope(double u) {
    u = std::abs(u);
    if (u < 1e-3) {
      // series expansion; direct evaluation loses precision near 0
      return 1.0 - 0.078125 * u * u;
    }
    const double j1 = std::cyl_bessel_j(1.0, u);
    const double j3 = std::cyl_bessel_j(3.0, u);
    return j1 / (2.0 * u) + 36.0 * j3 / (u * u * u);
  }

  double off_axis_u(double offaxis_rad) const {
    return 2.07123 * std::sin(offaxis_rad) / std::sin(theta_3db_rad);
  }

  // Amplitude gain sqrt(G_max)*f(u); power gain in dBi is 10*log10(|.|^2).
  double gain_amplitude(double offaxis_rad) const {
    return db_to_amplitude(peak_gain_dbi) * envelope(off_axis_u(offaxis_rad));
  }
};

}  // namespace satprec
