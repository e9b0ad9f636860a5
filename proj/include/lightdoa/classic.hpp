#pragma once

#include <vector>

namespace lightdoa::classic {

struct TdoaEstimate {
  double tau = 0.0;         // seconds; positive when x1 leads x2
  double peak_value = 0.0;  // correlation score at the interpolated peak
};

// GCC-PHAT with parabolic sub-sample peak interpolation, searched within
// +/- max_tau. Inputs must have equal length >= 256; all-zero input is an
// undefined estimate and throws.
TdoaEstimate gcc_phat(const std::vector<double>& x1, const std::vector<double>& x2,
                      int sample_rate, double max_tau);

// Far-field TDOA to azimuth: acos(clamp(c*tau/spacing, -1, 1)) in degrees.
// The microphone at +spacing/2 along the array axis is channel 1.
double tdoa_to_azimuth(double tau, double spacing, double speed_of_sound = 343.0);

}  // namespace lightdoa::classic
