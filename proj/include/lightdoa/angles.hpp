#pragma once

#include <span>

namespace lightdoa::angles {

// Uniform grid over the folded half-circle [0, 180] degrees. Class k sits at
// k * spacing, with both endpoints included (class 0 -> 0 deg, K-1 -> 180 deg).
struct AngleGrid {
  int num_classes = 37;

  double spacing_deg() const { return 180.0 / (num_classes - 1); }

  static bool is_supported(int k);
  static AngleGrid from_k(int k);  // throws invalid_argument for unsupported k
};

// theta mod 360, result in [0, 360). Throws on non-finite input.
double normalize_angle(double theta_deg);

// Front-back fold: theta if <= 180, else 360 - theta. Input must be in [0, 360).
double fold_front_back(double theta_norm_deg);

// Nearest grid class; exact midpoints round up. Input must be in [0, 180].
int angle_to_class(double theta_mapped_deg, const AngleGrid& grid);

// Center angle of class k.
double class_to_angle(int k, const AngleGrid& grid);

// Probability-weighted mean of class centers. probabilities must have length
// K, be nonnegative, and sum to 1 within 1e-6.
double expected_angle(std::span<const double> probabilities, const AngleGrid& grid);

}  // namespace lightdoa::angles
