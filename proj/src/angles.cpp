#include "lightdoa/angles.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lightdoa::angles {

bool AngleGrid::is_supported(int k) {
  return k == 9 || k == 13 || k == 19 || k == 37;
}

AngleGrid AngleGrid::from_k(int k) {
  if (!is_supported(k))
    throw std::invalid_argument("AngleGrid: unsupported class count " + std::to_string(k) +
                                " (expected 9, 13, 19, or 37)");
  return AngleGrid{k};
}

double normalize_angle(double theta_deg) {
  if (!std::isfinite(theta_deg))
    throw std::invalid_argument("normalize_angle: non-finite angle");
  double r = std::fmod(theta_deg, 360.0);
  if (r < 0.0) r += 360.0;
  if (r >= 360.0) r = 0.0;  // fmod can round back up to 360 for tiny negatives
  return r;
}

double fold_front_back(double theta_norm_deg) {
  if (!(theta_norm_deg >= 0.0 && theta_norm_deg < 360.0))
    throw std::invalid_argument("fold_front_back: input must lie in [0, 360)");
  return theta_norm_deg <= 180.0 ? theta_norm_deg : 360.0 - theta_norm_deg;
}

int angle_to_class(double theta_mapped_deg, const AngleGrid& grid) {
  if (!(theta_mapped_deg >= 0.0 && theta_mapped_deg <= 180.0))
    throw std::invalid_argument("angle_to_class: input must lie in [0, 180]");
  const int k = static_cast<int>(std::floor(theta_mapped_deg / grid.spacing_deg() + 0.5));
  if (k < 0) return 0;
  if (k >= grid.num_classes) return grid.num_classes - 1;
  return k;
}

double class_to_angle(int k, const AngleGrid& grid) {
  if (k < 0 || k >= grid.num_classes)
    throw std::invalid_argument("class_to_angle: class index out of range");
  return k * grid.spacing_deg();
}

double expected_angle(std::span<const double> probabilities, const AngleGrid& grid) {
  if (static_cast<int>(probabilities.size()) != grid.num_classes)
    throw std::invalid_argument("expected_angle: distribution length mismatch");
  double sum = 0.0;
  for (double p : probabilities) {
    if (!(p >= 0.0)) throw std::invalid_argument("expected_angle: negative probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-6)
    throw std::invalid_argument("expected_angle: probabilities do not sum to 1");
  double acc = 0.0;
  for (int k = 0; k < grid.num_classes; ++k) acc += probabilities[k] * (k * grid.spacing_deg());
  return acc;
}

}  // namespace lightdoa::angles
