#pragma once

#include <vector>

#include "lightdoa/tensor.hpp"

namespace lightdoa::nn {

struct AdamConfig {
  double learning_rate = 5e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Bias-corrected Adam update applied in place to every parameter.
template <typename T>
void adam_step(std::vector<Parameter<T>*>& params, const AdamConfig& cfg);

}  // namespace lightdoa::nn
