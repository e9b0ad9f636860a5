#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "lightdoa/model.hpp"
#include "lightdoa/tensor.hpp"

namespace lightdoa::nn {

// Feature tensor (N,1,F,T) plus one class label per sample.
template <typename T>
struct LabeledDataset {
  Tensor<T> features;
  std::vector<int> labels;

  int size() const { return static_cast<int>(labels.size()); }
};

struct TrainConfig {
  double learning_rate = 5e-3;
  int batch_size = 256;
  int max_epochs = 150;
  int patience = 10;
  std::uint64_t seed = 0;
};

struct EpochRecord {
  int epoch = 0;  // 1-based
  double train_loss = 0.0;
  double val_accuracy = 0.0;
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;
  int best_epoch = 0;
  double best_val_accuracy = 0.0;
};

// Improvement means strictly greater validation accuracy; ties do not reset
// the patience counter.
class EarlyStopper {
 public:
  explicit EarlyStopper(int patience) : patience_(patience) {}

  // Returns true when training should stop after this observation.
  bool observe(double val_accuracy) {
    if (val_accuracy > best_) {
      best_ = val_accuracy;
      stale_ = 0;
      return false;
    }
    return ++stale_ >= patience_;
  }

  bool improved() const { return stale_ == 0; }
  double best() const { return best_; }

 private:
  int patience_;
  int stale_ = 0;
  double best_ = -std::numeric_limits<double>::infinity();
};

// Mini-batch Adam training with early stopping on validation accuracy. On
// return the model holds the weights (and batch-norm statistics) of the
// highest-validation-accuracy epoch.
template <typename T>
TrainHistory train(model::LightDoaModel<T>& m, const LabeledDataset<T>& train_set,
                   const LabeledDataset<T>& val_set, const TrainConfig& cfg);

// Top-1 accuracy of the model on a dataset (eval mode).
template <typename T>
double evaluate_accuracy(model::LightDoaModel<T>& m, const LabeledDataset<T>& set,
                         int batch_size = 256);

}  // namespace lightdoa::nn
