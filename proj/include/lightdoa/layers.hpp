#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lightdoa/rng.hpp"
#include "lightdoa/tensor.hpp"

namespace lightdoa::nn {

enum class Mode { Train, Eval };

// Uniform in (-bound, bound).
template <typename T>
void init_uniform(Tensor<T>& t, double bound, Rng& rng);

// Kaiming-uniform with fan-in: bound = sqrt(6 / fan_in).
template <typename T>
void init_kaiming_uniform(Tensor<T>& t, int fan_in, Rng& rng);

// Depthwise 3x3 convolution, padding 1, no bias. Kernel shape (C,1,3,3).
template <typename T>
class DepthwiseConv2d {
 public:
  DepthwiseConv2d(std::string name, int channels, int stride);
  void init(Rng& rng);
  Tensor<T> forward(const Tensor<T>& x);
  Tensor<T> backward(const Tensor<T>& dy);
  Parameter<T>& kernel() { return kernel_; }
  const Parameter<T>& kernel() const { return kernel_; }
  int channels() const { return channels_; }

 private:
  int channels_;
  int stride_;
  Parameter<T> kernel_;
  Tensor<T> x_;
};

// Pointwise 1x1 convolution, no bias. Weight shape (Co,Ci).
template <typename T>
class PointwiseConv2d {
 public:
  PointwiseConv2d(std::string name, int in_channels, int out_channels);
  void init(Rng& rng);
  Tensor<T> forward(const Tensor<T>& x);
  Tensor<T> backward(const Tensor<T>& dy);
  Parameter<T>& weight() { return weight_; }
  const Parameter<T>& weight() const { return weight_; }

 private:
  int in_channels_;
  int out_channels_;
  Parameter<T> weight_;
  Tensor<T> x_;
};

// Per-channel batch normalization over (B,H,W), eps 1e-5, momentum 0.1.
template <typename T>
class BatchNorm2d {
 public:
  BatchNorm2d(std::string name, int channels);
  Tensor<T> forward(const Tensor<T>& x, Mode mode);
  Tensor<T> backward(const Tensor<T>& dy);
  Parameter<T>& gamma() { return gamma_; }
  Parameter<T>& beta() { return beta_; }
  Tensor<T>& running_mean() { return running_mean_; }
  Tensor<T>& running_var() { return running_var_; }
  const Tensor<T>& running_mean() const { return running_mean_; }
  const Tensor<T>& running_var() const { return running_var_; }
  const std::string& name() const { return name_; }

 private:
  std::string name_;
  int channels_;
  Parameter<T> gamma_;
  Parameter<T> beta_;
  Tensor<T> running_mean_;
  Tensor<T> running_var_;
  // backward caches
  Tensor<T> xhat_;
  std::vector<T> inv_std_;
  Mode last_mode_ = Mode::Train;
};

template <typename T>
class ReLU {
 public:
  Tensor<T> forward(const Tensor<T>& x);
  Tensor<T> backward(const Tensor<T>& dy);

 private:
  Tensor<T> x_;
};

// Adaptive average pooling to a fixed 2x2 output. Region boundaries are
// floor(i*H/2); a one-cell axis maps that cell into both output cells.
template <typename T>
class AdaptiveAvgPool2x2 {
 public:
  Tensor<T> forward(const Tensor<T>& x);
  Tensor<T> backward(const Tensor<T>& dy);

 private:
  std::vector<int> in_shape_;
};

// Uni-directional GRU over (B,T,In), gate order [r; z; n], reset gate applied
// to the hidden-to-candidate term. Two bias vectors (input and hidden side).
template <typename T>
class Gru {
 public:
  Gru(std::string name, int input_size, int hidden_size);
  void init(Rng& rng);
  Tensor<T> forward(const Tensor<T>& x);
  Tensor<T> backward(const Tensor<T>& dy);
  int hidden_size() const { return hidden_; }
  Parameter<T>& w_ih() { return w_ih_; }
  Parameter<T>& w_hh() { return w_hh_; }
  Parameter<T>& b_ih() { return b_ih_; }
  Parameter<T>& b_hh() { return b_hh_; }

 private:
  int input_;
  int hidden_;
  Parameter<T> w_ih_;  // (3H, In)
  Parameter<T> w_hh_;  // (3H, H)
  Parameter<T> b_ih_;  // (3H)
  Parameter<T> b_hh_;  // (3H)
  // caches
  Tensor<T> x_;
  Tensor<T> h_all_;  // (B, T+1, H), step 0 is the zero initial state
  Tensor<T> r_, z_, n_, ghn_;
};

template <typename T>
class Linear {
 public:
  Linear(std::string name, int in_features, int out_features, bool bias);
  void init(Rng& rng);
  Tensor<T> forward(const Tensor<T>& x);
  Tensor<T> backward(const Tensor<T>& dy);
  Parameter<T>& weight() { return weight_; }
  Parameter<T>& bias() { return bias_; }
  bool has_bias() const { return has_bias_; }

 private:
  int in_;
  int out_;
  bool has_bias_;
  Parameter<T> weight_;  // (Out,In)
  Parameter<T> bias_;    // (Out)
  Tensor<T> x_;
};

// Row-wise stable softmax of (N,K) logits.
template <typename T>
Tensor<T> softmax(const Tensor<T>& logits);

// Mean cross-entropy over the batch; returns (loss, probabilities).
template <typename T>
std::pair<double, Tensor<T>> cross_entropy(const Tensor<T>& logits, const std::vector<int>& targets);

// dL/dlogits = (softmax - onehot) / N.
template <typename T>
Tensor<T> cross_entropy_backward(const Tensor<T>& probs, const std::vector<int>& targets);

}  // namespace lightdoa::nn
