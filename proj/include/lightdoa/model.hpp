#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lightdoa/angles.hpp"
#include "lightdoa/dsp.hpp"
#include "lightdoa/layers.hpp"

namespace lightdoa::model {

// Depthwise-separable block: depthwise 3x3 (stride 2, no bias) -> BN -> ReLU
// -> pointwise 1x1 (no bias) -> BN -> ReLU.
template <typename T>
struct SeparableBlock {
  nn::DepthwiseConv2d<T> dw;
  nn::BatchNorm2d<T> bn1;
  nn::ReLU<T> relu1;
  nn::PointwiseConv2d<T> pw;
  nn::BatchNorm2d<T> bn2;
  nn::ReLU<T> relu2;

  SeparableBlock(const std::string& name, int in_ch, int out_ch)
      : dw(name + ".dw", in_ch, 2),
        bn1(name + ".bn1", in_ch),
        pw(name + ".pw", in_ch, out_ch),
        bn2(name + ".bn2", out_ch) {}

  void init(Rng& rng) {
    dw.init(rng);
    pw.init(rng);
  }

  nn::Tensor<T> forward(const nn::Tensor<T>& x, nn::Mode mode) {
    return relu2.forward(bn2.forward(pw.forward(relu1.forward(bn1.forward(dw.forward(x), mode))), mode));
  }

  nn::Tensor<T> backward(const nn::Tensor<T>& dy) {
    return dw.backward(bn1.backward(relu1.backward(pw.backward(bn2.backward(relu2.backward(dy))))));
  }
};

// Convolutional frontend (1 -> 8 -> 16 -> 32 channels), adaptive 2x2 pooling,
// a GRU over the channel axis (32 steps of 4 features), and two FC layers
// producing K logits.
template <typename T>
class LightDoaModel {
 public:
  explicit LightDoaModel(int k);

  // (B,1,F,T) -> (B,K). Requires F,T >= 8 so three stride-2 stages keep at
  // least one cell per axis.
  nn::Tensor<T> forward(const nn::Tensor<T>& x, nn::Mode mode);

  // dlogits (B,K) -> gradient w.r.t. the input (B,1,F,T).
  nn::Tensor<T> backward(const nn::Tensor<T>& dlogits);

  std::vector<nn::Parameter<T>*> params();
  std::vector<std::pair<std::string, nn::Tensor<T>*>> named_buffers();

  long long param_count();

  int num_classes() const { return k_; }
  const angles::AngleGrid& grid() const { return grid_; }

  // Softmax probabilities for a single IPD feature (eval mode).
  std::vector<double> predict_probabilities(const dsp::IpdMatrix& feature);

  // Expected angle over the softmax probabilities, in degrees.
  double predict_angle(const dsp::IpdMatrix& feature);

  SeparableBlock<T> block1, block2, block3;
  nn::AdaptiveAvgPool2x2<T> pool;
  nn::Gru<T> gru;
  nn::Linear<T> fc1;
  nn::ReLU<T> fc1_relu;
  nn::Linear<T> fc2;

 private:
  int k_;
  angles::AngleGrid grid_;
};

// Deterministic construction + initialization from a seed.
template <typename T>
LightDoaModel<T> build_lightdoa(int k, std::uint64_t seed);

// IPD matrix (F,T) as a (1,1,F,T) network input.
template <typename T>
nn::Tensor<T> ipd_to_tensor(const dsp::IpdMatrix& m);

}  // namespace lightdoa::model
