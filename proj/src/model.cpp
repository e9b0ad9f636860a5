#include "lightdoa/model.hpp"

#include <stdexcept>

namespace lightdoa::model {

template <typename T>
LightDoaModel<T>::LightDoaModel(int k)
    : block1("block1", 1, 8),
      block2("block2", 8, 16),
      block3("block3", 16, 32),
      gru("gru", 4, 8),
      fc1("fc1", 32 * 8, 128, true),
      fc2("fc2", 128, k, true),
      k_(k),
      grid_(angles::AngleGrid::from_k(k)) {}

template <typename T>
nn::Tensor<T> LightDoaModel<T>::forward(const nn::Tensor<T>& x, nn::Mode mode) {
  if (x.ndim() != 4 || x.dim(1) != 1)
    throw std::invalid_argument("LightDoaModel: expected (B,1,F,T) input");
  if (x.dim(2) < 8 || x.dim(3) < 8)
    throw std::invalid_argument("LightDoaModel: feature map must be at least 8x8");
  const int B = x.dim(0);

  nn::Tensor<T> h = block1.forward(x, mode);
  h = block2.forward(h, mode);
  h = block3.forward(h, mode);
  h = pool.forward(h);                    // (B,32,2,2)
  h = h.reshaped({B, 32, 4});             // channel axis becomes the sequence
  h = gru.forward(h);                     // (B,32,8)
  h = h.reshaped({B, 32 * 8});
  h = fc1.forward(h);
  h = fc1_relu.forward(h);
  return fc2.forward(h);
}

template <typename T>
nn::Tensor<T> LightDoaModel<T>::backward(const nn::Tensor<T>& dlogits) {
  const int B = dlogits.dim(0);
  nn::Tensor<T> d = fc2.backward(dlogits);
  d = fc1_relu.backward(d);
  d = fc1.backward(d);
  d = d.reshaped({B, 32, 8});
  d = gru.backward(d);
  d = d.reshaped({B, 32, 2, 2});
  d = pool.backward(d);
  d = block3.backward(d);
  d = block2.backward(d);
  return block1.backward(d);
}

template <typename T>
std::vector<nn::Parameter<T>*> LightDoaModel<T>::params() {
  std::vector<nn::Parameter<T>*> out;
  for (SeparableBlock<T>* blk : {&block1, &block2, &block3}) {
    out.push_back(&blk->dw.kernel());
    out.push_back(&blk->bn1.gamma());
    out.push_back(&blk->bn1.beta());
    out.push_back(&blk->pw.weight());
    out.push_back(&blk->bn2.gamma());
    out.push_back(&blk->bn2.beta());
  }
  out.push_back(&gru.w_ih());
  out.push_back(&gru.w_hh());
  out.push_back(&gru.b_ih());
  out.push_back(&gru.b_hh());
  out.push_back(&fc1.weight());
  out.push_back(&fc1.bias());
  out.push_back(&fc2.weight());
  out.push_back(&fc2.bias());
  return out;
}

template <typename T>
std::vector<std::pair<std::string, nn::Tensor<T>*>> LightDoaModel<T>::named_buffers() {
  std::vector<std::pair<std::string, nn::Tensor<T>*>> out;
  for (SeparableBlock<T>* blk : {&block1, &block2, &block3}) {
    for (nn::BatchNorm2d<T>* bn : {&blk->bn1, &blk->bn2}) {
      out.emplace_back(bn->name() + ".running_mean", &bn->running_mean());
      out.emplace_back(bn->name() + ".running_var", &bn->running_var());
    }
  }
  return out;
}

template <typename T>
long long LightDoaModel<T>::param_count() {
  long long n = 0;
  for (const nn::Parameter<T>* p : params()) n += static_cast<long long>(p->value.numel());
  return n;
}

template <typename T>
std::vector<double> LightDoaModel<T>::predict_probabilities(const dsp::IpdMatrix& feature) {
  const nn::Tensor<T> logits = forward(ipd_to_tensor<T>(feature), nn::Mode::Eval);
  const nn::Tensor<T> probs = nn::softmax(logits);
  std::vector<double> out(probs.data.begin(), probs.data.end());
  return out;
}

template <typename T>
double LightDoaModel<T>::predict_angle(const dsp::IpdMatrix& feature) {
  const std::vector<double> probs = predict_probabilities(feature);
  return angles::expected_angle(probs, grid_);
}

template <typename T>
LightDoaModel<T> build_lightdoa(int k, std::uint64_t seed) {
  angles::AngleGrid::from_k(k);  // validates k
  LightDoaModel<T> m(k);
  Rng rng(seed);
  m.block1.init(rng);
  m.block2.init(rng);
  m.block3.init(rng);
  m.gru.init(rng);
  m.fc1.init(rng);
  m.fc2.init(rng);
  return m;
}

template <typename T>
nn::Tensor<T> ipd_to_tensor(const dsp::IpdMatrix& m) {
  nn::Tensor<T> t({1, 1, m.freq_bins, m.frames});
  for (int f = 0; f < m.freq_bins; ++f)
    for (int tt = 0; tt < m.frames; ++tt)
      t[static_cast<std::size_t>(f) * m.frames + tt] = static_cast<T>(m.at(f, tt));
  return t;
}

#define LIGHTDOA_INSTANTIATE_MODEL(T)                      \
  template class LightDoaModel<T>;                         \
  template LightDoaModel<T> build_lightdoa<T>(int, std::uint64_t); \
  template nn::Tensor<T> ipd_to_tensor<T>(const dsp::IpdMatrix&);

LIGHTDOA_INSTANTIATE_MODEL(float)
LIGHTDOA_INSTANTIATE_MODEL(double)

#undef LIGHTDOA_INSTANTIATE_MODEL

}  // namespace lightdoa::model
