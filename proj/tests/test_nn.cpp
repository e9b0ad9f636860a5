#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "lightdoa/layers.hpp"
#include "lightdoa/model.hpp"
#include "lightdoa/optim.hpp"
#include "lightdoa/rng.hpp"
#include "lightdoa/train.hpp"
#include "test_util.hpp"

using namespace lightdoa;
using nn::Mode;
using nn::Tensor;
using testutil::max_fd_error;
using testutil::random_tensor;
using testutil::random_tensor_nonzero;

TEST_CASE("depthwise conv closed forms") {
  // all-ones kernel on constant input: interior output = 9v
  nn::DepthwiseConv2d<double> dw("dw", 2, 1);
  dw.kernel().value.fill(1.0);
  Tensor<double> x({1, 2, 5, 5});
  x.fill(0.7);
  const auto y = dw.forward(x);
  CHECK(y[1 * 25 + 2 * 5 + 2] == doctest::Approx(9 * 0.7));
  CHECK(y[0] == doctest::Approx(4 * 0.7));  // corner sees a 2x2 window

  // identity kernel reproduces the input
  nn::DepthwiseConv2d<double> id("id", 3, 1);
  id.kernel().value.fill(0.0);
  for (int c = 0; c < 3; ++c) id.kernel().value[static_cast<std::size_t>(c) * 9 + 4] = 1.0;
  Rng rng(3);
  const auto xr = random_tensor<double>({2, 3, 6, 7}, rng);
  const auto yr = id.forward(xr);
  for (std::size_t i = 0; i < xr.numel(); ++i) CHECK(yr[i] == doctest::Approx(xr[i]));

  Tensor<double> wrong({1, 4, 5, 5});
  CHECK_THROWS_AS(id.forward(wrong), std::invalid_argument);
}

TEST_CASE("pointwise conv closed forms") {
  nn::PointwiseConv2d<double> eye("eye", 3, 3);
  eye.weight().value.fill(0.0);
  for (int c = 0; c < 3; ++c) eye.weight().value[static_cast<std::size_t>(c) * 3 + c] = 1.0;
  Rng rng(4);
  const auto x = random_tensor<double>({2, 3, 4, 5}, rng);
  const auto y = eye.forward(x);
  for (std::size_t i = 0; i < x.numel(); ++i) CHECK(y[i] == doctest::Approx(x[i]));

  nn::PointwiseConv2d<double> zero("zero", 3, 6);
  zero.weight().value.fill(0.0);
  const auto z = zero.forward(x);
  for (std::size_t i = 0; i < z.numel(); ++i) CHECK(z[i] == 0.0);
}

TEST_CASE("batch norm statistics and eval closed form") {
  Rng rng(5);
  nn::BatchNorm2d<double> bn("bn", 3);
  const auto x = random_tensor<double>({4, 3, 5, 6}, rng, -2.0, 3.0);
  const auto y = bn.forward(x, Mode::Train);

  const std::size_t hw = 30;
  for (int c = 0; c < 3; ++c) {
    double sum = 0.0, sq = 0.0;
    for (int b = 0; b < 4; ++b)
      for (std::size_t p = 0; p < hw; ++p) {
        const double v = y[(static_cast<std::size_t>(b) * 3 + c) * hw + p];
        sum += v;
        sq += v * v;
      }
    const double mean = sum / (4 * hw);
    const double var = sq / (4 * hw) - mean * mean;
    CHECK(mean == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(std::abs(var - 1.0) < 1e-3);  // eps shifts variance slightly below 1
  }

  // eval mode applies the affine map with the stored running stats
  nn::BatchNorm2d<double> bn2("bn2", 2);
  bn2.running_mean()[0] = 0.5;
  bn2.running_mean()[1] = -1.0;
  bn2.running_var()[0] = 4.0;
  bn2.running_var()[1] = 0.25;
  bn2.gamma().value[0] = 2.0;
  bn2.gamma().value[1] = 1.0;
  bn2.beta().value[0] = -1.0;
  bn2.beta().value[1] = 3.0;
  Tensor<double> xe({1, 2, 1, 1});
  xe[0] = 2.5;
  xe[1] = 0.0;
  const auto ye = bn2.forward(xe, Mode::Eval);
  CHECK(ye[0] == doctest::Approx(2.0 * (2.5 - 0.5) / std::sqrt(4.0 + 1e-5) - 1.0));
  CHECK(ye[1] == doctest::Approx(1.0 * (0.0 + 1.0) / std::sqrt(0.25 + 1e-5) + 3.0));

  // single-element channel with zero variance: the eps guard, no throw
  Tensor<double> deg({1, 1, 1, 1});
  deg[0] = 7.0;
  nn::BatchNorm2d<double> bn3("bn3", 1);
  const auto yd = bn3.forward(deg, Mode::Train);
  CHECK(yd[0] == doctest::Approx(0.0));
}

TEST_CASE("adaptive pool closed forms") {
  Tensor<double> c({2, 3, 5, 7});
  c.fill(1.25);
  nn::AdaptiveAvgPool2x2<double> pool;
  const auto y = pool.forward(c);
  REQUIRE(y.shape == std::vector<int>({2, 3, 2, 2}));
  for (std::size_t i = 0; i < y.numel(); ++i) CHECK(y[i] == doctest::Approx(1.25));

  // 4x4 input: each output cell is the mean of its quadrant
  Tensor<double> q({1, 1, 4, 4});
  for (int i = 0; i < 16; ++i) q[static_cast<std::size_t>(i)] = i;
  nn::AdaptiveAvgPool2x2<double> pool2;
  const auto yq = pool2.forward(q);
  CHECK(yq[0] == doctest::Approx((0 + 1 + 4 + 5) / 4.0));
  CHECK(yq[1] == doctest::Approx((2 + 3 + 6 + 7) / 4.0));
  CHECK(yq[2] == doctest::Approx((8 + 9 + 12 + 13) / 4.0));
  CHECK(yq[3] == doctest::Approx((10 + 11 + 14 + 15) / 4.0));

  // one-cell axis: both output cells see the single input cell
  Tensor<double> thin({1, 1, 1, 3});
  thin[0] = 3.0; thin[1] = 5.0; thin[2] = 10.0;
  nn::AdaptiveAvgPool2x2<double> pool3;
  const auto yt = pool3.forward(thin);
  CHECK(yt[0] == doctest::Approx(3.0));          // [0, 1) of width 3
  CHECK(yt[1] == doctest::Approx((5.0 + 10.0) / 2));
  CHECK(yt[2] == doctest::Approx(3.0));
  CHECK(yt[3] == doctest::Approx((5.0 + 10.0) / 2));
}

TEST_CASE("gru closed forms") {
  // zero weights: z = 0.5, n = 0, h stays 0
  nn::Gru<double> gru("g", 3, 4);
  Rng rng(6);
  const auto x = random_tensor<double>({2, 5, 3}, rng);
  const auto y = gru.forward(x);
  for (std::size_t i = 0; i < y.numel(); ++i) CHECK(y[i] == 0.0);

  // parameter count 3*(In*H + H*H) + 6H
  nn::Gru<double> g48("g48", 4, 8);
  const std::size_t count = g48.w_ih().value.numel() + g48.w_hh().value.numel() +
                            g48.b_ih().value.numel() + g48.b_hh().value.numel();
  CHECK(count == 336);

  Tensor<double> bad({2, 5});
  CHECK_THROWS_AS(gru.forward(bad.reshaped({2, 5})), std::invalid_argument);
}

TEST_CASE("gru single step matches hand-computed gate equations") {
  nn::Gru<double> gru("g", 2, 1);
  auto& wi = gru.w_ih().value;  // (3,2) rows r,z,n
  auto& wh = gru.w_hh().value;  // (3,1)
  auto& bi = gru.b_ih().value;
  auto& bh = gru.b_hh().value;
  wi[0] = 0.3; wi[1] = -0.2;   // r
  wi[2] = 0.1; wi[3] = 0.5;    // z
  wi[4] = -0.4; wi[5] = 0.7;   // n
  wh[0] = 0.2; wh[1] = -0.3; wh[2] = 0.6;
  bi[0] = 0.05; bi[1] = -0.1; bi[2] = 0.2;
  bh[0] = -0.15; bh[1] = 0.25; bh[2] = 0.35;

  Tensor<double> x({1, 1, 2});
  x[0] = 0.9;
  x[1] = -0.6;
  const auto y = gru.forward(x);

  const double h0 = 0.0;
  auto sig = [](double v) { return 1.0 / (1.0 + std::exp(-v)); };
  const double r = sig(0.3 * 0.9 + (-0.2) * (-0.6) + 0.05 + 0.2 * h0 + (-0.15));
  const double z = sig(0.1 * 0.9 + 0.5 * (-0.6) + (-0.1) + (-0.3) * h0 + 0.25);
  const double n = std::tanh((-0.4) * 0.9 + 0.7 * (-0.6) + 0.2 + r * (0.6 * h0 + 0.35));
  const double h1 = (1.0 - z) * n + z * h0;
  CHECK(y[0] == doctest::Approx(h1).epsilon(1e-12));
}

TEST_CASE("softmax properties and cross-entropy closed forms") {
  Rng rng(7);
  const auto logits = random_tensor<double>({5, 11}, rng, -4.0, 4.0);
  const auto probs = nn::softmax(logits);
  for (int n = 0; n < 5; ++n) {
    double sum = 0.0;
    for (int k = 0; k < 11; ++k) sum += probs[static_cast<std::size_t>(n) * 11 + k];
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
  // shift invariance
  auto shifted = logits;
  for (auto& v : shifted.data) v += 123.456;
  const auto probs2 = nn::softmax(shifted);
  for (std::size_t i = 0; i < probs.numel(); ++i)
    CHECK(probs[i] == doctest::Approx(probs2[i]).epsilon(1e-9));

  // uniform logits -> ln K
  for (int k : {9, 13, 19, 37}) {
    Tensor<double> uni({1, k});
    uni.fill(0.37);
    auto [loss, p] = nn::cross_entropy(uni, {0});
    CHECK(loss == doctest::Approx(std::log(static_cast<double>(k))).epsilon(1e-9));
  }

  // logits [10,0,0], y=0 -> ln(1 + 2e^-10)
  Tensor<double> l3({1, 3});
  l3[0] = 10.0;
  auto [loss3, p3] = nn::cross_entropy(l3, {0});
  CHECK(loss3 == doctest::Approx(std::log(1.0 + 2.0 * std::exp(-10.0))).epsilon(1e-9));

  CHECK_THROWS_AS(nn::cross_entropy(l3, {3}), std::invalid_argument);
  CHECK_THROWS_AS(nn::cross_entropy(l3, {-1}), std::invalid_argument);
}

TEST_CASE("cross-entropy gradient equals softmax minus onehot") {
  Rng rng(8);
  const auto logits = random_tensor<double>({4, 7}, rng, -3.0, 3.0);
  std::vector<int> targets{1, 0, 6, 3};
  auto [loss, probs] = nn::cross_entropy(logits, targets);
  const auto analytic = nn::cross_entropy_backward(probs, targets);

  auto work = logits;
  auto objective = [&]() { return nn::cross_entropy(work, targets).first; };
  const double err =
      max_fd_error(objective, work.ptr(), analytic.ptr(), work.numel(), rng, 28, 1e-6);
  CHECK(err < 1e-6);
}

// ------------------------- gradient checks (64-bit), one layer at a time

TEST_CASE("depthwise conv gradients") {
  Rng rng(100);
  for (int rep = 0; rep < 4; ++rep) {
    const int B = 1 + static_cast<int>(rng.next_below(2));
    const int C = 1 + static_cast<int>(rng.next_below(3));
    const int H = 4 + static_cast<int>(rng.next_below(4));
    const int W = H + 1;
    const int stride = 1 + static_cast<int>(rng.next_below(2));

    nn::DepthwiseConv2d<double> layer("dw", C, stride);
    layer.init(rng);
    auto x = random_tensor<double>({B, C, H, W}, rng);
    auto y = layer.forward(x);
    const auto proj = random_tensor<double>(y.shape, rng);

    layer.kernel().zero_grad();
    const auto dx = layer.backward(proj);

    auto objective = [&]() {
      const auto out = layer.forward(x);
      double j = 0.0;
      for (std::size_t i = 0; i < out.numel(); ++i) j += out[i] * proj[i];
      return j;
    };
    CHECK(max_fd_error(objective, x.ptr(), dx.ptr(), x.numel(), rng) < 1e-4);
    CHECK(max_fd_error(objective, layer.kernel().value.ptr(), layer.kernel().grad.ptr(),
                       layer.kernel().value.numel(), rng) < 1e-4);
  }
}

TEST_CASE("pointwise conv gradients") {
  Rng rng(101);
  for (int rep = 0; rep < 4; ++rep) {
    const int B = 1 + static_cast<int>(rng.next_below(2));
    const int Ci = 1 + static_cast<int>(rng.next_below(3));
    const int Co = 1 + static_cast<int>(rng.next_below(4));
    const int H = 2 + static_cast<int>(rng.next_below(4));
    const int W = H + 2;

    nn::PointwiseConv2d<double> layer("pw", Ci, Co);
    layer.init(rng);
    auto x = random_tensor<double>({B, Ci, H, W}, rng);
    const auto proj = random_tensor<double>({B, Co, H, W}, rng);
    layer.forward(x);
    layer.weight().zero_grad();
    const auto dx = layer.backward(proj);

    auto objective = [&]() {
      const auto out = layer.forward(x);
      double j = 0.0;
      for (std::size_t i = 0; i < out.numel(); ++i) j += out[i] * proj[i];
      return j;
    };
    CHECK(max_fd_error(objective, x.ptr(), dx.ptr(), x.numel(), rng) < 1e-4);
    CHECK(max_fd_error(objective, layer.weight().value.ptr(), layer.weight().grad.ptr(),
                       layer.weight().value.numel(), rng) < 1e-4);
  }
}

TEST_CASE("batch norm train-mode gradients") {
  Rng rng(102);
  for (int rep = 0; rep < 4; ++rep) {
    const int B = 1 + static_cast<int>(rng.next_below(3));
    const int C = 1 + static_cast<int>(rng.next_below(3));
    const int H = 2 + static_cast<int>(rng.next_below(3));
    const int W = H + 1;

    nn::BatchNorm2d<double> layer("bn", C);
    nn::init_uniform(layer.gamma().value, 1.5, rng);
    nn::init_uniform(layer.beta().value, 1.0, rng);
    auto x = random_tensor<double>({B, C, H, W}, rng);
    const auto proj = random_tensor<double>(x.shape, rng);
    layer.forward(x, Mode::Train);
    layer.gamma().zero_grad();
    layer.beta().zero_grad();
    const auto dx = layer.backward(proj);

    auto objective = [&]() {
      const auto out = layer.forward(x, Mode::Train);
      double j = 0.0;
      for (std::size_t i = 0; i < out.numel(); ++i) j += out[i] * proj[i];
      return j;
    };
    CHECK(max_fd_error(objective, x.ptr(), dx.ptr(), x.numel(), rng) < 1e-4);
    CHECK(max_fd_error(objective, layer.gamma().value.ptr(), layer.gamma().grad.ptr(),
                       layer.gamma().value.numel(), rng) < 1e-4);
    CHECK(max_fd_error(objective, layer.beta().value.ptr(), layer.beta().grad.ptr(),
                       layer.beta().value.numel(), rng) < 1e-4);
  }
}

TEST_CASE("relu and pool gradients") {
  Rng rng(103);
  for (int rep = 0; rep < 3; ++rep) {
    const int B = 1 + static_cast<int>(rng.next_below(2));
    const int C = 1 + static_cast<int>(rng.next_below(3));
    const int H = 1 + static_cast<int>(rng.next_below(6));
    const int W = 1 + static_cast<int>(rng.next_below(6));

    nn::ReLU<double> relu;
    auto x = random_tensor_nonzero<double>({B, C, std::max(H, 2), std::max(W, 2)}, rng);
    const auto proj_r = random_tensor<double>(x.shape, rng);
    relu.forward(x);
    const auto dxr = relu.backward(proj_r);
    auto obj_relu = [&]() {
      const auto out = relu.forward(x);
      double j = 0.0;
      for (std::size_t i = 0; i < out.numel(); ++i) j += out[i] * proj_r[i];
      return j;
    };
    CHECK(max_fd_error(obj_relu, x.ptr(), dxr.ptr(), x.numel(), rng) < 1e-4);

    nn::AdaptiveAvgPool2x2<double> pool;
    auto xp = random_tensor<double>({B, C, H, W}, rng);
    const auto projp = random_tensor<double>({B, C, 2, 2}, rng);
    pool.forward(xp);
    const auto dxp = pool.backward(projp);
    auto obj_pool = [&]() {
      const auto out = pool.forward(xp);
      double j = 0.0;
      for (std::size_t i = 0; i < out.numel(); ++i) j += out[i] * projp[i];
      return j;
    };
    CHECK(max_fd_error(obj_pool, xp.ptr(), dxp.ptr(), xp.numel(), rng) < 1e-4);
  }
}

TEST_CASE("gru gradients through time") {
  Rng rng(104);
  for (int rep = 0; rep < 3; ++rep) {
    const int B = 1 + static_cast<int>(rng.next_below(2));
    const int T = 1 + static_cast<int>(rng.next_below(4));
    const int in = 1 + static_cast<int>(rng.next_below(3));
    const int hidden = 1 + static_cast<int>(rng.next_below(4));

    nn::Gru<double> layer("g", in, hidden);
    layer.init(rng);
    auto x = random_tensor<double>({B, T, in}, rng);
    const auto proj = random_tensor<double>({B, T, hidden}, rng);
    layer.forward(x);
    for (auto* p : {&layer.w_ih(), &layer.w_hh(), &layer.b_ih(), &layer.b_hh()}) p->zero_grad();
    const auto dx = layer.backward(proj);

    auto objective = [&]() {
      const auto out = layer.forward(x);
      double j = 0.0;
      for (std::size_t i = 0; i < out.numel(); ++i) j += out[i] * proj[i];
      return j;
    };
    CHECK(max_fd_error(objective, x.ptr(), dx.ptr(), x.numel(), rng) < 1e-4);
    for (auto* p : {&layer.w_ih(), &layer.w_hh(), &layer.b_ih(), &layer.b_hh()})
      CHECK(max_fd_error(objective, p->value.ptr(), p->grad.ptr(), p->value.numel(), rng) < 1e-4);
  }
}

TEST_CASE("linear gradients") {
  Rng rng(105);
  for (int rep = 0; rep < 3; ++rep) {
    const int N = 1 + static_cast<int>(rng.next_below(3));
    const int in = 1 + static_cast<int>(rng.next_below(6));
    const int out = 1 + static_cast<int>(rng.next_below(6));

    nn::Linear<double> layer("fc", in, out, true);
    layer.init(rng);
    nn::init_uniform(layer.bias().value, 0.5, rng);
    auto x = random_tensor<double>({N, in}, rng);
    const auto proj = random_tensor<double>({N, out}, rng);
    layer.forward(x);
    layer.weight().zero_grad();
    layer.bias().zero_grad();
    const auto dx = layer.backward(proj);

    auto objective = [&]() {
      const auto o = layer.forward(x);
      double j = 0.0;
      for (std::size_t i = 0; i < o.numel(); ++i) j += o[i] * proj[i];
      return j;
    };
    CHECK(max_fd_error(objective, x.ptr(), dx.ptr(), x.numel(), rng) < 1e-4);
    CHECK(max_fd_error(objective, layer.weight().value.ptr(), layer.weight().grad.ptr(),
                       layer.weight().value.numel(), rng) < 1e-4);
    CHECK(max_fd_error(objective, layer.bias().value.ptr(), layer.bias().grad.ptr(),
                       layer.bias().value.numel(), rng) < 1e-4);
  }
}

// ------------------------------------------------------------------- Adam

TEST_CASE("adam first step moves by about the learning rate") {
  nn::Parameter<double> p("w", {1});
  p.value[0] = 1.0;
  p.grad[0] = 0.37;  // any nonzero gradient
  std::vector<nn::Parameter<double>*> params{&p};
  nn::AdamConfig cfg;
  cfg.learning_rate = 0.01;
  nn::adam_step(params, cfg);
  CHECK(std::abs((1.0 - p.value[0]) - 0.01) < 1e-6);

  // negative gradient moves the other way
  nn::Parameter<double> q("w", {1});
  q.value[0] = 1.0;
  q.grad[0] = -2.0;
  std::vector<nn::Parameter<double>*> params2{&q};
  nn::adam_step(params2, cfg);
  CHECK(std::abs((q.value[0] - 1.0) - 0.01) < 1e-6);
}

TEST_CASE("adam with zero gradient leaves fresh state untouched") {
  nn::Parameter<double> p("w", {3});
  p.value.fill(2.0);
  p.grad.fill(0.0);
  std::vector<nn::Parameter<double>*> params{&p};
  nn::AdamConfig cfg;
  nn::adam_step(params, cfg);
  for (int i = 0; i < 3; ++i) {
    CHECK(p.value[static_cast<std::size_t>(i)] == 2.0);
    CHECK(p.adam_m[static_cast<std::size_t>(i)] == 0.0);
    CHECK(p.adam_v[static_cast<std::size_t>(i)] == 0.0);
  }
}

TEST_CASE("adam drives w^2 toward zero and matches the reference recurrence") {
  nn::Parameter<double> p("w", {1});
  p.value[0] = 1.0;
  std::vector<nn::Parameter<double>*> params{&p};
  nn::AdamConfig cfg;
  cfg.learning_rate = 0.05;

  // reference recurrence computed independently
  double w = 1.0, m = 0.0, v = 0.0;
  for (int t = 1; t <= 100; ++t) {
    const double g = 2.0 * w;
    m = 0.9 * m + 0.1 * g;
    v = 0.999 * v + 0.001 * g * g;
    w -= 0.05 * (m / (1.0 - std::pow(0.9, t))) /
         (std::sqrt(v / (1.0 - std::pow(0.999, t))) + 1e-8);

    p.grad[0] = 2.0 * p.value[0];
    nn::adam_step(params, cfg);
  }
  CHECK(std::abs(p.value[0]) < 0.1);
  CHECK(p.value[0] == doctest::Approx(w).epsilon(1e-9));
}

// ------------------------------------------------------- training loop

TEST_CASE("early stopper counts strictly-improving epochs") {
  nn::EarlyStopper stopper(10);
  // val accuracy strictly decreasing from epoch 1 -> stop after epoch 11
  int epochs = 0;
  for (int e = 1; e <= 50; ++e) {
    ++epochs;
    if (stopper.observe(1.0 - 0.01 * e)) break;
  }
  CHECK(epochs == 11);

  // ties do not reset patience
  nn::EarlyStopper tie(3);
  CHECK_FALSE(tie.observe(0.5));
  CHECK_FALSE(tie.observe(0.5));
  CHECK_FALSE(tie.observe(0.5));
  CHECK(tie.observe(0.5));
}

namespace {
// two separable classes of 16x16 "ipd-like" patterns
nn::LabeledDataset<float> toy_dataset(int n, std::uint64_t seed) {
  Rng rng(seed);
  nn::LabeledDataset<float> set;
  set.features = nn::Tensor<float>({n, 1, 16, 16});
  set.labels.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int label = i % 2;
    set.labels[static_cast<std::size_t>(i)] = label == 0 ? 0 : 8;
    const double sign = label == 0 ? 1.0 : -1.0;
    for (int f = 0; f < 16; ++f)
      for (int t = 0; t < 16; ++t)
        set.features[(static_cast<std::size_t>(i) * 256) + static_cast<std::size_t>(f) * 16 + t] =
            static_cast<float>(sign * (f < 8 ? 1.0 : -1.0) + rng.uniform(-0.25, 0.25));
  }
  return set;
}
}  // namespace

TEST_CASE("training separates a toy two-class problem and is deterministic") {
  const auto train_set = toy_dataset(64, 1);
  const auto val_set = toy_dataset(16, 2);

  nn::TrainConfig cfg;
  cfg.batch_size = 16;
  cfg.max_epochs = 20;
  cfg.patience = 20;
  cfg.seed = 7;

  auto m1 = model::build_lightdoa<float>(9, 11);
  const auto h1 = nn::train(m1, train_set, val_set, cfg);
  CHECK(h1.best_val_accuracy == doctest::Approx(1.0));

  auto m2 = model::build_lightdoa<float>(9, 11);
  const auto h2 = nn::train(m2, train_set, val_set, cfg);
  REQUIRE(h1.epochs.size() == h2.epochs.size());
  for (std::size_t i = 0; i < h1.epochs.size(); ++i) {
    CHECK(h1.epochs[i].train_loss == h2.epochs[i].train_loss);
    CHECK(h1.epochs[i].val_accuracy == h2.epochs[i].val_accuracy);
  }
  auto p1 = m1.params();
  auto p2 = m2.params();
  for (std::size_t i = 0; i < p1.size(); ++i) CHECK(p1[i]->value.data == p2[i]->value.data);

  nn::LabeledDataset<float> empty;
  CHECK_THROWS_AS(nn::train(m1, empty, val_set, cfg), std::invalid_argument);
}
