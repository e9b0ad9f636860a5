#include "lightdoa/layers.hpp"

#include <cmath>
#include <stdexcept>

#include "lightdoa/kernels.hpp"

namespace lightdoa::nn {

namespace {

template <typename T>
void check_4d(const Tensor<T>& x, const char* who) {
  if (x.ndim() != 4) throw std::invalid_argument(std::string(who) + ": expected 4-d input");
}

template <typename T>
inline T sigmoid(T v) {
  return T(1) / (T(1) + std::exp(-v));
}

}  // namespace

template <typename T>
void init_uniform(Tensor<T>& t, double bound, Rng& rng) {
  for (auto& v : t.data) v = static_cast<T>(rng.uniform(-bound, bound));
}

template <typename T>
void init_kaiming_uniform(Tensor<T>& t, int fan_in, Rng& rng) {
  init_uniform(t, std::sqrt(6.0 / fan_in), rng);
}

// ---------------------------------------------------------------- depthwise

template <typename T>
DepthwiseConv2d<T>::DepthwiseConv2d(std::string name, int channels, int stride)
    : channels_(channels), stride_(stride), kernel_(name + ".kernel", {channels, 1, 3, 3}) {
  if (stride != 1 && stride != 2)
    throw std::invalid_argument("DepthwiseConv2d: stride must be 1 or 2");
}

template <typename T>
void DepthwiseConv2d<T>::init(Rng& rng) {
  init_kaiming_uniform(kernel_.value, 9, rng);
}

template <typename T>
Tensor<T> DepthwiseConv2d<T>::forward(const Tensor<T>& x) {
  check_4d(x, "DepthwiseConv2d");
  if (x.dim(1) != channels_) throw std::invalid_argument("DepthwiseConv2d: channel mismatch");
  x_ = x;
  const int B = x.dim(0), H = x.dim(2), W = x.dim(3);
  const int Ho = kernels::conv_out_dim(H, stride_), Wo = kernels::conv_out_dim(W, stride_);
  Tensor<T> y({B, channels_, Ho, Wo});
  kernels::conv2d_depthwise_forward(x.ptr(), B, channels_, H, W, kernel_.value.ptr(), stride_,
                                    y.ptr(), Ho, Wo);
  return y;
}

template <typename T>
Tensor<T> DepthwiseConv2d<T>::backward(const Tensor<T>& dy) {
  const int B = x_.dim(0), H = x_.dim(2), W = x_.dim(3);
  const int Ho = dy.dim(2), Wo = dy.dim(3);
  kernels::conv2d_depthwise_backward_kernel(dy.ptr(), B, channels_, Ho, Wo, x_.ptr(), H, W,
                                            stride_, kernel_.grad.ptr());
  Tensor<T> dx({B, channels_, H, W});
  kernels::conv2d_depthwise_backward_input(dy.ptr(), B, channels_, Ho, Wo, kernel_.value.ptr(),
                                           stride_, dx.ptr(), H, W);
  return dx;
}

// ---------------------------------------------------------------- pointwise

template <typename T>
PointwiseConv2d<T>::PointwiseConv2d(std::string name, int in_channels, int out_channels)
    : in_channels_(in_channels),
      out_channels_(out_channels),
      weight_(name + ".weight", {out_channels, in_channels, 1, 1}) {}

template <typename T>
void PointwiseConv2d<T>::init(Rng& rng) {
  init_kaiming_uniform(weight_.value, in_channels_, rng);
}

template <typename T>
Tensor<T> PointwiseConv2d<T>::forward(const Tensor<T>& x) {
  check_4d(x, "PointwiseConv2d");
  if (x.dim(1) != in_channels_) throw std::invalid_argument("PointwiseConv2d: channel mismatch");
  x_ = x;
  const int B = x.dim(0), H = x.dim(2), W = x.dim(3);
  Tensor<T> y({B, out_channels_, H, W});
  kernels::conv2d_pointwise_forward(x.ptr(), B, in_channels_, H, W, weight_.value.ptr(),
                                    out_channels_, y.ptr());
  return y;
}

template <typename T>
Tensor<T> PointwiseConv2d<T>::backward(const Tensor<T>& dy) {
  const int B = x_.dim(0), H = x_.dim(2), W = x_.dim(3);
  kernels::conv2d_pointwise_backward_weight(dy.ptr(), B, out_channels_, H, W, x_.ptr(),
                                            in_channels_, weight_.grad.ptr());
  Tensor<T> dx({B, in_channels_, H, W});
  kernels::conv2d_pointwise_backward_input(dy.ptr(), B, out_channels_, H, W, weight_.value.ptr(),
                                           in_channels_, dx.ptr());
  return dx;
}

// --------------------------------------------------------------- batch norm

template <typename T>
BatchNorm2d<T>::BatchNorm2d(std::string name, int channels)
    : name_(name),
      channels_(channels),
      gamma_(name + ".gamma", {channels}),
      beta_(name + ".beta", {channels}),
      running_mean_({channels}),
      running_var_({channels}) {
  gamma_.value.fill(T(1));
  running_var_.fill(T(1));
}

template <typename T>
Tensor<T> BatchNorm2d<T>::forward(const Tensor<T>& x, Mode mode) {
  check_4d(x, "BatchNorm2d");
  if (x.dim(1) != channels_) throw std::invalid_argument("BatchNorm2d: channel mismatch");
  const int B = x.dim(0), C = channels_, H = x.dim(2), W = x.dim(3);
  const std::size_t hw = static_cast<std::size_t>(H) * W;
  const double count = static_cast<double>(B) * H * W;
  constexpr double kEps = 1e-5;
  constexpr double kMomentum = 0.1;

  last_mode_ = mode;
  Tensor<T> y(x.shape);
  xhat_ = Tensor<T>(x.shape);
  inv_std_.assign(C, T(0));

#pragma omp parallel for schedule(static)
  for (int c = 0; c < C; ++c) {
    double mean, var;
    if (mode == Mode::Train) {
      double sum = 0.0;
      for (int b = 0; b < B; ++b) {
        const T* xc = x.ptr() + (static_cast<std::size_t>(b) * C + c) * hw;
        for (std::size_t p = 0; p < hw; ++p) sum += xc[p];
      }
      mean = sum / count;
      double sq = 0.0;
      for (int b = 0; b < B; ++b) {
        const T* xc = x.ptr() + (static_cast<std::size_t>(b) * C + c) * hw;
        for (std::size_t p = 0; p < hw; ++p) {
          const double d = xc[p] - mean;
          sq += d * d;
        }
      }
      var = sq / count;
      running_mean_[c] = static_cast<T>((1.0 - kMomentum) * running_mean_[c] + kMomentum * mean);
      running_var_[c] = static_cast<T>((1.0 - kMomentum) * running_var_[c] + kMomentum * var);
    } else {
      mean = running_mean_[c];
      var = running_var_[c];
    }
    const double istd = 1.0 / std::sqrt(var + kEps);
    inv_std_[c] = static_cast<T>(istd);
    const T g = gamma_.value[c], bt = beta_.value[c];
    for (int b = 0; b < B; ++b) {
      const T* xc = x.ptr() + (static_cast<std::size_t>(b) * C + c) * hw;
      T* hc = xhat_.ptr() + (static_cast<std::size_t>(b) * C + c) * hw;
      T* yc = y.ptr() + (static_cast<std::size_t>(b) * C + c) * hw;
      for (std::size_t p = 0; p < hw; ++p) {
        hc[p] = static_cast<T>((xc[p] - mean) * istd);
        yc[p] = g * hc[p] + bt;
      }
    }
  }
  return y;
}

template <typename T>
Tensor<T> BatchNorm2d<T>::backward(const Tensor<T>& dy) {
  const int B = dy.dim(0), C = channels_, H = dy.dim(2), W = dy.dim(3);
  const std::size_t hw = static_cast<std::size_t>(H) * W;
  const double count = static_cast<double>(B) * H * W;

  Tensor<T> dx(dy.shape);
#pragma omp parallel for schedule(static)
  for (int c = 0; c < C; ++c) {
    double sum_dy = 0.0, sum_dy_xhat = 0.0;
    for (int b = 0; b < B; ++b) {
      const T* dc = dy.ptr() + (static_cast<std::size_t>(b) * C + c) * hw;
      const T* hc = xhat_.ptr() + (static_cast<std::size_t>(b) * C + c) * hw;
      for (std::size_t p = 0; p < hw; ++p) {
        sum_dy += dc[p];
        sum_dy_xhat += dc[p] * hc[p];
      }
    }
    gamma_.grad[c] += static_cast<T>(sum_dy_xhat);
    beta_.grad[c] += static_cast<T>(sum_dy);

    const double g = gamma_.value[c];
    const double istd = inv_std_[c];
    if (last_mode_ == Mode::Train) {
      const double mean_dy = sum_dy / count;
      const double mean_dy_xhat = sum_dy_xhat / count;
      for (int b = 0; b < B; ++b) {
        const T* dc = dy.ptr() + (static_cast<std::size_t>(b) * C + c) * hw;
        const T* hc = xhat_.ptr() + (static_cast<std::size_t>(b) * C + c) * hw;
        T* xc = dx.ptr() + (static_cast<std::size_t>(b) * C + c) * hw;
        for (std::size_t p = 0; p < hw; ++p)
          xc[p] = static_cast<T>(g * istd * (dc[p] - mean_dy - hc[p] * mean_dy_xhat));
      }
    } else {
      for (int b = 0; b < B; ++b) {
        const T* dc = dy.ptr() + (static_cast<std::size_t>(b) * C + c) * hw;
        T* xc = dx.ptr() + (static_cast<std::size_t>(b) * C + c) * hw;
        for (std::size_t p = 0; p < hw; ++p) xc[p] = static_cast<T>(g * istd * dc[p]);
      }
    }
  }
  return dx;
}

// --------------------------------------------------------------------- relu

template <typename T>
Tensor<T> ReLU<T>::forward(const Tensor<T>& x) {
  x_ = x;
  Tensor<T> y(x.shape);
  kernels::relu_forward(x.ptr(), x.numel(), y.ptr());
  return y;
}

template <typename T>
Tensor<T> ReLU<T>::backward(const Tensor<T>& dy) {
  Tensor<T> dx(dy.shape);
  kernels::relu_backward(x_.ptr(), dy.ptr(), dy.numel(), dx.ptr());
  return dx;
}

// --------------------------------------------------------------------- pool

namespace {
// Region [lo, hi) for output index i of 2 along an axis of extent n; hi is
// bumped to lo+1 on one-cell axes so the region is never empty.
inline void pool_region(int i, int n, int& lo, int& hi) {
  lo = i * n / 2;
  hi = (i + 1) * n / 2;
  if (hi <= lo) hi = lo + 1;
}
}  // namespace

template <typename T>
Tensor<T> AdaptiveAvgPool2x2<T>::forward(const Tensor<T>& x) {
  check_4d(x, "AdaptiveAvgPool2x2");
  in_shape_ = x.shape;
  const int B = x.dim(0), C = x.dim(1), H = x.dim(2), W = x.dim(3);
  Tensor<T> y({B, C, 2, 2});
#pragma omp parallel for collapse(2) schedule(static)
  for (int b = 0; b < B; ++b) {
    for (int c = 0; c < C; ++c) {
      const T* xc = x.ptr() + (static_cast<std::size_t>(b) * C + c) * H * W;
      T* yc = y.ptr() + (static_cast<std::size_t>(b) * C + c) * 4;
      for (int i = 0; i < 2; ++i) {
        int h0, h1;
        pool_region(i, H, h0, h1);
        for (int j = 0; j < 2; ++j) {
          int w0, w1;
          pool_region(j, W, w0, w1);
          double acc = 0.0;
          for (int h = h0; h < h1; ++h)
            for (int w = w0; w < w1; ++w) acc += xc[static_cast<std::size_t>(h) * W + w];
          yc[i * 2 + j] = static_cast<T>(acc / ((h1 - h0) * (w1 - w0)));
        }
      }
    }
  }
  return y;
}

template <typename T>
Tensor<T> AdaptiveAvgPool2x2<T>::backward(const Tensor<T>& dy) {
  const int B = in_shape_[0], C = in_shape_[1], H = in_shape_[2], W = in_shape_[3];
  Tensor<T> dx(in_shape_);
#pragma omp parallel for collapse(2) schedule(static)
  for (int b = 0; b < B; ++b) {
    for (int c = 0; c < C; ++c) {
      const T* dc = dy.ptr() + (static_cast<std::size_t>(b) * C + c) * 4;
      T* xc = dx.ptr() + (static_cast<std::size_t>(b) * C + c) * H * W;
      for (int i = 0; i < 2; ++i) {
        int h0, h1;
        pool_region(i, H, h0, h1);
        for (int j = 0; j < 2; ++j) {
          int w0, w1;
          pool_region(j, W, w0, w1);
          const T share = dc[i * 2 + j] / static_cast<T>((h1 - h0) * (w1 - w0));
          for (int h = h0; h < h1; ++h)
            for (int w = w0; w < w1; ++w) xc[static_cast<std::size_t>(h) * W + w] += share;
        }
      }
    }
  }
  return dx;
}

// ---------------------------------------------------------------------- gru

template <typename T>
Gru<T>::Gru(std::string name, int input_size, int hidden_size)
    : input_(input_size),
      hidden_(hidden_size),
      w_ih_(name + ".w_ih", {3 * hidden_size, input_size}),
      w_hh_(name + ".w_hh", {3 * hidden_size, hidden_size}),
      b_ih_(name + ".b_ih", {3 * hidden_size}),
      b_hh_(name + ".b_hh", {3 * hidden_size}) {}

template <typename T>
void Gru<T>::init(Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(hidden_));
  init_uniform(w_ih_.value, bound, rng);
  init_uniform(w_hh_.value, bound, rng);
  init_uniform(b_ih_.value, bound, rng);
  init_uniform(b_hh_.value, bound, rng);
}

template <typename T>
Tensor<T> Gru<T>::forward(const Tensor<T>& x) {
  if (x.ndim() != 3) throw std::invalid_argument("Gru: expected (B,T,F) input");
  if (x.dim(2) != input_) throw std::invalid_argument("Gru: feature size mismatch");
  x_ = x;
  const int B = x.dim(0), Tn = x.dim(1), H = hidden_;

  h_all_ = Tensor<T>({B, Tn + 1, H});
  r_ = Tensor<T>({B, Tn, H});
  z_ = Tensor<T>({B, Tn, H});
  n_ = Tensor<T>({B, Tn, H});
  ghn_ = Tensor<T>({B, Tn, H});
  Tensor<T> out({B, Tn, H});

  Tensor<T> gi({B, 3 * H});
  Tensor<T> gh({B, 3 * H});
  std::vector<T> h_prev(static_cast<std::size_t>(B) * H, T(0));

  for (int t = 0; t < Tn; ++t) {
    // gather x_t rows (strided in x) into a contiguous view: x rows are
    // already contiguous per (b,t), so address them directly per batch item.
    // gi = x_t W_ih^T + b_ih ; gh = h_prev W_hh^T + b_hh
#pragma omp parallel for collapse(2) schedule(static)
    for (int b = 0; b < B; ++b) {
      for (int g = 0; g < 3 * H; ++g) {
        const T* xt = x.ptr() + (static_cast<std::size_t>(b) * Tn + t) * input_;
        const T* wrow = w_ih_.value.ptr() + static_cast<std::size_t>(g) * input_;
        T acc = b_ih_.value[g];
        for (int i = 0; i < input_; ++i) acc += wrow[i] * xt[i];
        gi[static_cast<std::size_t>(b) * 3 * H + g] = acc;

        const T* hp = h_prev.data() + static_cast<std::size_t>(b) * H;
        const T* vrow = w_hh_.value.ptr() + static_cast<std::size_t>(g) * H;
        T acch = b_hh_.value[g];
        for (int i = 0; i < H; ++i) acch += vrow[i] * hp[i];
        gh[static_cast<std::size_t>(b) * 3 * H + g] = acch;
      }
    }

#pragma omp parallel for collapse(2) schedule(static)
    for (int b = 0; b < B; ++b) {
      for (int i = 0; i < H; ++i) {
        const std::size_t gidx = static_cast<std::size_t>(b) * 3 * H;
        const std::size_t cidx = (static_cast<std::size_t>(b) * Tn + t) * H + i;
        const T r = sigmoid(gi[gidx + i] + gh[gidx + i]);
        const T z = sigmoid(gi[gidx + H + i] + gh[gidx + H + i]);
        const T ghn = gh[gidx + 2 * H + i];
        const T n = std::tanh(gi[gidx + 2 * H + i] + r * ghn);
        const T hp = h_prev[static_cast<std::size_t>(b) * H + i];
        const T h = (T(1) - z) * n + z * hp;
        r_[cidx] = r;
        z_[cidx] = z;
        n_[cidx] = n;
        ghn_[cidx] = ghn;
        out[cidx] = h;
        h_all_[(static_cast<std::size_t>(b) * (Tn + 1) + t + 1) * H + i] = h;
      }
    }

#pragma omp parallel for schedule(static)
    for (int b = 0; b < B; ++b)
      for (int i = 0; i < H; ++i)
        h_prev[static_cast<std::size_t>(b) * H + i] =
            h_all_[(static_cast<std::size_t>(b) * (Tn + 1) + t + 1) * H + i];
  }
  return out;
}

template <typename T>
Tensor<T> Gru<T>::backward(const Tensor<T>& dy) {
  const int B = x_.dim(0), Tn = x_.dim(1), H = hidden_, In = input_;

  Tensor<T> dx({B, Tn, In});
  std::vector<T> dh_next(static_cast<std::size_t>(B) * H, T(0));
  Tensor<T> da_i({B, 3 * H});  // gradient of gi pre-activations [r,z,n]
  Tensor<T> da_h({B, 3 * H});  // gradient of gh pre-activations [r,z,ghn]
  std::vector<T> xt(static_cast<std::size_t>(B) * In);
  std::vector<T> hprev(static_cast<std::size_t>(B) * H);
  std::vector<T> dxt(static_cast<std::size_t>(B) * In);
  std::vector<T> dh_lin(static_cast<std::size_t>(B) * H);

  for (int t = Tn - 1; t >= 0; --t) {
#pragma omp parallel for collapse(2) schedule(static)
    for (int b = 0; b < B; ++b) {
      for (int i = 0; i < H; ++i) {
        const std::size_t cidx = (static_cast<std::size_t>(b) * Tn + t) * H + i;
        const std::size_t hpidx = (static_cast<std::size_t>(b) * (Tn + 1) + t) * H + i;
        const T hp = h_all_[hpidx];
        const T dh = dy[cidx] + dh_next[static_cast<std::size_t>(b) * H + i];
        const T r = r_[cidx], z = z_[cidx], n = n_[cidx], ghn = ghn_[cidx];

        const T dz = dh * (hp - n);
        const T da_z = dz * z * (T(1) - z);
        const T dn = dh * (T(1) - z);
        const T da_n = dn * (T(1) - n * n);
        const T dghn = da_n * r;
        const T dr = da_n * ghn;
        const T da_r = dr * r * (T(1) - r);

        const std::size_t gidx = static_cast<std::size_t>(b) * 3 * H;
        da_i[gidx + i] = da_r;
        da_i[gidx + H + i] = da_z;
        da_i[gidx + 2 * H + i] = da_n;
        da_h[gidx + i] = da_r;
        da_h[gidx + H + i] = da_z;
        da_h[gidx + 2 * H + i] = dghn;

        hprev[static_cast<std::size_t>(b) * H + i] = hp;
        // partial: z * dh term of dh_prev; the W_hh part is added below
        dh_next[static_cast<std::size_t>(b) * H + i] = z * dh;
      }
    }

#pragma omp parallel for schedule(static)
    for (int b = 0; b < B; ++b) {
      const T* xrow = x_.ptr() + (static_cast<std::size_t>(b) * Tn + t) * In;
      for (int i = 0; i < In; ++i) xt[static_cast<std::size_t>(b) * In + i] = xrow[i];
    }

    kernels::linear_backward_params(da_i.ptr(), B, 3 * H, xt.data(), In, w_ih_.grad.ptr(),
                                    b_ih_.grad.ptr());
    kernels::linear_backward_params(da_h.ptr(), B, 3 * H, hprev.data(), H, w_hh_.grad.ptr(),
                                    b_hh_.grad.ptr());
    kernels::linear_backward_input(da_i.ptr(), B, 3 * H, w_ih_.value.ptr(), In, dxt.data());
    kernels::linear_backward_input(da_h.ptr(), B, 3 * H, w_hh_.value.ptr(), H, dh_lin.data());

#pragma omp parallel for schedule(static)
    for (int b = 0; b < B; ++b) {
      T* dxrow = dx.ptr() + (static_cast<std::size_t>(b) * Tn + t) * In;
      for (int i = 0; i < In; ++i) dxrow[i] = dxt[static_cast<std::size_t>(b) * In + i];
      for (int i = 0; i < H; ++i)
        dh_next[static_cast<std::size_t>(b) * H + i] += dh_lin[static_cast<std::size_t>(b) * H + i];
    }
  }
  return dx;
}

// ------------------------------------------------------------------- linear

template <typename T>
Linear<T>::Linear(std::string name, int in_features, int out_features, bool bias)
    : in_(in_features),
      out_(out_features),
      has_bias_(bias),
      weight_(name + ".weight", {out_features, in_features}),
      bias_(name + ".bias", {out_features}) {}

template <typename T>
void Linear<T>::init(Rng& rng) {
  init_kaiming_uniform(weight_.value, in_, rng);
}

template <typename T>
Tensor<T> Linear<T>::forward(const Tensor<T>& x) {
  if (x.ndim() != 2) throw std::invalid_argument("Linear: expected (N,F) input");
  if (x.dim(1) != in_) throw std::invalid_argument("Linear: feature size mismatch");
  x_ = x;
  const int N = x.dim(0);
  Tensor<T> y({N, out_});
  kernels::linear_forward(x.ptr(), N, in_, weight_.value.ptr(),
                          has_bias_ ? bias_.value.ptr() : nullptr, out_, y.ptr());
  return y;
}

template <typename T>
Tensor<T> Linear<T>::backward(const Tensor<T>& dy) {
  const int N = x_.dim(0);
  kernels::linear_backward_params(dy.ptr(), N, out_, x_.ptr(), in_, weight_.grad.ptr(),
                                  has_bias_ ? bias_.grad.ptr() : nullptr);
  Tensor<T> dx({N, in_});
  kernels::linear_backward_input(dy.ptr(), N, out_, weight_.value.ptr(), in_, dx.ptr());
  return dx;
}

// ------------------------------------------------------- softmax / x-entropy

template <typename T>
Tensor<T> softmax(const Tensor<T>& logits) {
  if (logits.ndim() != 2) throw std::invalid_argument("softmax: expected (N,K) logits");
  const int N = logits.dim(0), K = logits.dim(1);
  Tensor<T> probs(logits.shape);
#pragma omp parallel for schedule(static)
  for (int n = 0; n < N; ++n) {
    const T* row = logits.ptr() + static_cast<std::size_t>(n) * K;
    T* prow = probs.ptr() + static_cast<std::size_t>(n) * K;
    T mx = row[0];
    for (int k = 1; k < K; ++k) mx = std::max(mx, row[k]);
    double sum = 0.0;
    for (int k = 0; k < K; ++k) {
      const double e = std::exp(static_cast<double>(row[k] - mx));
      prow[k] = static_cast<T>(e);
      sum += e;
    }
    for (int k = 0; k < K; ++k) prow[k] = static_cast<T>(prow[k] / sum);
  }
  return probs;
}

template <typename T>
std::pair<double, Tensor<T>> cross_entropy(const Tensor<T>& logits, const std::vector<int>& targets) {
  if (logits.ndim() != 2) throw std::invalid_argument("cross_entropy: expected (N,K) logits");
  const int N = logits.dim(0), K = logits.dim(1);
  if (static_cast<int>(targets.size()) != N)
    throw std::invalid_argument("cross_entropy: target count mismatch");
  for (int t : targets)
    if (t < 0 || t >= K) throw std::invalid_argument("cross_entropy: target class out of range");

  Tensor<T> probs(logits.shape);
  std::vector<double> losses(N);
#pragma omp parallel for schedule(static)
  for (int n = 0; n < N; ++n) {
    const T* row = logits.ptr() + static_cast<std::size_t>(n) * K;
    T* prow = probs.ptr() + static_cast<std::size_t>(n) * K;
    double mx = row[0];
    for (int k = 1; k < K; ++k) mx = std::max(mx, static_cast<double>(row[k]));
    double sum = 0.0;
    for (int k = 0; k < K; ++k) sum += std::exp(static_cast<double>(row[k]) - mx);
    const double lse = mx + std::log(sum);
    losses[n] = lse - static_cast<double>(row[targets[n]]);
    for (int k = 0; k < K; ++k)
      prow[k] = static_cast<T>(std::exp(static_cast<double>(row[k]) - lse));
  }
  double loss = 0.0;
  for (int n = 0; n < N; ++n) loss += losses[n];
  return {loss / N, std::move(probs)};
}

template <typename T>
Tensor<T> cross_entropy_backward(const Tensor<T>& probs, const std::vector<int>& targets) {
  const int N = probs.dim(0), K = probs.dim(1);
  Tensor<T> dlogits(probs.shape);
  const T inv_n = T(1) / static_cast<T>(N);
#pragma omp parallel for schedule(static)
  for (int n = 0; n < N; ++n) {
    const T* prow = probs.ptr() + static_cast<std::size_t>(n) * K;
    T* drow = dlogits.ptr() + static_cast<std::size_t>(n) * K;
    for (int k = 0; k < K; ++k) drow[k] = (prow[k] - (k == targets[n] ? T(1) : T(0))) * inv_n;
  }
  return dlogits;
}

#define LIGHTDOA_INSTANTIATE_LAYERS(T)                                                   \
  template void init_uniform<T>(Tensor<T>&, double, Rng&);                              \
  template void init_kaiming_uniform<T>(Tensor<T>&, int, Rng&);                         \
  template class DepthwiseConv2d<T>;                                                    \
  template class PointwiseConv2d<T>;                                                    \
  template class BatchNorm2d<T>;                                                        \
  template class ReLU<T>;                                                               \
  template class AdaptiveAvgPool2x2<T>;                                                 \
  template class Gru<T>;                                                                \
  template class Linear<T>;                                                             \
  template Tensor<T> softmax<T>(const Tensor<T>&);                                      \
  template std::pair<double, Tensor<T>> cross_entropy<T>(const Tensor<T>&,              \
                                                         const std::vector<int>&);      \
  template Tensor<T> cross_entropy_backward<T>(const Tensor<T>&, const std::vector<int>&);

LIGHTDOA_INSTANTIATE_LAYERS(float)
LIGHTDOA_INSTANTIATE_LAYERS(double)

#undef LIGHTDOA_INSTANTIATE_LAYERS

}  // namespace lightdoa::nn
