#include "ref/ref_kernels.hpp"

#include <cmath>

namespace lightdoa::ref {

namespace {
inline std::size_t at4(int b, int c, int h, int w, int C, int H, int W) {
  return ((static_cast<std::size_t>(b) * C + c) * H + h) * W + w;
}
inline int out_dim(int in, int stride) { return (in + 2 - 3) / stride + 1; }
}  // namespace

std::vector<double> conv2d_depthwise(const std::vector<double>& x, int B, int C, int H, int W,
                                     const std::vector<double>& k, int stride) {
  const int Ho = out_dim(H, stride), Wo = out_dim(W, stride);
  std::vector<double> y(static_cast<std::size_t>(B) * C * Ho * Wo, 0.0);
  for (int b = 0; b < B; ++b)
    for (int c = 0; c < C; ++c)
      for (int u = 0; u < 3; ++u)
        for (int v = 0; v < 3; ++v) {
          const double kv = k[static_cast<std::size_t>(c) * 9 + u * 3 + v];
          for (int i = 0; i < Ho; ++i) {
            const int ih = i * stride + u - 1;
            if (ih < 0 || ih >= H) continue;
            for (int j = 0; j < Wo; ++j) {
              const int iw = j * stride + v - 1;
              if (iw < 0 || iw >= W) continue;
              y[at4(b, c, i, j, C, Ho, Wo)] += kv * x[at4(b, c, ih, iw, C, H, W)];
            }
          }
        }
  return y;
}

std::vector<double> conv2d_pointwise(const std::vector<double>& x, int B, int Ci, int H, int W,
                                     const std::vector<double>& w, int Co) {
  std::vector<double> y(static_cast<std::size_t>(B) * Co * H * W, 0.0);
  for (int b = 0; b < B; ++b)
    for (int i = 0; i < H; ++i)
      for (int j = 0; j < W; ++j)
        for (int o = 0; o < Co; ++o) {
          double acc = 0.0;
          for (int c = 0; c < Ci; ++c)
            acc += w[static_cast<std::size_t>(o) * Ci + c] * x[at4(b, c, i, j, Ci, H, W)];
          y[at4(b, o, i, j, Co, H, W)] = acc;
        }
  return y;
}

std::vector<double> conv2d_full(const std::vector<double>& x, int B, int Ci, int H, int W,
                                const std::vector<double>& k, int Co, int stride) {
  const int Ho = out_dim(H, stride), Wo = out_dim(W, stride);
  std::vector<double> y(static_cast<std::size_t>(B) * Co * Ho * Wo, 0.0);
  for (int b = 0; b < B; ++b)
    for (int o = 0; o < Co; ++o)
      for (int i = 0; i < Ho; ++i)
        for (int j = 0; j < Wo; ++j) {
          double acc = 0.0;
          for (int c = 0; c < Ci; ++c)
            for (int u = 0; u < 3; ++u)
              for (int v = 0; v < 3; ++v) {
                const int ih = i * stride + u - 1;
                const int iw = j * stride + v - 1;
                if (ih < 0 || ih >= H || iw < 0 || iw >= W) continue;
                acc += k[((static_cast<std::size_t>(o) * Ci + c) * 3 + u) * 3 + v] *
                       x[at4(b, c, ih, iw, Ci, H, W)];
              }
          y[at4(b, o, i, j, Co, Ho, Wo)] = acc;
        }
  return y;
}

std::vector<double> linear(const std::vector<double>& x, int N, int in,
                           const std::vector<double>& w, const std::vector<double>& b, int out) {
  std::vector<double> y(static_cast<std::size_t>(N) * out, 0.0);
  for (int n = 0; n < N; ++n)
    for (int o = 0; o < out; ++o) {
      double acc = b.empty() ? 0.0 : b[o];
      for (int i = 0; i < in; ++i)
        acc += x[static_cast<std::size_t>(n) * in + i] * w[static_cast<std::size_t>(o) * in + i];
      y[static_cast<std::size_t>(n) * out + o] = acc;
    }
  return y;
}

std::vector<double> gru_forward(const std::vector<double>& x, int B, int T, int in, int hidden,
                                const std::vector<double>& w_ih, const std::vector<double>& w_hh,
                                const std::vector<double>& b_ih, const std::vector<double>& b_hh) {
  auto sigmoid = [](double v) { return 1.0 / (1.0 + std::exp(-v)); };
  std::vector<double> out(static_cast<std::size_t>(B) * T * hidden, 0.0);
  std::vector<double> h(hidden), gi(3 * hidden), gh(3 * hidden);
  for (int b = 0; b < B; ++b) {
    std::fill(h.begin(), h.end(), 0.0);
    for (int t = 0; t < T; ++t) {
      const double* xt = &x[(static_cast<std::size_t>(b) * T + t) * in];
      for (int g = 0; g < 3 * hidden; ++g) {
        double acc = b_ih[g];
        for (int i = 0; i < in; ++i) acc += w_ih[static_cast<std::size_t>(g) * in + i] * xt[i];
        gi[g] = acc;
        double acch = b_hh[g];
        for (int i = 0; i < hidden; ++i)
          acch += w_hh[static_cast<std::size_t>(g) * hidden + i] * h[i];
        gh[g] = acch;
      }
      for (int i = 0; i < hidden; ++i) {
        const double r = sigmoid(gi[i] + gh[i]);
        const double z = sigmoid(gi[hidden + i] + gh[hidden + i]);
        const double n = std::tanh(gi[2 * hidden + i] + r * gh[2 * hidden + i]);
        h[i] = (1.0 - z) * n + z * h[i];
        out[(static_cast<std::size_t>(b) * T + t) * hidden + i] = h[i];
      }
    }
  }
  return out;
}

std::vector<std::complex<double>> dft_direct(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  const double step = -2.0 * M_PI / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double ang = step * static_cast<double>(k) * static_cast<double>(i);
      acc += x[i] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    out[k] = acc;
  }
  return out;
}

std::vector<double> schroeder_decay_db(const std::vector<double>& rir) {
  std::vector<double> curve(rir.size(), 0.0);
  double acc = 0.0;
  for (std::size_t i = rir.size(); i-- > 0;) {
    acc += rir[i] * rir[i];
    curve[i] = acc;
  }
  const double total = acc > 0.0 ? acc : 1.0;
  for (auto& v : curve) v = 10.0 * std::log10(v > 0.0 ? v / total : 1e-300);
  return curve;
}

double schroeder_t60(const std::vector<double>& rir, int sample_rate) {
  const std::vector<double> curve = schroeder_decay_db(rir);
  for (std::size_t i = 0; i < curve.size(); ++i)
    if (curve[i] <= -60.0) return static_cast<double>(i) / sample_rate;
  return -1.0;
}

}  // namespace lightdoa::ref
