#include "lightdoa/kernels.hpp"

#include <cstdint>

namespace lightdoa::nn::kernels {

namespace {
inline std::size_t idx4(int b, int c, int h, int w, int C, int H, int W) {
  return ((static_cast<std::size_t>(b) * C + c) * H + h) * W + w;
}
}  // namespace

template <typename T>
void conv2d_depthwise_forward(const T* x, int B, int C, int H, int W, const T* k, int stride,
                              T* y, int Ho, int Wo) {
#pragma omp parallel for collapse(2) schedule(static)
  for (int b = 0; b < B; ++b) {
    for (int c = 0; c < C; ++c) {
      const T* kc = k + static_cast<std::size_t>(c) * 9;
      for (int i = 0; i < Ho; ++i) {
        for (int j = 0; j < Wo; ++j) {
          T acc = 0;
          for (int u = 0; u < 3; ++u) {
            const int ih = i * stride + u - 1;
            if (ih < 0 || ih >= H) continue;
            for (int v = 0; v < 3; ++v) {
              const int iw = j * stride + v - 1;
              if (iw < 0 || iw >= W) continue;
              acc += x[idx4(b, c, ih, iw, C, H, W)] * kc[u * 3 + v];
            }
          }
          y[idx4(b, c, i, j, C, Ho, Wo)] = acc;
        }
      }
    }
  }
}

template <typename T>
void conv2d_depthwise_backward_input(const T* dy, int B, int C, int Ho, int Wo, const T* k,
                                     int stride, T* dx, int H, int W) {
#pragma omp parallel for collapse(2) schedule(static)
  for (int b = 0; b < B; ++b) {
    for (int c = 0; c < C; ++c) {
      const T* kc = k + static_cast<std::size_t>(c) * 9;
      for (int y = 0; y < H; ++y) {
        for (int x2 = 0; x2 < W; ++x2) {
          T acc = 0;
          for (int u = 0; u < 3; ++u) {
            const int num_i = y + 1 - u;
            if (num_i < 0 || num_i % stride != 0) continue;
            const int i = num_i / stride;
            if (i >= Ho) continue;
            for (int v = 0; v < 3; ++v) {
              const int num_j = x2 + 1 - v;
              if (num_j < 0 || num_j % stride != 0) continue;
              const int j = num_j / stride;
              if (j >= Wo) continue;
              acc += dy[idx4(b, c, i, j, C, Ho, Wo)] * kc[u * 3 + v];
            }
          }
          dx[idx4(b, c, y, x2, C, H, W)] = acc;
        }
      }
    }
  }
}

template <typename T>
void conv2d_depthwise_backward_kernel(const T* dy, int B, int C, int Ho, int Wo, const T* x,
                                      int H, int W, int stride, T* dk) {
#pragma omp parallel for schedule(static)
  for (int c = 0; c < C; ++c) {
    for (int u = 0; u < 3; ++u) {
      for (int v = 0; v < 3; ++v) {
        T acc = 0;
        for (int b = 0; b < B; ++b) {
          for (int i = 0; i < Ho; ++i) {
            const int ih = i * stride + u - 1;
            if (ih < 0 || ih >= H) continue;
            for (int j = 0; j < Wo; ++j) {
              const int iw = j * stride + v - 1;
              if (iw < 0 || iw >= W) continue;
              acc += dy[idx4(b, c, i, j, C, Ho, Wo)] * x[idx4(b, c, ih, iw, C, H, W)];
            }
          }
        }
        dk[static_cast<std::size_t>(c) * 9 + u * 3 + v] += acc;
      }
    }
  }
}

template <typename T>
void conv2d_pointwise_forward(const T* x, int B, int Ci, int H, int W, const T* w, int Co,
                              T* y) {
  const std::size_t hw = static_cast<std::size_t>(H) * W;
#pragma omp parallel for collapse(2) schedule(static)
  for (int b = 0; b < B; ++b) {
    for (int o = 0; o < Co; ++o) {
      const T* wo = w + static_cast<std::size_t>(o) * Ci;
      T* yo = y + (static_cast<std::size_t>(b) * Co + o) * hw;
      for (std::size_t p = 0; p < hw; ++p) yo[p] = 0;
      for (int c = 0; c < Ci; ++c) {
        const T wc = wo[c];
        const T* xc = x + (static_cast<std::size_t>(b) * Ci + c) * hw;
        for (std::size_t p = 0; p < hw; ++p) yo[p] += wc * xc[p];
      }
    }
  }
}

template <typename T>
void conv2d_pointwise_backward_input(const T* dy, int B, int Co, int H, int W, const T* w,
                                     int Ci, T* dx) {
  const std::size_t hw = static_cast<std::size_t>(H) * W;
#pragma omp parallel for collapse(2) schedule(static)
  for (int b = 0; b < B; ++b) {
    for (int c = 0; c < Ci; ++c) {
      T* dxc = dx + (static_cast<std::size_t>(b) * Ci + c) * hw;
      for (std::size_t p = 0; p < hw; ++p) dxc[p] = 0;
      for (int o = 0; o < Co; ++o) {
        const T wc = w[static_cast<std::size_t>(o) * Ci + c];
        const T* dyo = dy + (static_cast<std::size_t>(b) * Co + o) * hw;
        for (std::size_t p = 0; p < hw; ++p) dxc[p] += wc * dyo[p];
      }
    }
  }
}

template <typename T>
void conv2d_pointwise_backward_weight(const T* dy, int B, int Co, int H, int W, const T* x,
                                      int Ci, T* dw) {
  const std::size_t hw = static_cast<std::size_t>(H) * W;
#pragma omp parallel for collapse(2) schedule(static)
  for (int o = 0; o < Co; ++o) {
    for (int c = 0; c < Ci; ++c) {
      T acc = 0;
      for (int b = 0; b < B; ++b) {
        const T* dyo = dy + (static_cast<std::size_t>(b) * Co + o) * hw;
        const T* xc = x + (static_cast<std::size_t>(b) * Ci + c) * hw;
        for (std::size_t p = 0; p < hw; ++p) acc += dyo[p] * xc[p];
      }
      dw[static_cast<std::size_t>(o) * Ci + c] += acc;
    }
  }
}

template <typename T>
void linear_forward(const T* x, int N, int in, const T* w, const T* b, int out, T* y) {
#pragma omp parallel for collapse(2) schedule(static)
  for (int n = 0; n < N; ++n) {
    for (int o = 0; o < out; ++o) {
      const T* xn = x + static_cast<std::size_t>(n) * in;
      const T* wo = w + static_cast<std::size_t>(o) * in;
      T acc = b ? b[o] : T(0);
      for (int i = 0; i < in; ++i) acc += xn[i] * wo[i];
      y[static_cast<std::size_t>(n) * out + o] = acc;
    }
  }
}

template <typename T>
void linear_backward_input(const T* dy, int N, int out, const T* w, int in, T* dx) {
#pragma omp parallel for collapse(2) schedule(static)
  for (int n = 0; n < N; ++n) {
    for (int i = 0; i < in; ++i) {
      const T* dyn = dy + static_cast<std::size_t>(n) * out;
      T acc = 0;
      for (int o = 0; o < out; ++o) acc += dyn[o] * w[static_cast<std::size_t>(o) * in + i];
      dx[static_cast<std::size_t>(n) * in + i] = acc;
    }
  }
}

template <typename T>
void linear_backward_params(const T* dy, int N, int out, const T* x, int in, T* dw, T* db) {
#pragma omp parallel for collapse(2) schedule(static)
  for (int o = 0; o < out; ++o) {
    for (int i = 0; i < in; ++i) {
      T acc = 0;
      for (int n = 0; n < N; ++n)
        acc += dy[static_cast<std::size_t>(n) * out + o] * x[static_cast<std::size_t>(n) * in + i];
      dw[static_cast<std::size_t>(o) * in + i] += acc;
    }
  }
  if (db) {
#pragma omp parallel for schedule(static)
    for (int o = 0; o < out; ++o) {
      T acc = 0;
      for (int n = 0; n < N; ++n) acc += dy[static_cast<std::size_t>(n) * out + o];
      db[o] += acc;
    }
  }
}

template <typename T>
void relu_forward(const T* x, std::size_t n, T* y) {
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
    y[i] = x[i] > T(0) ? x[i] : T(0);
}

template <typename T>
void relu_backward(const T* x, const T* dy, std::size_t n, T* dx) {
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
    dx[i] = x[i] > T(0) ? dy[i] : T(0);
}

#define LIGHTDOA_INSTANTIATE_KERNELS(T)                                                          \
  template void conv2d_depthwise_forward<T>(const T*, int, int, int, int, const T*, int, T*,    \
                                            int, int);                                          \
  template void conv2d_depthwise_backward_input<T>(const T*, int, int, int, int, const T*, int, \
                                                   T*, int, int);                               \
  template void conv2d_depthwise_backward_kernel<T>(const T*, int, int, int, int, const T*,     \
                                                    int, int, int, T*);                         \
  template void conv2d_pointwise_forward<T>(const T*, int, int, int, int, const T*, int, T*);   \
  template void conv2d_pointwise_backward_input<T>(const T*, int, int, int, int, const T*, int, \
                                                   T*);                                         \
  template void conv2d_pointwise_backward_weight<T>(const T*, int, int, int, int, const T*,     \
                                                    int, T*);                                   \
  template void linear_forward<T>(const T*, int, int, const T*, const T*, int, T*);             \
  template void linear_backward_input<T>(const T*, int, int, const T*, int, T*);                \
  template void linear_backward_params<T>(const T*, int, int, const T*, int, T*, T*);           \
  template void relu_forward<T>(const T*, std::size_t, T*);                                     \
  template void relu_backward<T>(const T*, const T*, std::size_t, T*);

LIGHTDOA_INSTANTIATE_KERNELS(float)
LIGHTDOA_INSTANTIATE_KERNELS(double)

#undef LIGHTDOA_INSTANTIATE_KERNELS

}  // namespace lightdoa::nn::kernels
