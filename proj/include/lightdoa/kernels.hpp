#pragma once

#include <cstddef>

// OpenMP-parallel compute kernels. Every kernel parallelizes over disjoint
// output elements and keeps each element's accumulation order fixed, so
// results are bit-identical for any thread count. Reduction clauses over
// floating point are deliberately not used anywhere.
namespace lightdoa::nn::kernels {

// Output extent of a 3x3 convolution with padding 1.
inline int conv_out_dim(int in, int stride) { return (in + 2 - 3) / stride + 1; }

// Depthwise 3x3 convolution (correlation), padding 1.
// x: (B,C,H,W)  k: (C,1,3,3)  y: (B,C,Ho,Wo)
template <typename T>
void conv2d_depthwise_forward(const T* x, int B, int C, int H, int W, const T* k, int stride,
                              T* y, int Ho, int Wo);

template <typename T>
void conv2d_depthwise_backward_input(const T* dy, int B, int C, int Ho, int Wo, const T* k,
                                     int stride, T* dx, int H, int W);

// Accumulates into dk (C,1,3,3).
template <typename T>
void conv2d_depthwise_backward_kernel(const T* dy, int B, int C, int Ho, int Wo, const T* x,
                                      int H, int W, int stride, T* dk);

// Pointwise 1x1 convolution. x: (B,Ci,H,W)  w: (Co,Ci)  y: (B,Co,H,W)
template <typename T>
void conv2d_pointwise_forward(const T* x, int B, int Ci, int H, int W, const T* w, int Co, T* y);

template <typename T>
void conv2d_pointwise_backward_input(const T* dy, int B, int Co, int H, int W, const T* w,
                                     int Ci, T* dx);

// Accumulates into dw (Co,Ci).
template <typename T>
void conv2d_pointwise_backward_weight(const T* dy, int B, int Co, int H, int W, const T* x,
                                      int Ci, T* dw);

// y = x * w^T + b. x: (N,In)  w: (Out,In)  b: (Out) or nullptr.
template <typename T>
void linear_forward(const T* x, int N, int in, const T* w, const T* b, int out, T* y);

template <typename T>
void linear_backward_input(const T* dy, int N, int out, const T* w, int in, T* dx);

// Accumulates into dw (Out,In) and, when db != nullptr, db (Out).
template <typename T>
void linear_backward_params(const T* dy, int N, int out, const T* x, int in, T* dw, T* db);

template <typename T>
void relu_forward(const T* x, std::size_t n, T* y);

template <typename T>
void relu_backward(const T* x, const T* dy, std::size_t n, T* dx);

}  // namespace lightdoa::nn::kernels
