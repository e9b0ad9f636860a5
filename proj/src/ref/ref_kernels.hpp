#pragma once

#include <complex>
#include <cstddef>
#include <vector>

// Serial reference implementations, written as plain nested loops with no
// shared code paths into the parallel kernels. Tests treat these as oracles;
// the benchmark compares them against the OpenMP kernels.
namespace lightdoa::ref {

// Depthwise 3x3 correlation, padding 1. Scatter-style loop nest (iterates
// input taps), unlike the gather-style parallel kernel.
std::vector<double> conv2d_depthwise(const std::vector<double>& x, int B, int C, int H, int W,
                                     const std::vector<double>& k, int stride);

// Pointwise 1x1 convolution as a per-pixel matrix multiply.
std::vector<double> conv2d_pointwise(const std::vector<double>& x, int B, int Ci, int H, int W,
                                     const std::vector<double>& w, int Co);

// Full 3x3 convolution, padding 1; kernel (Co,Ci,3,3).
std::vector<double> conv2d_full(const std::vector<double>& x, int B, int Ci, int H, int W,
                                const std::vector<double>& k, int Co, int stride);

// y = x w^T + b; w is (Out,In), b may be empty.
std::vector<double> linear(const std::vector<double>& x, int N, int in,
                           const std::vector<double>& w, const std::vector<double>& b, int out);

// Uni-directional GRU, gate order [r; z; n], reset applied to the
// hidden-to-candidate term. x: (B,T,In); returns (B,T,H).
std::vector<double> gru_forward(const std::vector<double>& x, int B, int T, int in, int hidden,
                                const std::vector<double>& w_ih, const std::vector<double>& w_hh,
                                const std::vector<double>& b_ih, const std::vector<double>& b_hh);

// Direct O(n^2) DFT.
std::vector<std::complex<double>> dft_direct(const std::vector<double>& x);

// Schroeder backward-integrated decay in dB relative to total energy.
std::vector<double> schroeder_decay_db(const std::vector<double>& rir);

// Time (seconds) at which the Schroeder curve first reaches -60 dB; -1 if it
// never does before the tail.
double schroeder_t60(const std::vector<double>& rir, int sample_rate);

}  // namespace lightdoa::ref
