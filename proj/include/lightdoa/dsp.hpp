#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "lightdoa/audio.hpp"

namespace lightdoa::dsp {

enum class WindowKind { Hann };

// Periodic Hann: w[i] = 0.5 - 0.5*cos(2*pi*i/n).
std::vector<double> make_window(WindowKind kind, std::size_t n);

struct StftConfig {
  int fft_size = 512;
  int hop_size = 256;
  WindowKind window = WindowKind::Hann;

  void validate() const;  // fft_size power of two, 0 < hop <= fft
};

// One-sided complex spectrogram, F = fft_size/2 + 1 bins. Frames are stored
// contiguously: bins[t * freq_bins + f].
struct ComplexSpectrogram {
  int freq_bins = 0;
  int frames = 0;
  int fft_size = 0;
  int sample_rate = 0;
  std::vector<std::complex<double>> bins;

  std::complex<double>& at(int f, int t) { return bins[static_cast<std::size_t>(t) * freq_bins + f]; }
  const std::complex<double>& at(int f, int t) const {
    return bins[static_cast<std::size_t>(t) * freq_bins + f];
  }
  double bin_hz(int f) const { return static_cast<double>(f) * sample_rate / fft_size; }
};

// Inter-channel phase difference in radians, wrapped to (-pi, pi]. Same frame
// -major layout as ComplexSpectrogram.
struct IpdMatrix {
  int freq_bins = 0;
  int frames = 0;
  std::vector<double> values;

  double& at(int f, int t) { return values[static_cast<std::size_t>(t) * freq_bins + f]; }
  double at(int f, int t) const { return values[static_cast<std::size_t>(t) * freq_bins + f]; }
};

// Windowed DFT of frames [t*hop, t*hop + fft_size); the trailing partial frame
// is dropped. Requires signal length >= fft_size.
ComplexSpectrogram stft(const std::vector<double>& signal, const StftConfig& config,
                        int sample_rate);

// values[f,t] = wrap(angle(left) - angle(right)); 0 where both magnitudes are
// below 1e-12. Shapes must match.
IpdMatrix ipd(const ComplexSpectrogram& left, const ComplexSpectrogram& right);

// IPD of a stereo buffer's two channels.
IpdMatrix ipd_feature(const AudioBuffer& stereo, const StftConfig& config);

// Wrap an angle in radians to (-pi, pi].
double wrap_phase(double radians);

// In-place iterative radix-2 FFT; size must be a power of two. The inverse
// transform includes the 1/N scale.
void fft_inplace(std::vector<std::complex<double>>& a, bool inverse);

// Full linear convolution via FFT, length a+b-1.
std::vector<double> fft_convolve(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace lightdoa::dsp
