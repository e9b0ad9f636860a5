#include "lightdoa/dsp.hpp"

#include <cmath>
#include <stdexcept>

namespace lightdoa::dsp {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }
}  // namespace

std::vector<double> make_window(WindowKind kind, std::size_t n) {
  if (n == 0) throw std::invalid_argument("make_window: n must be >= 1");
  std::vector<double> w(n);
  switch (kind) {
    case WindowKind::Hann:
      for (std::size_t i = 0; i < n; ++i)
        w[i] = 0.5 - 0.5 * std::cos(kTwoPi * static_cast<double>(i) / static_cast<double>(n));
      break;
  }
  return w;
}

void StftConfig::validate() const {
  if (!is_power_of_two(fft_size))
    throw std::invalid_argument("StftConfig: fft_size must be a power of two");
  if (hop_size <= 0 || hop_size > fft_size)
    throw std::invalid_argument("StftConfig: hop_size must satisfy 0 < hop <= fft_size");
}

void fft_inplace(std::vector<std::complex<double>>& a, bool inverse) {
  const std::size_t n = a.size();
  if (!is_power_of_two(static_cast<int>(n)))
    throw std::invalid_argument("fft_inplace: size must be a power of two");

  // Bit-reversal permutation.
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }

  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? kTwoPi : -kTwoPi) / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }

  if (inverse) {
    const double scale = 1.0 / static_cast<double>(n);
    for (auto& x : a) x *= scale;
  }
}

ComplexSpectrogram stft(const std::vector<double>& signal, const StftConfig& config,
                        int sample_rate) {
  config.validate();
  const int n = config.fft_size;
  if (static_cast<int>(signal.size()) < n)
    throw std::invalid_argument("stft: signal shorter than fft_size");

  const int frames = static_cast<int>((signal.size() - n) / config.hop_size) + 1;
  const int freq_bins = n / 2 + 1;
  const std::vector<double> window = make_window(config.window, n);

  ComplexSpectrogram spec;
  spec.freq_bins = freq_bins;
  spec.frames = frames;
  spec.fft_size = n;
  spec.sample_rate = sample_rate;
  spec.bins.resize(static_cast<std::size_t>(frames) * freq_bins);

#pragma omp parallel for schedule(static)
  for (int t = 0; t < frames; ++t) {
    std::vector<std::complex<double>> frame(n);
    const std::size_t offset = static_cast<std::size_t>(t) * config.hop_size;
    for (int i = 0; i < n; ++i) frame[i] = signal[offset + i] * window[i];
    fft_inplace(frame, false);
    for (int f = 0; f < freq_bins; ++f) spec.bins[static_cast<std::size_t>(t) * freq_bins + f] = frame[f];
  }
  return spec;
}

double wrap_phase(double radians) {
  double y = std::remainder(radians, kTwoPi);
  if (y <= -kPi) y += kTwoPi;
  return y;
}

IpdMatrix ipd(const ComplexSpectrogram& left, const ComplexSpectrogram& right) {
  if (left.freq_bins != right.freq_bins || left.frames != right.frames)
    throw std::invalid_argument("ipd: spectrogram shapes must match");

  IpdMatrix out;
  out.freq_bins = left.freq_bins;
  out.frames = left.frames;
  out.values.resize(left.bins.size());

  constexpr double kSilence = 1e-12;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(left.bins.size()); ++i) {
    const std::complex<double>& l = left.bins[i];
    const std::complex<double>& r = right.bins[i];
    if (std::abs(l) < kSilence && std::abs(r) < kSilence) {
      out.values[i] = 0.0;
    } else {
      out.values[i] = wrap_phase(std::arg(l) - std::arg(r));
    }
  }
  return out;
}

IpdMatrix ipd_feature(const AudioBuffer& stereo, const StftConfig& config) {
  stereo.validate();
  if (stereo.num_channels() != 2)
    throw std::invalid_argument("ipd_feature: stereo input required");
  const ComplexSpectrogram l = stft(stereo.channels[0], config, stereo.sample_rate);
  const ComplexSpectrogram r = stft(stereo.channels[1], config, stereo.sample_rate);
  return ipd(l, r);
}

std::vector<double> fft_convolve(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t out_len = a.size() + b.size() - 1;
  std::size_t n = 1;
  while (n < out_len) n <<= 1;

  std::vector<std::complex<double>> fa(n), fb(n);
  for (std::size_t i = 0; i < a.size(); ++i) fa[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) fb[i] = b[i];
  fft_inplace(fa, false);
  fft_inplace(fb, false);
  for (std::size_t i = 0; i < n; ++i) fa[i] *= fb[i];
  fft_inplace(fa, true);

  std::vector<double> out(out_len);
  for (std::size_t i = 0; i < out_len; ++i) out[i] = fa[i].real();
  return out;
}

}  // namespace lightdoa::dsp
