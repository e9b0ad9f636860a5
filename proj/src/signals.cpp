#include "lightdoa/signals.hpp"

#include <cmath>
#include <stdexcept>

#include "lightdoa/rng.hpp"

namespace lightdoa::data {

namespace {
constexpr double kTwoPi = 2.0 * 3.14159265358979323846;

void normalize_rms(std::vector<double>& x) {
  double sq = 0.0;
  for (double v : x) sq += v * v;
  if (sq <= 0.0) return;
  const double gain = 1.0 / std::sqrt(sq / static_cast<double>(x.size()));
  for (double& v : x) v *= gain;
}
}  // namespace

const char* to_string(SourceSignalKind k) {
  switch (k) {
    case SourceSignalKind::WhiteNoise: return "white_noise";
    case SourceSignalKind::PinkNoise: return "pink_noise";
    case SourceSignalKind::Chirp: return "chirp";
    case SourceSignalKind::AmplitudeModulatedNoise: return "am_noise";
    case SourceSignalKind::MultiTone: return "multi_tone";
  }
  return "?";
}

SourceSignalKind source_kind_from_string(const std::string& s) {
  if (s == "white_noise") return SourceSignalKind::WhiteNoise;
  if (s == "pink_noise") return SourceSignalKind::PinkNoise;
  if (s == "chirp") return SourceSignalKind::Chirp;
  if (s == "am_noise") return SourceSignalKind::AmplitudeModulatedNoise;
  if (s == "multi_tone") return SourceSignalKind::MultiTone;
  throw std::invalid_argument("unknown source kind: " + s);
}

std::vector<double> generate_source_signal(SourceSignalKind kind, std::uint64_t seed,
                                           double duration_seconds, int sample_rate) {
  if (duration_seconds <= 0.0 || sample_rate <= 0)
    throw std::invalid_argument("generate_source_signal: bad duration or sample rate");
  const std::size_t n = static_cast<std::size_t>(std::llround(duration_seconds * sample_rate));
  if (n == 0) throw std::invalid_argument("generate_source_signal: empty signal");

  Rng rng(seed);
  std::vector<double> x(n, 0.0);

  switch (kind) {
    case SourceSignalKind::WhiteNoise:
      for (auto& v : x) v = rng.uniform(-1.0, 1.0);
      break;

    case SourceSignalKind::PinkNoise: {
      // Paul Kellet's economy pink filter over white noise.
      double b0 = 0, b1 = 0, b2 = 0;
      for (auto& v : x) {
        const double w = rng.uniform(-1.0, 1.0);
        b0 = 0.99765 * b0 + w * 0.0990460;
        b1 = 0.96300 * b1 + w * 0.2965164;
        b2 = 0.57000 * b2 + w * 1.0526913;
        v = b0 + b1 + b2 + w * 0.1848;
      }
      break;
    }

    case SourceSignalKind::Chirp: {
      // Linear sweep 100 Hz -> min(6 kHz, 0.45*fs) with edge fades.
      const double f0 = 100.0;
      const double f1 = std::min(6000.0, 0.45 * sample_rate);
      const double rate = (f1 - f0) / duration_seconds;
      const std::size_t fade = std::min<std::size_t>(n / 20, 400);
      for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / sample_rate;
        double v = std::sin(kTwoPi * (f0 * t + 0.5 * rate * t * t));
        if (i < fade) v *= static_cast<double>(i) / fade;
        if (n - 1 - i < fade) v *= static_cast<double>(n - 1 - i) / fade;
        x[i] = v;
      }
      break;
    }

    case SourceSignalKind::AmplitudeModulatedNoise: {
      const double mod_hz = rng.uniform(2.0, 8.0);
      const double phase = rng.uniform(0.0, kTwoPi);
      for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / sample_rate;
        const double env = 0.55 + 0.45 * std::sin(kTwoPi * mod_hz * t + phase);
        x[i] = env * rng.uniform(-1.0, 1.0);
      }
      break;
    }

    case SourceSignalKind::MultiTone: {
      constexpr int kTones = 12;
      const double f_max = std::min(5000.0, 0.4 * sample_rate);
      double freqs[kTones], phases[kTones];
      for (int k = 0; k < kTones; ++k) {
        freqs[k] = rng.uniform(100.0, f_max);
        phases[k] = rng.uniform(0.0, kTwoPi);
      }
      for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / sample_rate;
        double acc = 0.0;
        for (int k = 0; k < kTones; ++k) acc += std::sin(kTwoPi * freqs[k] * t + phases[k]);
        x[i] = acc;
      }
      break;
    }
  }

  normalize_rms(x);
  return x;
}

}  // namespace lightdoa::data
