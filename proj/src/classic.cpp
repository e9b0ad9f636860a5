#include "lightdoa/classic.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "lightdoa/dsp.hpp"

namespace lightdoa::classic {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TdoaEstimate gcc_phat(const std::vector<double>& x1, const std::vector<double>& x2,
                      int sample_rate, double max_tau) {
  if (x1.size() != x2.size()) throw std::invalid_argument("gcc_phat: length mismatch");
  if (x1.size() < 256) throw std::invalid_argument("gcc_phat: need at least 256 samples");
  if (sample_rate <= 0) throw std::invalid_argument("gcc_phat: bad sample rate");
  if (max_tau <= 0.0) throw std::invalid_argument("gcc_phat: max_tau must be positive");

  const std::size_t n = x1.size();
  std::size_t nfft = 1;
  while (nfft < 2 * n) nfft <<= 1;

  std::vector<std::complex<double>> fx1(nfft), fx2(nfft);
  for (std::size_t i = 0; i < n; ++i) {
    fx1[i] = x1[i];
    fx2[i] = x2[i];
  }
  dsp::fft_inplace(fx1, false);
  dsp::fft_inplace(fx2, false);

  // Phase transform: conj(X1) * X2 normalized to unit magnitude. The
  // correlation then peaks at lag D when x2 is x1 delayed by D samples.
  constexpr double kEps = 1e-12;
  std::vector<std::complex<double>> cross(nfft);
  double energy = 0.0;
  for (std::size_t i = 0; i < nfft; ++i) {
    const std::complex<double> c = std::conj(fx1[i]) * fx2[i];
    const double mag = std::abs(c);
    energy += mag;
    cross[i] = c / (mag + kEps);
  }
  if (energy <= kEps) throw std::runtime_error("gcc_phat: undefined estimate for silent input");
  dsp::fft_inplace(cross, true);

  const long max_lag = std::min<long>(static_cast<long>(nfft / 2) - 1,
                                      static_cast<long>(std::floor(max_tau * sample_rate)));
  if (max_lag < 1) throw std::invalid_argument("gcc_phat: max_tau below one sample");

  auto corr_at = [&](long lag) {
    const std::size_t idx = lag >= 0 ? static_cast<std::size_t>(lag)
                                     : nfft - static_cast<std::size_t>(-lag);
    return cross[idx].real();
  };

  long best_lag = 0;
  double best = corr_at(0);
  for (long lag = -max_lag; lag <= max_lag; ++lag) {
    const double v = corr_at(lag);
    if (v > best) {
      best = v;
      best_lag = lag;
    }
  }

  // Parabolic interpolation around the integer peak.
  double delta = 0.0;
  double peak = best;
  if (best_lag > -max_lag && best_lag < max_lag) {
    const double ym = corr_at(best_lag - 1);
    const double y0 = best;
    const double yp = corr_at(best_lag + 1);
    const double denom = ym - 2.0 * y0 + yp;
    if (std::abs(denom) > 1e-30) {
      delta = 0.5 * (ym - yp) / denom;
      delta = std::clamp(delta, -0.5, 0.5);
      peak = y0 - 0.25 * (ym - yp) * delta;
    }
  }

  TdoaEstimate est;
  est.tau = (static_cast<double>(best_lag) + delta) / sample_rate;
  est.peak_value = peak;
  return est;
}

double tdoa_to_azimuth(double tau, double spacing, double speed_of_sound) {
  if (spacing <= 0.0) throw std::invalid_argument("tdoa_to_azimuth: spacing must be positive");
  const double cosine = std::clamp(speed_of_sound * tau / spacing, -1.0, 1.0);
  return std::acos(cosine) * 180.0 / kPi;
}

}  // namespace lightdoa::classic
