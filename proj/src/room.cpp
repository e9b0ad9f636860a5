#include "lightdoa/room.hpp"

#include <algorithm>
#include <cmath>

#include "lightdoa/dsp.hpp"

namespace lightdoa::room {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kDegToRad = kPi / 180.0;

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(kPi * x) / (kPi * x); }
}  // namespace

const char* to_string(RoomClass c) {
  switch (c) {
    case RoomClass::Outdoors: return "outdoors";
    case RoomClass::Large: return "large";
    case RoomClass::Moderate: return "moderate";
    case RoomClass::Small: return "small";
  }
  return "?";
}

const char* to_string(DirectionClass c) {
  switch (c) {
    case DirectionClass::Left: return "left";
    case DirectionClass::FrontLeft: return "front_left";
    case DirectionClass::Front: return "front";
    case DirectionClass::FrontRight: return "front_right";
    case DirectionClass::Right: return "right";
  }
  return "?";
}

const char* to_string(DistanceClass c) {
  switch (c) {
    case DistanceClass::Far: return "far";
    case DistanceClass::Moderate: return "moderate";
    case DistanceClass::Near: return "near";
  }
  return "?";
}

RoomClass room_class_from_string(const std::string& s) {
  if (s == "outdoors") return RoomClass::Outdoors;
  if (s == "large") return RoomClass::Large;
  if (s == "moderate") return RoomClass::Moderate;
  if (s == "small") return RoomClass::Small;
  throw std::invalid_argument("unknown room class: " + s);
}

DirectionClass direction_class_from_string(const std::string& s) {
  if (s == "left") return DirectionClass::Left;
  if (s == "front_left") return DirectionClass::FrontLeft;
  if (s == "front") return DirectionClass::Front;
  if (s == "front_right") return DirectionClass::FrontRight;
  if (s == "right") return DirectionClass::Right;
  throw std::invalid_argument("unknown direction class: " + s);
}

DistanceClass distance_class_from_string(const std::string& s) {
  if (s == "far") return DistanceClass::Far;
  if (s == "moderate") return DistanceClass::Moderate;
  if (s == "near") return DistanceClass::Near;
  throw std::invalid_argument("unknown distance class: " + s);
}

double direction_center_deg(DirectionClass c) {
  switch (c) {
    case DirectionClass::Left: return 180.0;
    case DirectionClass::FrontLeft: return 135.0;
    case DirectionClass::Front: return 90.0;
    case DirectionClass::FrontRight: return 45.0;
    case DirectionClass::Right: return 0.0;
  }
  return 0.0;
}

std::array<double, 3> SceneSpec::mic_position(int channel) const {
  const double off = (channel == 0 ? 0.5 : -0.5) * mic_spacing;
  return {mic_center[0], mic_center[1] + off, mic_center[2]};
}

namespace {

double sample_base_size(Rng& rng, RoomClass c) {
  switch (c) {
    case RoomClass::Outdoors: return 100.0;
    case RoomClass::Large: return rng.uniform(40.0, 90.0);
    case RoomClass::Moderate: return rng.uniform(20.0, 40.0);
    case RoomClass::Small: return rng.uniform(5.0, 20.0);
  }
  return 0.0;
}

double sample_distance_ratio(Rng& rng, DistanceClass c) {
  switch (c) {
    case DistanceClass::Far: return rng.uniform(0.6, 0.9);
    case DistanceClass::Moderate: return rng.uniform(0.3, 0.6);
    case DistanceClass::Near: return rng.uniform(0.1, 0.3);
  }
  return 0.0;
}

bool strictly_inside(const std::array<double, 3>& p, const std::array<double, 3>& dims) {
  for (int i = 0; i < 3; ++i)
    if (!(p[i] > 0.0 && p[i] < dims[i])) return false;
  return true;
}

}  // namespace

SceneSpec sample_scene(Rng& rng, const SceneClassConfig& config) {
  constexpr int kMaxAttempts = 100;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    SceneSpec s;
    s.room_class = config.room;
    s.direction_class = config.direction;
    s.distance_class = config.distance;

    s.base_size = sample_base_size(rng, config.room);
    const double r = s.base_size;
    for (int i = 0; i < 3; ++i) s.room_dims[i] = r + rng.uniform(-0.1 * r, 0.1 * r);
    for (int i = 0; i < 3; ++i) s.mic_center[i] = s.room_dims[i] / 2.0 + rng.uniform(-0.1 * r, 0.1 * r);
    s.mic_spacing = rng.uniform(0.16, 0.18);
    s.azimuth_deg = rng.normal(direction_center_deg(config.direction), 11.0);
    s.distance_ratio = sample_distance_ratio(rng, config.distance);
    s.rt60 = config.room == RoomClass::Outdoors ? 0.0 : rng.uniform(0.3, 0.6);

    const double margin = std::min(std::min(s.room_dims[0] - s.mic_center[0], s.mic_center[0]),
                                   std::min(s.room_dims[1] - s.mic_center[1], s.mic_center[1]));
    s.distance = s.distance_ratio * margin;

    const double theta = s.azimuth_deg * kDegToRad;
    s.source_pos = {s.mic_center[0] + s.distance * std::sin(theta),
                    s.mic_center[1] + s.distance * std::cos(theta), s.mic_center[2]};

    if (s.distance <= s.mic_spacing) continue;
    if (!strictly_inside(s.source_pos, s.room_dims)) continue;
    if (!strictly_inside(s.mic_position(0), s.room_dims) ||
        !strictly_inside(s.mic_position(1), s.room_dims))
      continue;
    return s;
  }
  throw SceneSamplingError("sample_scene: no valid scene after 100 attempts");
}

double rt60_to_absorption(const std::array<double, 3>& room_dims, double rt60) {
  if (rt60 <= 0.0) throw std::invalid_argument("rt60_to_absorption: rt60 must be positive");
  const double v = room_dims[0] * room_dims[1] * room_dims[2];
  const double surf = 2.0 * (room_dims[0] * room_dims[1] + room_dims[1] * room_dims[2] +
                             room_dims[0] * room_dims[2]);
  if (v <= 0.0 || surf <= 0.0) throw std::invalid_argument("rt60_to_absorption: bad dimensions");
  const double alpha = 0.161 * v / (surf * rt60);
  return std::clamp(alpha, 1e-9, 0.9999);
}

int suggested_max_order(const std::array<double, 3>& room_dims, double rt60, int floor_order,
                        int cap) {
  const double v = room_dims[0] * room_dims[1] * room_dims[2];
  const double surf = 2.0 * (room_dims[0] * room_dims[1] + room_dims[1] * room_dims[2] +
                             room_dims[0] * room_dims[2]);
  const double mean_free_path = 4.0 * v / surf;
  const int needed = static_cast<int>(std::ceil(1.45 * rt60 * kSpeedOfSound / mean_free_path));
  return std::clamp(needed, floor_order, cap);
}

double calibrate_absorption(const std::array<double, 3>& room_dims,
                            const std::array<double, 3>& source,
                            const std::array<double, 3>& mic, double rt60, int max_order) {
  if (rt60 <= 0.0) throw std::invalid_argument("calibrate_absorption: rt60 must be positive");

  // Energy table over (arrival-time bin, reflection count). Absorption only
  // rescales counts by (1-a)^n, so one enumeration serves every bisection
  // step.
  constexpr double kBin = 5e-4;  // seconds
  const int lim = max_order / 2 + 1;
  const double diag = std::sqrt(room_dims[0] * room_dims[0] + room_dims[1] * room_dims[1] +
                                room_dims[2] * room_dims[2]);
  const int n_bins =
      static_cast<int>(std::ceil((2 * lim + 1) * diag / kSpeedOfSound / kBin)) + 2;
  std::vector<double> table(static_cast<std::size_t>(n_bins) * (max_order + 1), 0.0);

  for (int mx = -lim; mx <= lim; ++mx) {
    for (int my = -lim; my <= lim; ++my) {
      for (int mz = -lim; mz <= lim; ++mz) {
        for (int px = 0; px <= 1; ++px) {
          for (int py = 0; py <= 1; ++py) {
            for (int pz = 0; pz <= 1; ++pz) {
              const int order =
                  std::abs(2 * mx - px) + std::abs(2 * my - py) + std::abs(2 * mz - pz);
              if (order > max_order) continue;
              const double ix = (1 - 2 * px) * source[0] + 2.0 * mx * room_dims[0];
              const double iy = (1 - 2 * py) * source[1] + 2.0 * my * room_dims[1];
              const double iz = (1 - 2 * pz) * source[2] + 2.0 * mz * room_dims[2];
              const double dx = ix - mic[0], dy = iy - mic[1], dz = iz - mic[2];
              const double d2 = dx * dx + dy * dy + dz * dz;
              if (d2 <= 0.0) continue;
              const int bin = static_cast<int>(std::sqrt(d2) / kSpeedOfSound / kBin);
              if (bin >= n_bins) continue;
              table[static_cast<std::size_t>(bin) * (max_order + 1) + order] +=
                  1.0 / (16.0 * kPi * kPi * d2);
            }
          }
        }
      }
    }
  }

  // Time at which the backward-integrated energy falls 60 dB below the total.
  std::vector<double> weight(static_cast<std::size_t>(max_order) + 1);
  auto crossing = [&](double a) {
    for (int n = 0; n <= max_order; ++n) weight[static_cast<std::size_t>(n)] = std::pow(1.0 - a, n);
    double total = 0.0;
    for (int b = 0; b < n_bins; ++b)
      for (int n = 0; n <= max_order; ++n)
        total += table[static_cast<std::size_t>(b) * (max_order + 1) + n] * weight[n];
    const double threshold = total * 1e-6;
    double tail = 0.0;
    for (int b = n_bins - 1; b >= 0; --b) {
      for (int n = 0; n <= max_order; ++n)
        tail += table[static_cast<std::size_t>(b) * (max_order + 1) + n] * weight[n];
      if (tail > threshold) return (b + 1) * kBin;
    }
    return 0.0;
  };

  double lo = 1e-3, hi = 0.9999;  // crossing is monotone decreasing in a
  for (int it = 0; it < 36; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (crossing(mid) > rt60)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

ImpulseResponse image_source_rir(const std::array<double, 3>& room_dims,
                                 const std::array<double, 3>& source,
                                 const std::array<double, 3>& mic, double absorption,
                                 int max_order, int sample_rate) {
  if (max_order < 0) throw std::invalid_argument("image_source_rir: max_order must be >= 0");
  if (source == mic) throw std::invalid_argument("image_source_rir: source and mic coincide");

  const double refl = std::sqrt(std::clamp(1.0 - absorption, 0.0, 1.0));
  const double samples_per_meter = sample_rate / kSpeedOfSound;

  const int lim = max_order / 2 + 1;
  const double diag = std::sqrt(room_dims[0] * room_dims[0] + room_dims[1] * room_dims[1] +
                                room_dims[2] * room_dims[2]);
  const std::size_t bound =
      static_cast<std::size_t>(std::ceil((2 * lim + 1) * diag * samples_per_meter)) + 8;

  ImpulseResponse rir;
  rir.sample_rate = sample_rate;
  rir.taps.assign(bound, 0.0);

  std::size_t last = 0;
  for (int mx = -lim; mx <= lim; ++mx) {
    for (int my = -lim; my <= lim; ++my) {
      for (int mz = -lim; mz <= lim; ++mz) {
        for (int px = 0; px <= 1; ++px) {
          for (int py = 0; py <= 1; ++py) {
            for (int pz = 0; pz <= 1; ++pz) {
              const int order = std::abs(2 * mx - px) + std::abs(2 * my - py) +
                                std::abs(2 * mz - pz);
              if (order > max_order) continue;
              const double ix = (1 - 2 * px) * source[0] + 2.0 * mx * room_dims[0];
              const double iy = (1 - 2 * py) * source[1] + 2.0 * my * room_dims[1];
              const double iz = (1 - 2 * pz) * source[2] + 2.0 * mz * room_dims[2];
              const double dx = ix - mic[0], dy = iy - mic[1], dz = iz - mic[2];
              const double dist = std::sqrt(dx * dx + dy * dy + dz * dz);
              if (dist <= 0.0) continue;
              const double amp = std::pow(refl, order) / (4.0 * kPi * dist);
              const double delay = dist * samples_per_meter;

              // 8-tap Hann-windowed sinc at the fractional delay.
              const long base = static_cast<long>(std::floor(delay));
              for (int j = -3; j <= 4; ++j) {
                const long idx = base + j;
                if (idx < 0 || idx >= static_cast<long>(rir.taps.size())) continue;
                const double t = static_cast<double>(idx) - delay;
                const double win = 0.5 * (1.0 + std::cos(kPi * t / 4.0));
                rir.taps[static_cast<std::size_t>(idx)] += amp * sinc(t) * win;
                last = std::max(last, static_cast<std::size_t>(idx));
              }
            }
          }
        }
      }
    }
  }

  rir.taps.resize(last + 1);

  // Second-order 100 Hz high-pass (Allen-Berkley form). The image model's
  // reflections are all positive, so dense late arrivals otherwise pile up
  // into a DC floor that never decays. The filter leaves the first sample of
  // each arrival untouched.
  {
    const double w = 2.0 * kPi * 100.0 / sample_rate;
    const double r1 = std::exp(-w);
    const double b1 = 2.0 * r1 * std::cos(w);
    const double b2 = -r1 * r1;
    const double a1 = -(1.0 + r1);
    double y0 = 0.0, y1 = 0.0, y2 = 0.0;
    for (double& tap : rir.taps) {
      y2 = y1;
      y1 = y0;
      y0 = b1 * y1 + b2 * y2 + tap;
      tap = y0 + a1 * y1 + r1 * y2;
    }
  }
  return rir;
}

AudioBuffer render_stereo(const std::vector<double>& source_signal, const SceneSpec& scene,
                          int max_order, int sample_rate, bool normalize) {
  const int order = scene.rt60 > 0.0 ? max_order : 0;
  const double absorption =
      scene.rt60 > 0.0
          ? calibrate_absorption(scene.room_dims, scene.source_pos, scene.mic_center,
                                 scene.rt60, order)
          : 0.0;

  AudioBuffer out;
  out.sample_rate = sample_rate;
  out.channels.resize(2);
  for (int ch = 0; ch < 2; ++ch) {
    const ImpulseResponse rir = image_source_rir(scene.room_dims, scene.source_pos,
                                                 scene.mic_position(ch), absorption, order,
                                                 sample_rate);
    std::vector<double> full = dsp::fft_convolve(source_signal, rir.taps);
    full.resize(source_signal.size());  // keep the clip duration
    out.channels[ch] = std::move(full);
  }

  if (normalize) {
    double peak = 0.0;
    for (const auto& ch : out.channels)
      for (double v : ch) peak = std::max(peak, std::abs(v));
    if (peak > 0.0) {
      const double gain = 0.9 / peak;
      for (auto& ch : out.channels)
        for (double& v : ch) v *= gain;
    }
  }
  return out;
}

}  // namespace lightdoa::room
