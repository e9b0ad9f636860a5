#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "lightdoa/audio.hpp"
#include "lightdoa/rng.hpp"

namespace lightdoa::room {

enum class RoomClass { Outdoors, Large, Moderate, Small };
enum class DirectionClass { Left, FrontLeft, Front, FrontRight, Right };
enum class DistanceClass { Far, Moderate, Near };

const char* to_string(RoomClass c);
const char* to_string(DirectionClass c);
const char* to_string(DistanceClass c);
RoomClass room_class_from_string(const std::string& s);
DirectionClass direction_class_from_string(const std::string& s);
DistanceClass distance_class_from_string(const std::string& s);

struct SceneClassConfig {
  RoomClass room = RoomClass::Outdoors;
  DirectionClass direction = DirectionClass::Front;
  DistanceClass distance = DistanceClass::Moderate;
};

// Mean azimuth of a direction class, degrees.
double direction_center_deg(DirectionClass c);

struct SceneSpec {
  RoomClass room_class = RoomClass::Outdoors;
  DirectionClass direction_class = DirectionClass::Front;
  DistanceClass distance_class = DistanceClass::Moderate;

  std::array<double, 3> room_dims{};   // meters
  std::array<double, 3> mic_center{};  // meters
  std::array<double, 3> source_pos{};  // meters
  double base_size = 0.0;              // r, meters
  double mic_spacing = 0.0;            // s, meters
  double azimuth_deg = 0.0;            // raw sampled theta
  double distance = 0.0;               // d, meters
  double distance_ratio = 0.0;         // alpha_d
  double rt60 = 0.0;                   // seconds; 0 = free field

  // Microphones sit on the second axis at mic_center[1] +/- spacing/2;
  // channel 0 is the +spacing/2 microphone.
  std::array<double, 3> mic_position(int channel) const;
};

struct SceneSamplingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Draws a scene per the class-conditioned laws; resamples (up to 100 times)
// when the source leaves the room or lands within the mic spacing.
SceneSpec sample_scene(Rng& rng, const SceneClassConfig& config);

// Inverse Sabine: 0.161 V / (S * rt60), clamped to (0, 0.9999].
double rt60_to_absorption(const std::array<double, 3>& room_dims, double rt60);

// Wall absorption calibrated against the image-source model itself: the
// image set is enumerated once into an (arrival-time, reflection-count)
// energy table and the absorption is bisected until the backward-integrated
// decay crosses -60 dB at the requested rt60. Closed-form inversions (Sabine,
// Eyring) assume a diffuse field and miss the slow axial image families, so
// their realized decay can be off by 30% or more over the room classes used
// here.
double calibrate_absorption(const std::array<double, 3>& room_dims,
                            const std::array<double, 3>& source,
                            const std::array<double, 3>& mic, double rt60, int max_order);

// Reflection order needed for the decay tail to reach -60 dB before
// truncation, clamped to [floor_order, cap].
int suggested_max_order(const std::array<double, 3>& room_dims, double rt60,
                        int floor_order = 30, int cap = 120);

struct ImpulseResponse {
  std::vector<double> taps;
  int sample_rate = 0;
};

inline constexpr double kSpeedOfSound = 343.0;  // m/s

// Image-source RIR with uniform wall absorption. Each image of reflection
// count n contributes (1-a)^(n/2) / (4 pi r) at delay r/c, spread with an
// 8-tap Hann-windowed sinc.
ImpulseResponse image_source_rir(const std::array<double, 3>& room_dims,
                                 const std::array<double, 3>& source,
                                 const std::array<double, 3>& mic, double absorption,
                                 int max_order, int sample_rate);

// Convolves the mono source with the per-microphone RIRs. rt60 = 0 renders
// the direct path only. Output is trimmed to the source length and jointly
// peak-normalized to 0.9 (skipped for all-zero output).
AudioBuffer render_stereo(const std::vector<double>& source_signal, const SceneSpec& scene,
                          int max_order, int sample_rate, bool normalize = true);

}  // namespace lightdoa::room
