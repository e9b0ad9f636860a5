#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace lightdoa {

// Mono or stereo audio, samples nominally in [-1, 1].
struct AudioBuffer {
  int sample_rate = 0;
  std::vector<std::vector<double>> channels;

  int num_channels() const { return static_cast<int>(channels.size()); }

  std::size_t num_samples() const {
    return channels.empty() ? 0 : channels.front().size();
  }

  double duration_seconds() const {
    return sample_rate > 0 ? static_cast<double>(num_samples()) / sample_rate : 0.0;
  }

  void validate() const {
    if (sample_rate <= 0) throw std::invalid_argument("AudioBuffer: sample_rate must be positive");
    if (channels.empty() || channels.size() > 2)
      throw std::invalid_argument("AudioBuffer: channel count must be 1 or 2");
    for (const auto& ch : channels)
      if (ch.size() != channels.front().size())
        throw std::invalid_argument("AudioBuffer: channels must have equal length");
  }
};

}  // namespace lightdoa
