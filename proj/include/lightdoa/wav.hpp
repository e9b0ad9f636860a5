#pragma once

#include <filesystem>
#include <stdexcept>

#include "lightdoa/audio.hpp"

namespace lightdoa::data {

struct WavFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// RIFF/WAVE, PCM format code 1, 16-bit little-endian, 2 channels only.
// Anything else is rejected with WavFormatError.
AudioBuffer read_wav(const std::filesystem::path& path);
void write_wav(const std::filesystem::path& path, const AudioBuffer& buffer);

}  // namespace lightdoa::data
