#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lightdoa::data {

// Synthetic mono source material. Every kind is deterministic given
// (seed, duration, sample_rate) and is returned at unit RMS.
enum class SourceSignalKind { WhiteNoise, PinkNoise, Chirp, AmplitudeModulatedNoise, MultiTone };

const char* to_string(SourceSignalKind k);
SourceSignalKind source_kind_from_string(const std::string& s);

std::vector<double> generate_source_signal(SourceSignalKind kind, std::uint64_t seed,
                                           double duration_seconds, int sample_rate);

}  // namespace lightdoa::data
