#pragma once

#include <filesystem>
#include <string>

#include "lightdoa/model.hpp"

namespace lightdoa::model {

// Checkpoint container, all integers little-endian:
//
//   offset  field
//   0       magic, 8 bytes: "LDOACKPT"
//   8       version, u8 (currently 1)
//   9       dtype, u8: bytes per scalar (4 = float32, 8 = float64)
//   10      k, u32: output classes
//   14      parameter count, u32
//           per parameter, in model order:
//             name: u32 length + bytes
//             ndim: u32, then i32 per dimension
//             step_count: u64 (Adam step counter)
//             value, adam_m, adam_v: numel * dtype bytes each
//           buffer count, u32 (batch-norm running statistics)
//           per buffer: name, ndim + dims, data (numel * dtype)
//           rng_state: u32 length + bytes (text-serialized training RNG)
//
// A checkpoint saved from either scalar width loads into either width; values
// are converted on read.

inline constexpr char kCheckpointMagic[8] = {'L', 'D', 'O', 'A', 'C', 'K', 'P', 'T'};
inline constexpr unsigned char kCheckpointVersion = 1;

template <typename T>
void save_checkpoint(LightDoaModel<T>& m, const std::string& rng_state,
                     const std::filesystem::path& path);

template <typename T>
struct LoadedCheckpoint {
  LightDoaModel<T> model;
  std::string rng_state;
};

template <typename T>
LoadedCheckpoint<T> load_checkpoint(const std::filesystem::path& path);

// Reads only the header and returns K; cheap config check.
int peek_checkpoint_k(const std::filesystem::path& path);

}  // namespace lightdoa::model
