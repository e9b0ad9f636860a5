#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lightdoa/angles.hpp"
#include "lightdoa/dsp.hpp"
#include "lightdoa/room.hpp"
#include "lightdoa/signals.hpp"
#include "lightdoa/train.hpp"

namespace lightdoa::data {

struct SceneSummary {
  std::string room_class;
  std::string direction_class;
  std::string distance_class;
  std::array<double, 3> room_dims{};
  double rt60 = 0.0;
  double mic_spacing = 0.0;
  double distance = 0.0;
};

struct ManifestEntry {
  std::string id;
  std::string wav_path;  // relative to the manifest's directory
  double azimuth_raw = 0.0;
  double azimuth_folded = 0.0;
  SceneSummary scene;
  std::string source_kind;
  double duration = 0.0;
  int sample_rate = 0;
};

enum class SplitName { Train, Val, Test };
const char* to_string(SplitName s);
SplitName split_from_string(const std::string& s);

struct DatasetSplit {
  SplitName name = SplitName::Train;
  std::vector<ManifestEntry> entries;
};

// Sampling weights over the scene attribute enums; missing groups stay
// uniform. Order matches the enum declarations.
struct Mixture {
  std::vector<double> room_weights{1, 1, 1, 1};
  std::vector<double> direction_weights{1, 1, 1, 1, 1};
  std::vector<double> distance_weights{1, 1, 1};
  std::vector<double> source_weights{1, 1, 1, 1, 1};
};

// "room=outdoors:2,small:1;direction=front:3,left:1;distance=near:1;source=white_noise:1"
Mixture parse_mixture_spec(const std::string& spec);

struct GenConfig {
  int train_count = 0;
  int val_count = 0;
  int test_count = 0;
  double duration = 4.0;
  int sample_rate = 16000;
  int max_order = 30;
  Mixture mixture;
};

// Renders one WAV per scene under out_dir/wav plus one line-delimited JSON
// manifest per split. Deterministic for a fixed master seed regardless of
// thread count: every scene derives its own child seed from its global index.
// Direction classes are stratified within each split via largest-remainder
// quotas on the mixture weights. Partial output is removed on failure.
void generate_dataset(const GenConfig& config, std::uint64_t master_seed,
                      const std::filesystem::path& out_dir);

DatasetSplit load_split(const std::filesystem::path& manifest_path);

struct ClassHistogram {
  std::vector<long long> counts;
  // max/min over nonzero bins; empty split reports no ratio
  std::optional<double> imbalance_ratio;
};

ClassHistogram class_histogram(const DatasetSplit& split, const angles::AngleGrid& grid);
ClassHistogram histogram_folded_labels(const std::vector<double>& folded_deg,
                                       const angles::AngleGrid& grid);

// Loads every referenced WAV, extracts the IPD feature, and stacks the split
// into a (N,1,F,T) tensor with class labels from the folded azimuth. All
// clips must produce the same feature shape.
template <typename T>
nn::LabeledDataset<T> load_feature_dataset(const DatasetSplit& split,
                                           const std::filesystem::path& manifest_dir,
                                           const dsp::StftConfig& stft_config,
                                           const angles::AngleGrid& grid);

}  // namespace lightdoa::data
