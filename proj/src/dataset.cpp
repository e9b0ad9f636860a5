#include "lightdoa/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "lightdoa/wav.hpp"

namespace lightdoa::data {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

const char* to_string(SplitName s) {
  switch (s) {
    case SplitName::Train: return "train";
    case SplitName::Val: return "val";
    case SplitName::Test: return "test";
  }
  return "?";
}

SplitName split_from_string(const std::string& s) {
  if (s == "train") return SplitName::Train;
  if (s == "val") return SplitName::Val;
  if (s == "test") return SplitName::Test;
  throw std::invalid_argument("unknown split name: " + s);
}

namespace {

int pick_weighted(Rng& rng, const std::vector<double>& weights) {
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw std::invalid_argument("mixture weights must be nonnegative");
    total += w;
  }
  if (total <= 0.0) throw std::invalid_argument("mixture weights sum to zero");
  double u = rng.uniform01() * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    u -= weights[i];
    if (u < 0.0) return static_cast<int>(i);
  }
  return static_cast<int>(weights.size()) - 1;
}

// Largest-remainder apportionment of n slots over the weights.
std::vector<int> quotas(int n, const std::vector<double>& weights) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (total <= 0.0) throw std::invalid_argument("mixture weights sum to zero");
  std::vector<int> out(weights.size(), 0);
  std::vector<std::pair<double, std::size_t>> rema;
  int assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double share = n * weights[i] / total;
    out[i] = static_cast<int>(std::floor(share));
    assigned += out[i];
    rema.emplace_back(share - out[i], i);
  }
  std::stable_sort(rema.begin(), rema.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (int i = 0; i < n - assigned; ++i) out[rema[static_cast<std::size_t>(i)].second] += 1;
  return out;
}

ordered_json entry_to_json(const ManifestEntry& e) {
  ordered_json j;
  j["id"] = e.id;
  j["wav_path"] = e.wav_path;
  j["azimuth_raw"] = e.azimuth_raw;
  j["azimuth_folded"] = e.azimuth_folded;
  ordered_json scene;
  scene["room_class"] = e.scene.room_class;
  scene["direction_class"] = e.scene.direction_class;
  scene["distance_class"] = e.scene.distance_class;
  scene["room_dims"] = e.scene.room_dims;
  scene["rt60"] = e.scene.rt60;
  scene["mic_spacing"] = e.scene.mic_spacing;
  scene["distance"] = e.scene.distance;
  j["scene"] = scene;
  j["source_kind"] = e.source_kind;
  j["duration"] = e.duration;
  j["sample_rate"] = e.sample_rate;
  return j;
}

ManifestEntry entry_from_json(const ordered_json& j) {
  ManifestEntry e;
  e.id = j.at("id").get<std::string>();
  e.wav_path = j.at("wav_path").get<std::string>();
  e.azimuth_raw = j.at("azimuth_raw").get<double>();
  e.azimuth_folded = j.at("azimuth_folded").get<double>();
  const auto& scene = j.at("scene");
  e.scene.room_class = scene.at("room_class").get<std::string>();
  e.scene.direction_class = scene.at("direction_class").get<std::string>();
  e.scene.distance_class = scene.at("distance_class").get<std::string>();
  const auto dims = scene.at("room_dims");
  for (int i = 0; i < 3; ++i) e.scene.room_dims[static_cast<std::size_t>(i)] = dims.at(i).get<double>();
  e.scene.rt60 = scene.at("rt60").get<double>();
  e.scene.mic_spacing = scene.at("mic_spacing").get<double>();
  e.scene.distance = scene.at("distance").get<double>();
  e.source_kind = j.at("source_kind").get<std::string>();
  e.duration = j.at("duration").get<double>();
  e.sample_rate = j.at("sample_rate").get<int>();
  return e;
}

struct SceneTask {
  SplitName split = SplitName::Train;
  int index_in_split = 0;
  room::DirectionClass direction = room::DirectionClass::Front;
};

}  // namespace

Mixture parse_mixture_spec(const std::string& spec) {
  Mixture mix;
  if (spec.empty()) return mix;

  std::stringstream groups(spec);
  std::string group;
  while (std::getline(groups, group, ';')) {
    if (group.empty()) continue;
    const auto eq = group.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("mixture: expected '<attribute>=<name>:<weight>,...' in '" + group + "'");
    const std::string key = group.substr(0, eq);

    std::vector<double>* target = nullptr;
    std::size_t count = 0;
    if (key == "room") {
      target = &mix.room_weights;
      count = 4;
    } else if (key == "direction") {
      target = &mix.direction_weights;
      count = 5;
    } else if (key == "distance") {
      target = &mix.distance_weights;
      count = 3;
    } else if (key == "source") {
      target = &mix.source_weights;
      count = 5;
    } else {
      throw std::invalid_argument("mixture: unknown attribute '" + key + "'");
    }

    target->assign(count, 0.0);
    std::stringstream items(group.substr(eq + 1));
    std::string item;
    while (std::getline(items, item, ',')) {
      const auto colon = item.find(':');
      if (colon == std::string::npos)
        throw std::invalid_argument("mixture: expected '<name>:<weight>' in '" + item + "'");
      const std::string name = item.substr(0, colon);
      const double w = std::stod(item.substr(colon + 1));
      if (w < 0.0) throw std::invalid_argument("mixture: negative weight for " + name);
      std::size_t idx = 0;
      if (key == "room") idx = static_cast<std::size_t>(room::room_class_from_string(name));
      else if (key == "direction") idx = static_cast<std::size_t>(room::direction_class_from_string(name));
      else if (key == "distance") idx = static_cast<std::size_t>(room::distance_class_from_string(name));
      else idx = static_cast<std::size_t>(source_kind_from_string(name));
      (*target)[idx] = w;
    }
  }
  return mix;
}

void generate_dataset(const GenConfig& config, std::uint64_t master_seed,
                      const fs::path& out_dir) {
  if (config.train_count < 0 || config.val_count < 0 || config.test_count < 0)
    throw std::invalid_argument("generate_dataset: negative split count");
  if (config.duration <= 0.0) throw std::invalid_argument("generate_dataset: bad duration");

  const bool created_root = !fs::exists(out_dir);
  fs::create_directories(out_dir);
  const fs::path wav_dir = out_dir / "wav";
  const bool created_wav_dir = !fs::exists(wav_dir);
  fs::create_directories(wav_dir);

  std::vector<fs::path> created_files;
  auto cleanup = [&]() {
    std::error_code ec;
    for (const auto& p : created_files) fs::remove(p, ec);
    if (created_wav_dir) fs::remove(wav_dir, ec);
    if (created_root) fs::remove_all(out_dir, ec);
  };

  try {
    // Build the deterministic task list: per split, direction quotas first.
    const std::array<std::pair<SplitName, int>, 3> split_counts{
        {{SplitName::Train, config.train_count},
         {SplitName::Val, config.val_count},
         {SplitName::Test, config.test_count}}};

    std::vector<SceneTask> tasks;
    for (const auto& [split, count] : split_counts) {
      const std::vector<int> q = quotas(count, config.mixture.direction_weights);
      int idx = 0;
      for (std::size_t d = 0; d < q.size(); ++d)
        for (int i = 0; i < q[d]; ++i)
          tasks.push_back({split, idx++, static_cast<room::DirectionClass>(d)});
    }

    std::vector<ManifestEntry> entries(tasks.size());
    std::exception_ptr first_error = nullptr;
    std::mutex error_mutex;
    bool failed = false;

#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t g = 0; g < static_cast<std::ptrdiff_t>(tasks.size()); ++g) {
      bool skip;
#pragma omp atomic read
      skip = failed;
      if (skip) continue;
      try {
        const SceneTask& task = tasks[static_cast<std::size_t>(g)];
        Rng rng(child_seed(master_seed, static_cast<std::uint64_t>(g)));

        room::SceneClassConfig scene_cfg;
        scene_cfg.room = static_cast<room::RoomClass>(pick_weighted(rng, config.mixture.room_weights));
        scene_cfg.direction = task.direction;
        scene_cfg.distance =
            static_cast<room::DistanceClass>(pick_weighted(rng, config.mixture.distance_weights));
        const auto kind =
            static_cast<SourceSignalKind>(pick_weighted(rng, config.mixture.source_weights));

        const room::SceneSpec scene = room::sample_scene(rng, scene_cfg);
        const std::vector<double> signal =
            generate_source_signal(kind, rng.next_u64(), config.duration, config.sample_rate);
        const AudioBuffer audio =
            room::render_stereo(signal, scene, config.max_order, config.sample_rate);

        char id[32];
        std::snprintf(id, sizeof(id), "%s-%06d", to_string(task.split), task.index_in_split);

        ManifestEntry e;
        e.id = id;
        e.wav_path = std::string("wav/") + id + ".wav";
        e.azimuth_raw = scene.azimuth_deg;
        e.azimuth_folded = angles::fold_front_back(angles::normalize_angle(scene.azimuth_deg));
        e.scene.room_class = room::to_string(scene.room_class);
        e.scene.direction_class = room::to_string(scene.direction_class);
        e.scene.distance_class = room::to_string(scene.distance_class);
        e.scene.room_dims = scene.room_dims;
        e.scene.rt60 = scene.rt60;
        e.scene.mic_spacing = scene.mic_spacing;
        e.scene.distance = scene.distance;
        e.source_kind = to_string(kind);
        e.duration = config.duration;
        e.sample_rate = config.sample_rate;

        const fs::path wav_path = out_dir / e.wav_path;
        write_wav(wav_path, audio);
#pragma omp critical(lightdoa_dataset_files)
        created_files.push_back(wav_path);

        entries[static_cast<std::size_t>(g)] = std::move(e);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
#pragma omp atomic write
        failed = true;
      }
    }

    if (first_error) std::rethrow_exception(first_error);

    // Manifests assembled in scene-index order, one file per split.
    for (const auto& [split, count] : split_counts) {
      (void)count;
      const fs::path manifest_path = out_dir / (std::string(to_string(split)) + ".jsonl");
      std::ofstream os(manifest_path, std::ios::trunc);
      if (!os) throw std::runtime_error("generate_dataset: cannot write " + manifest_path.string());
      created_files.push_back(manifest_path);
      for (const auto& e : entries) {
        if (e.id.rfind(to_string(split), 0) == 0)
          os << entry_to_json(e).dump() << '\n';
      }
      if (!os) throw std::runtime_error("generate_dataset: write failure " + manifest_path.string());
    }
  } catch (...) {
    cleanup();
    throw;
  }
}

DatasetSplit load_split(const fs::path& manifest_path) {
  std::ifstream is(manifest_path);
  if (!is) throw std::runtime_error("load_split: cannot open " + manifest_path.string());

  DatasetSplit split;
  split.name = split_from_string(manifest_path.stem().string());
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      split.entries.push_back(entry_from_json(ordered_json::parse(line)));
    } catch (const std::exception& e) {
      throw std::runtime_error("load_split: " + manifest_path.string() + ":" +
                               std::to_string(line_no) + ": " + e.what());
    }
  }
  return split;
}

ClassHistogram histogram_folded_labels(const std::vector<double>& folded_deg,
                                       const angles::AngleGrid& grid) {
  ClassHistogram h;
  h.counts.assign(static_cast<std::size_t>(grid.num_classes), 0);
  for (double a : folded_deg) h.counts[static_cast<std::size_t>(angles::angle_to_class(a, grid))] += 1;

  long long mx = 0;
  long long mn = 0;
  for (long long c : h.counts) {
    mx = std::max(mx, c);
    if (c > 0) mn = (mn == 0) ? c : std::min(mn, c);
  }
  if (mx > 0 && mn > 0) h.imbalance_ratio = static_cast<double>(mx) / static_cast<double>(mn);
  return h;
}

ClassHistogram class_histogram(const DatasetSplit& split, const angles::AngleGrid& grid) {
  std::vector<double> folded;
  folded.reserve(split.entries.size());
  for (const auto& e : split.entries) folded.push_back(e.azimuth_folded);
  return histogram_folded_labels(folded, grid);
}

template <typename T>
nn::LabeledDataset<T> load_feature_dataset(const DatasetSplit& split,
                                           const fs::path& manifest_dir,
                                           const dsp::StftConfig& stft_config,
                                           const angles::AngleGrid& grid) {
  const int n = static_cast<int>(split.entries.size());
  if (n == 0) throw std::invalid_argument("load_feature_dataset: empty split");

  // Probe the first clip for the feature shape.
  const dsp::IpdMatrix probe =
      dsp::ipd_feature(read_wav(manifest_dir / split.entries[0].wav_path), stft_config);
  const int F = probe.freq_bins, Tt = probe.frames;

  nn::LabeledDataset<T> out;
  out.features = nn::Tensor<T>({n, 1, F, Tt});
  out.labels.assign(static_cast<std::size_t>(n), 0);
  const std::size_t sample_sz = static_cast<std::size_t>(F) * Tt;

  std::exception_ptr first_error = nullptr;
  std::mutex error_mutex;

#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    try {
      const ManifestEntry& e = split.entries[static_cast<std::size_t>(i)];
      const dsp::IpdMatrix feat =
          dsp::ipd_feature(read_wav(manifest_dir / e.wav_path), stft_config);
      if (feat.freq_bins != F || feat.frames != Tt)
        throw std::invalid_argument("load_feature_dataset: feature shape mismatch for " + e.id);
      T* dst = out.features.ptr() + static_cast<std::size_t>(i) * sample_sz;
      for (int f = 0; f < F; ++f)
        for (int t = 0; t < Tt; ++t)
          dst[static_cast<std::size_t>(f) * Tt + t] = static_cast<T>(feat.at(f, t));
      out.labels[static_cast<std::size_t>(i)] = angles::angle_to_class(e.azimuth_folded, grid);
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  }
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

template nn::LabeledDataset<float> load_feature_dataset<float>(const DatasetSplit&,
                                                               const fs::path&,
                                                               const dsp::StftConfig&,
                                                               const angles::AngleGrid&);
template nn::LabeledDataset<double> load_feature_dataset<double>(const DatasetSplit&,
                                                                 const fs::path&,
                                                                 const dsp::StftConfig&,
                                                                 const angles::AngleGrid&);

}  // namespace lightdoa::data
