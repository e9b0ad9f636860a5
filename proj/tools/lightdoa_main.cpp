// Command-line front end: dataset generation, training, evaluation, single
// file inference, and the classical GCC-PHAT estimator. Machine-readable JSON
// goes to stdout; progress lines go to stderr.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lightdoa/angles.hpp"
#include "lightdoa/checkpoint.hpp"
#include "lightdoa/classic.hpp"
#include "lightdoa/dataset.hpp"
#include "lightdoa/dsp.hpp"
#include "lightdoa/model.hpp"
#include "lightdoa/threads.hpp"
#include "lightdoa/train.hpp"
#include "lightdoa/wav.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;
using namespace lightdoa;

namespace {

dsp::StftConfig default_stft() { return dsp::StftConfig{}; }

struct EvalReport {
  int resolution_k = 0;
  double top1_accuracy = 0.0;
  double mean_abs_angular_error = 0.0;
  std::vector<double> per_class_accuracy;
  std::vector<std::vector<long long>> confusion;
  long long num_samples = 0;
};

EvalReport evaluate_split(model::LightDoaModel<float>& m, const data::DatasetSplit& split,
                          const fs::path& manifest_dir) {
  const angles::AngleGrid grid = m.grid();
  EvalReport report;
  report.resolution_k = m.num_classes();
  report.num_samples = static_cast<long long>(split.entries.size());
  report.confusion.assign(grid.num_classes, std::vector<long long>(grid.num_classes, 0));

  double abs_err_sum = 0.0;
  long long correct = 0;
  for (const auto& entry : split.entries) {
    const AudioBuffer audio = data::read_wav(manifest_dir / entry.wav_path);
    const dsp::IpdMatrix feature = dsp::ipd_feature(audio, default_stft());
    const std::vector<double> probs = m.predict_probabilities(feature);

    int argmax = 0;
    for (int k = 1; k < grid.num_classes; ++k)
      if (probs[k] > probs[argmax]) argmax = k;
    const int label = angles::angle_to_class(entry.azimuth_folded, grid);

    report.confusion[label][argmax] += 1;
    if (argmax == label) ++correct;
    abs_err_sum += std::abs(angles::expected_angle(probs, grid) - entry.azimuth_folded);
  }

  report.top1_accuracy =
      report.num_samples > 0 ? static_cast<double>(correct) / report.num_samples : 0.0;
  report.mean_abs_angular_error = report.num_samples > 0 ? abs_err_sum / report.num_samples : 0.0;
  report.per_class_accuracy.assign(grid.num_classes, 0.0);
  for (int k = 0; k < grid.num_classes; ++k) {
    long long row = 0;
    for (long long v : report.confusion[k]) row += v;
    report.per_class_accuracy[k] = row > 0 ? static_cast<double>(report.confusion[k][k]) / row : 0.0;
  }
  return report;
}

ordered_json histogram_json(const data::ClassHistogram& h) {
  ordered_json j;
  j["counts"] = h.counts;
  if (h.imbalance_ratio)
    j["imbalance_ratio"] = *h.imbalance_ratio;
  else
    j["imbalance_ratio"] = nullptr;
  return j;
}

int cmd_generate(const fs::path& out_dir, int train_n, int val_n, int test_n,
                 std::uint64_t seed, const std::string& mixture_spec, double duration) {
  data::GenConfig config;
  config.train_count = train_n;
  config.val_count = val_n;
  config.test_count = test_n;
  config.duration = duration;
  config.mixture = data::parse_mixture_spec(mixture_spec);

  data::generate_dataset(config, seed, out_dir);

  const angles::AngleGrid grid = angles::AngleGrid::from_k(37);
  ordered_json report;
  report["out_dir"] = out_dir.string();
  report["seed"] = seed;
  report["duration"] = duration;
  for (const char* name : {"train", "val", "test"}) {
    const data::DatasetSplit split = data::load_split(out_dir / (std::string(name) + ".jsonl"));
    ordered_json s;
    s["count"] = split.entries.size();
    s["histogram_k37"] = histogram_json(data::class_histogram(split, grid));
    report[name] = s;
  }
  std::cout << report.dump(2) << std::endl;
  return 0;
}

int cmd_train(const fs::path& data_dir, int k, const fs::path& out_ckpt, double lr, int batch,
              int epochs, int patience, std::uint64_t seed) {
  const angles::AngleGrid grid = angles::AngleGrid::from_k(k);

  std::cerr << "loading features..." << std::endl;
  const data::DatasetSplit train_split = data::load_split(data_dir / "train.jsonl");
  const data::DatasetSplit val_split = data::load_split(data_dir / "val.jsonl");
  const auto train_set =
      data::load_feature_dataset<float>(train_split, data_dir, default_stft(), grid);
  const auto val_set = data::load_feature_dataset<float>(val_split, data_dir, default_stft(), grid);

  auto m = model::build_lightdoa<float>(k, child_seed(seed, 0));
  nn::TrainConfig cfg;
  cfg.learning_rate = lr;
  cfg.batch_size = batch;
  cfg.max_epochs = epochs;
  cfg.patience = patience;
  cfg.seed = child_seed(seed, 1);

  std::cerr << "training k=" << k << " on " << train_set.size() << " samples..." << std::endl;
  const nn::TrainHistory history = nn::train(m, train_set, val_set, cfg);

  Rng rng(cfg.seed);
  model::save_checkpoint(m, rng.serialize(), out_ckpt);

  ordered_json hist_json;
  hist_json["best_epoch"] = history.best_epoch;
  hist_json["best_val_accuracy"] = history.best_val_accuracy;
  hist_json["epochs"] = ordered_json::array();
  for (const auto& e : history.epochs) {
    ordered_json row;
    row["epoch"] = e.epoch;
    row["train_loss"] = e.train_loss;
    row["val_accuracy"] = e.val_accuracy;
    hist_json["epochs"].push_back(row);
  }
  const fs::path history_path = out_ckpt.string() + ".history.json";
  std::ofstream hist_os(history_path);
  hist_os << hist_json.dump(2) << std::endl;

  ordered_json report;
  report["k"] = k;
  report["param_count"] = m.param_count();
  report["epochs_run"] = history.epochs.size();
  report["best_epoch"] = history.best_epoch;
  report["best_val_accuracy"] = history.best_val_accuracy;
  report["checkpoint"] = out_ckpt.string();
  report["history"] = history_path.string();
  std::cout << report.dump(2) << std::endl;
  return 0;
}

int cmd_eval(const fs::path& data_dir, const std::string& split_name, const fs::path& ckpt,
             int requested_k) {
  if (requested_k > 0 && model::peek_checkpoint_k(ckpt) != requested_k)
    throw std::runtime_error("eval: checkpoint resolution does not match --k");

  auto loaded = model::load_checkpoint<float>(ckpt);
  const data::DatasetSplit split = data::load_split(data_dir / (split_name + ".jsonl"));
  const EvalReport report = evaluate_split(loaded.model, split, data_dir);

  ordered_json j;
  j["resolution_k"] = report.resolution_k;
  j["split"] = split_name;
  j["num_samples"] = report.num_samples;
  j["top1_accuracy"] = report.top1_accuracy;
  j["mean_abs_angular_error"] = report.mean_abs_angular_error;
  j["per_class_accuracy"] = report.per_class_accuracy;
  j["confusion"] = report.confusion;
  std::cout << j.dump(2) << std::endl;
  return 0;
}

int cmd_infer(const fs::path& ckpt, const fs::path& wav) {
  auto loaded = model::load_checkpoint<float>(ckpt);
  const AudioBuffer audio = data::read_wav(wav);
  const dsp::IpdMatrix feature = dsp::ipd_feature(audio, default_stft());
  const std::vector<double> probs = loaded.model.predict_probabilities(feature);
  const angles::AngleGrid grid = loaded.model.grid();

  int argmax = 0;
  for (int k = 1; k < grid.num_classes; ++k)
    if (probs[k] > probs[argmax]) argmax = k;

  ordered_json j;
  j["wav"] = wav.string();
  j["resolution_k"] = grid.num_classes;
  j["predicted_angle_deg"] = angles::expected_angle(probs, grid);
  j["predicted_class"] = argmax;
  j["class_angle_deg"] = angles::class_to_angle(argmax, grid);
  j["probabilities"] = probs;
  std::cout << j.dump(2) << std::endl;
  return 0;
}

int cmd_classical(const fs::path& wav, double spacing) {
  const AudioBuffer audio = data::read_wav(wav);
  const double max_tau = spacing / 343.0 + 2.5e-4;
  const classic::TdoaEstimate est =
      classic::gcc_phat(audio.channels[0], audio.channels[1], audio.sample_rate, max_tau);

  ordered_json j;
  j["wav"] = wav.string();
  j["spacing_m"] = spacing;
  j["tau_seconds"] = est.tau;
  j["peak_value"] = est.peak_value;
  j["azimuth_deg"] = classic::tdoa_to_azimuth(est.tau, spacing);
  std::cout << j.dump(2) << std::endl;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  configure_threads_from_env();

  CLI::App app{"LightDOA: stereo scene synthesis and azimuth DOA estimation"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Render a synthetic stereo dataset");
  std::string gen_out;
  int gen_train = 0, gen_val = 0, gen_test = 0;
  std::uint64_t gen_seed = 0;
  std::string gen_mixture;
  double gen_duration = 4.0;
  gen->add_option("--out", gen_out, "Output directory")->required();
  gen->add_option("--train", gen_train, "Training scene count")->required();
  gen->add_option("--val", gen_val, "Validation scene count")->required();
  gen->add_option("--test", gen_test, "Test scene count")->required();
  gen->add_option("--seed", gen_seed, "Master seed")->default_val(0);
  gen->add_option("--mixture", gen_mixture,
                  "Attribute weights, e.g. 'room=outdoors:1,small:1;direction=front:2'");
  gen->add_option("--duration", gen_duration, "Clip duration in seconds")->default_val(4.0);

  // train
  auto* tr = app.add_subcommand("train", "Train LightDOA on a generated dataset");
  std::string tr_data, tr_out;
  int tr_k = 37, tr_batch = 256, tr_epochs = 150, tr_patience = 10;
  double tr_lr = 5e-3;
  std::uint64_t tr_seed = 0;
  tr->add_option("--data", tr_data, "Dataset directory")->required();
  tr->add_option("--k", tr_k, "Angular classes (9, 13, 19, or 37)")
      ->required()
      ->check(CLI::IsMember({9, 13, 19, 37}));
  tr->add_option("--out", tr_out, "Checkpoint output path")->required();
  tr->add_option("--lr", tr_lr, "Learning rate")->default_val(5e-3);
  tr->add_option("--batch", tr_batch, "Batch size")->default_val(256);
  tr->add_option("--epochs", tr_epochs, "Maximum epochs")->default_val(150);
  tr->add_option("--patience", tr_patience, "Early-stopping patience")->default_val(10);
  tr->add_option("--seed", tr_seed, "Seed for init and shuffling")->default_val(0);

  // eval
  auto* ev = app.add_subcommand("eval", "Evaluate a checkpoint on a split");
  std::string ev_data, ev_split = "test", ev_ckpt;
  int ev_k = 0;
  ev->add_option("--data", ev_data, "Dataset directory")->required();
  ev->add_option("--split", ev_split, "Split name")->check(CLI::IsMember({"train", "val", "test"}));
  ev->add_option("--ckpt", ev_ckpt, "Checkpoint path")->required();
  ev->add_option("--k", ev_k, "Assert the checkpoint resolution matches");

  // infer
  auto* in = app.add_subcommand("infer", "Predict the azimuth of one stereo WAV");
  std::string in_ckpt, in_wav;
  in->add_option("--ckpt", in_ckpt, "Checkpoint path")->required();
  in->add_option("--wav", in_wav, "Stereo WAV file")->required();

  // classical
  auto* cl = app.add_subcommand("classical", "GCC-PHAT azimuth estimate for one stereo WAV");
  std::string cl_wav;
  double cl_spacing = 0.17;
  cl->add_option("--wav", cl_wav, "Stereo WAV file")->required();
  cl->add_option("--spacing", cl_spacing, "Microphone spacing in meters")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (gen->parsed())
      return cmd_generate(gen_out, gen_train, gen_val, gen_test, gen_seed, gen_mixture,
                          gen_duration);
    if (tr->parsed())
      return cmd_train(tr_data, tr_k, tr_out, tr_lr, tr_batch, tr_epochs, tr_patience, tr_seed);
    if (ev->parsed()) return cmd_eval(ev_data, ev_split, ev_ckpt, ev_k);
    if (in->parsed()) return cmd_infer(in_ckpt, in_wav);
    if (cl->parsed()) return cmd_classical(cl_wav, cl_spacing);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return 2;
}
