#include "lightdoa/train.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "lightdoa/optim.hpp"
#include "lightdoa/rng.hpp"

namespace lightdoa::nn {

template <typename T>
void adam_step(std::vector<Parameter<T>*>& params, const AdamConfig& cfg) {
  for (Parameter<T>* p : params) {
    p->step_count += 1;
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(p->step_count));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(p->step_count));
    T* value = p->value.ptr();
    T* grad = p->grad.ptr();
    T* m = p->adam_m.ptr();
    T* v = p->adam_v.ptr();
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(p->value.numel());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const double g = grad[i];
      const double mi = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g;
      const double vi = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g * g;
      m[i] = static_cast<T>(mi);
      v[i] = static_cast<T>(vi);
      value[i] -= static_cast<T>(cfg.learning_rate * (mi / bc1) / (std::sqrt(vi / bc2) + cfg.epsilon));
    }
  }
}

namespace {

template <typename T>
void gather_batch(const LabeledDataset<T>& set, const std::vector<int>& order, int start,
                  int count, Tensor<T>& batch, std::vector<int>& labels) {
  const std::size_t sample_sz = set.features.numel() / set.size();
  batch = Tensor<T>({count, set.features.dim(1), set.features.dim(2), set.features.dim(3)});
  labels.resize(count);
  for (int i = 0; i < count; ++i) {
    const int src = order[start + i];
    std::memcpy(batch.ptr() + static_cast<std::size_t>(i) * sample_sz,
                set.features.ptr() + static_cast<std::size_t>(src) * sample_sz,
                sample_sz * sizeof(T));
    labels[i] = set.labels[src];
  }
}

void fisher_yates(std::vector<int>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i)
    std::swap(v[i - 1], v[rng.next_below(i)]);
}

}  // namespace

template <typename T>
double evaluate_accuracy(model::LightDoaModel<T>& m, const LabeledDataset<T>& set,
                         int batch_size) {
  if (set.size() == 0) throw std::invalid_argument("evaluate_accuracy: empty dataset");
  std::vector<int> order(set.size());
  for (int i = 0; i < set.size(); ++i) order[i] = i;

  long long correct = 0;
  Tensor<T> batch;
  std::vector<int> labels;
  for (int start = 0; start < set.size(); start += batch_size) {
    const int count = std::min(batch_size, set.size() - start);
    gather_batch(set, order, start, count, batch, labels);
    const Tensor<T> logits = m.forward(batch, Mode::Eval);
    const int K = logits.dim(1);
    for (int i = 0; i < count; ++i) {
      const T* row = logits.ptr() + static_cast<std::size_t>(i) * K;
      int argmax = 0;
      for (int k = 1; k < K; ++k)
        if (row[k] > row[argmax]) argmax = k;
      if (argmax == labels[i]) ++correct;
    }
  }
  return static_cast<double>(correct) / set.size();
}

template <typename T>
TrainHistory train(model::LightDoaModel<T>& m, const LabeledDataset<T>& train_set,
                   const LabeledDataset<T>& val_set, const TrainConfig& cfg) {
  if (train_set.size() == 0 || val_set.size() == 0)
    throw std::invalid_argument("train: datasets must be nonempty");
  if (cfg.batch_size <= 0 || cfg.max_epochs <= 0 || cfg.patience <= 0)
    throw std::invalid_argument("train: batch_size, max_epochs and patience must be positive");

  Rng shuffle_rng(cfg.seed);
  EarlyStopper stopper(cfg.patience);
  TrainHistory history;
  AdamConfig adam;
  adam.learning_rate = cfg.learning_rate;

  std::vector<Parameter<T>*> params = m.params();
  std::vector<int> order(train_set.size());
  for (int i = 0; i < train_set.size(); ++i) order[i] = i;

  model::LightDoaModel<T> best = m;

  Tensor<T> batch;
  std::vector<int> labels;
  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    fisher_yates(order, shuffle_rng);

    double loss_sum = 0.0;
    for (int start = 0; start < train_set.size(); start += cfg.batch_size) {
      const int count = std::min(cfg.batch_size, train_set.size() - start);
      gather_batch(train_set, order, start, count, batch, labels);

      for (Parameter<T>* p : params) p->zero_grad();
      const Tensor<T> logits = m.forward(batch, Mode::Train);
      auto [loss, probs] = cross_entropy(logits, labels);
      m.backward(cross_entropy_backward(probs, labels));
      adam_step(params, adam);
      loss_sum += loss * count;
    }

    const double val_acc = evaluate_accuracy(m, val_set, cfg.batch_size);
    history.epochs.push_back({epoch, loss_sum / train_set.size(), val_acc});

    const bool stop = stopper.observe(val_acc);
    if (stopper.improved()) {
      best = m;
      history.best_epoch = epoch;
      history.best_val_accuracy = val_acc;
    }
    if (stop) break;
  }

  m = best;
  return history;
}

#define LIGHTDOA_INSTANTIATE_TRAIN(T)                                                       \
  template void adam_step<T>(std::vector<Parameter<T>*>&, const AdamConfig&);               \
  template double evaluate_accuracy<T>(model::LightDoaModel<T>&, const LabeledDataset<T>&, \
                                       int);                                                \
  template TrainHistory train<T>(model::LightDoaModel<T>&, const LabeledDataset<T>&,       \
                                 const LabeledDataset<T>&, const TrainConfig&);

LIGHTDOA_INSTANTIATE_TRAIN(float)
LIGHTDOA_INSTANTIATE_TRAIN(double)

#undef LIGHTDOA_INSTANTIATE_TRAIN

}  // namespace lightdoa::nn
