#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "encdec/parser.hpp"

namespace encdec {

// L = -sum_j log p(gold_j) + (l2/2) * ||theta||^2 over trainable blocks.
// Gradients are added into `grads` when given.
template <typename T>
T SentenceLoss(const Model<T>& model, const Example& ex, double l2, ParamSet<T>* grads) {
  Tape<T> tape;
  T loss = model.ForwardTeacherForced(ex.input, ex.actions, ex.boundaries, grads ? &tape : nullptr);
  if (grads) model.Backward(tape, *grads);
  if (l2 > 0) {
    const auto& ps = model.params().entries();
    T sq = T(0);
    for (std::size_t k = 0; k < ps.size(); ++k) {
      if (!ps[k].trainable) continue;
      const auto& v = ps[k].tensor.values();
      for (T x : v) sq += x * x;
      if (grads) {
        auto& g = grads->entries()[k].tensor.values();
        for (std::size_t i = 0; i < v.size(); ++i) g[i] += static_cast<T>(l2) * v[i];
      }
    }
    loss += static_cast<T>(l2 / 2) * sq;
  }
  return loss;
}

struct AdamState {
  ParamSet<float> m, v;
  std::int64_t t = 0;
};

AdamState MakeAdamState(const ParamSet<float>& params);

// One bias-corrected Adam update; non-trainable blocks are left alone.
// Throws ContractViolation on layout mismatch.
void AdamStep(ParamSet<float>& params, const ParamSet<float>& grads, AdamState& state, const TrainConfig& config);

// Global L2 norm over trainable blocks.
double GradientNorm(const ParamSet<float>& grads);
// Rescales trainable gradients so their global norm is at most `max_norm`;
// returns the norm before clipping.
double ClipGradients(ParamSet<float>& grads, double max_norm);

struct DevMetrics {
  double loss = 0.0;             // teacher-forced, without the L2 term
  double action_accuracy = 0.0;  // teacher-forced argmax, percent
  double structure = 0.0;        // UAS or bracket F1 of greedy parses
  long scored = 0;               // sentences with a derivable gold sequence

  bool operator==(const DevMetrics&) const = default;
};

// Teacher-forced loss/accuracy over derivable sentences, greedy parse
// metric over all sentences.
DevMetrics Evaluate(const Parser& parser, const Treebank& dev);
// Teacher-forced metrics only.
DevMetrics EvaluateTeacherForced(const Parser& parser, const std::vector<Example>& examples);

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  DevMetrics dev;
  double seconds = 0.0;
};

struct TrainReport {
  std::vector<EpochRecord> epochs;
  int best_epoch = 0;  // 0 = the initial parameters
  long skipped = 0;    // training sentences without a derivable gold sequence
};

// Everything but wall-clock time agrees.
bool SameTrajectory(const TrainReport& a, const TrainReport& b);

struct TrainResult {
  Parser parser;  // best-on-dev parameters
  TrainReport report;
};

using EpochCallback = std::function<void(const EpochRecord&)>;

// Builds the vocabulary from `train`, then runs `config.epochs` passes of
// per-sentence Adam updates. Throws TrainingError on a non-finite loss or
// gradient, naming the sentence and step.
TrainResult Train(const TrainConfig& config, const Treebank& train, const Treebank& dev,
                  const PretrainedVectors* vectors = nullptr, const EpochCallback& on_epoch = nullptr);

// Same, starting from an existing parser (vocabulary and parameters).
TrainResult Train(Parser parser, const Treebank& train, const Treebank& dev, const EpochCallback& on_epoch = nullptr);

}  // namespace encdec
