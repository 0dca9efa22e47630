#include "encdec/training.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <random>

#include "encdec/error.hpp"
#include "encdec/evaluation.hpp"
#include "encdec/inference.hpp"

namespace encdec {

AdamState MakeAdamState(const ParamSet<float>& params) {
  AdamState s;
  s.m = params.ZerosLike();
  s.v = params.ZerosLike();
  return s;
}

void AdamStep(ParamSet<float>& params, const ParamSet<float>& grads, AdamState& state, const TrainConfig& config) {
  auto& ps = params.entries();
  const auto& gs = grads.entries();
  auto& ms = state.m.entries();
  auto& vs = state.v.entries();
  if (gs.size() != ps.size() || ms.size() != ps.size() || vs.size() != ps.size()) {
    throw ContractViolation("adam: parameter, gradient and moment layouts differ");
  }
  for (std::size_t k = 0; k < ps.size(); ++k) {
    const auto& shape = ps[k].tensor.shape();
    if (gs[k].tensor.shape() != shape || ms[k].tensor.shape() != shape || vs[k].tensor.shape() != shape) {
      throw ContractViolation("adam: shape mismatch for '" + ps[k].name + "'");
    }
  }
  ++state.t;
  const double b1 = config.adam_beta1, b2 = config.adam_beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(state.t));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(state.t));
  const double alpha = config.adam_alpha, eps = config.adam_eps;
  for (std::size_t k = 0; k < ps.size(); ++k) {
    if (!ps[k].trainable) continue;
    float* p = ps[k].tensor.data();
    const float* g = gs[k].tensor.data();
    float* m = ms[k].tensor.data();
    float* v = vs[k].tensor.data();
    const std::size_t n = ps[k].tensor.size();
    for (std::size_t i = 0; i < n; ++i) {
      m[i] = static_cast<float>(b1 * m[i] + (1.0 - b1) * g[i]);
      v[i] = static_cast<float>(b2 * v[i] + (1.0 - b2) * static_cast<double>(g[i]) * g[i]);
      const double mhat = m[i] / c1;
      const double vhat = v[i] / c2;
      p[i] = static_cast<float>(p[i] - alpha * mhat / (std::sqrt(vhat) + eps));
    }
  }
}

double GradientNorm(const ParamSet<float>& grads) {
  double sq = 0.0;
  for (const auto& e : grads.entries()) {
    if (!e.trainable) continue;
    for (float x : e.tensor.values()) sq += static_cast<double>(x) * x;
  }
  return std::sqrt(sq);
}

double ClipGradients(ParamSet<float>& grads, double max_norm) {
  const double norm = GradientNorm(grads);
  if (max_norm > 0 && norm > max_norm) {
    const float scale = static_cast<float>(max_norm / norm);
    for (auto& e : grads.entries()) {
      if (!e.trainable) continue;
      for (float& x : e.tensor.values()) x *= scale;
    }
  }
  return norm;
}

namespace {

std::vector<Example> DerivableExamples(const Parser& parser, const Treebank& tb, long* skipped) {
  std::vector<Example> out;
  for (std::size_t i = 0; i < tb.size(); ++i) {
    try {
      out.push_back(MakeExample(parser, tb, i));
    } catch (const OracleError&) {
      if (skipped) ++*skipped;
    }
  }
  return out;
}

double StructureMetric(const Parser& parser, const Treebank& dev) {
  if (dev.size() == 0) return 0.0;
  const Treebank pred = ParseTreebank(parser, dev);
  if (dev.constituent) return ScoreConstituent(pred.cons, dev.cons).f1();
  return ScoreDependency(pred.dep, dev.dep).uas();
}

}  // namespace

DevMetrics EvaluateTeacherForced(const Parser& parser, const std::vector<Example>& examples) {
  DevMetrics m;
  long steps = 0, correct = 0;
  Tape<float> tape;
  for (const auto& ex : examples) {
    m.loss += parser.model.ForwardTeacherForced(ex.input, ex.actions, ex.boundaries, &tape);
    for (std::size_t j = 0; j < tape.steps.size(); ++j) {
      Eigen::Index best = 0;
      tape.steps[j].probs.maxCoeff(&best);
      if (best == ex.actions[j]) ++correct;
    }
    steps += static_cast<long>(tape.steps.size());
  }
  m.scored = static_cast<long>(examples.size());
  m.action_accuracy = steps ? 100.0 * correct / steps : 0.0;
  return m;
}

DevMetrics Evaluate(const Parser& parser, const Treebank& dev) {
  DevMetrics m = EvaluateTeacherForced(parser, DerivableExamples(parser, dev, nullptr));
  m.structure = StructureMetric(parser, dev);
  return m;
}

bool SameTrajectory(const TrainReport& a, const TrainReport& b) {
  if (a.best_epoch != b.best_epoch || a.skipped != b.skipped || a.epochs.size() != b.epochs.size()) return false;
  for (std::size_t k = 0; k < a.epochs.size(); ++k) {
    const auto& x = a.epochs[k];
    const auto& y = b.epochs[k];
    if (x.epoch != y.epoch || x.train_loss != y.train_loss || !(x.dev == y.dev)) return false;
  }
  return true;
}

TrainResult Train(Parser parser, const Treebank& train, const Treebank& dev, const EpochCallback& on_epoch) {
  const TrainConfig& config = parser.config;
  TrainResult result;
  std::vector<Example> examples = DerivableExamples(parser, train, &result.report.skipped);
  const std::vector<Example> dev_examples = DerivableExamples(parser, dev, nullptr);
  auto evaluate = [&](const Parser& p) {
    DevMetrics m = EvaluateTeacherForced(p, dev_examples);
    m.structure = StructureMetric(p, dev);
    return m;
  };

  ParamSet<float> best = parser.model.params();
  DevMetrics best_dev;
  if (config.epochs > 0 && dev.size() > 0) best_dev = evaluate(parser);

  ParamSet<float> grads = parser.model.params().ZerosLike();
  AdamState adam = MakeAdamState(parser.model.params());
  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    if (config.shuffle) std::shuffle(order.begin(), order.end(), rng);
    double total = 0.0;
    for (std::size_t step = 0; step < order.size(); ++step) {
      const Example& ex = examples[order[step]];
      grads.SetZero();
      const float loss = SentenceLoss(parser.model, ex, config.l2, &grads);
      const double norm = ClipGradients(grads, config.clip_norm);
      if (!std::isfinite(loss) || !std::isfinite(norm)) {
        throw TrainingError("non-finite " + std::string(std::isfinite(loss) ? "gradient" : "loss") + " at epoch " +
                            std::to_string(epoch) + ", step " + std::to_string(step + 1) + ", sentence " +
                            std::to_string(ex.index + 1));
      }
      AdamStep(parser.model.params(), grads, adam, config);
      total += loss;
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = total;
    if (dev.size() > 0) rec.dev = evaluate(parser);
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.report.epochs.push_back(rec);
    if (on_epoch) on_epoch(rec);

    const bool better = dev.size() == 0 || rec.dev.structure > best_dev.structure ||
                        (rec.dev.structure == best_dev.structure && rec.dev.loss < best_dev.loss);
    if (better) {
      best_dev = rec.dev;
      best = parser.model.params();
      result.report.best_epoch = epoch;
    }
    if (config.stop_at_action_accuracy > 0 && rec.dev.action_accuracy >= config.stop_at_action_accuracy) break;
  }
  parser.model.params() = std::move(best);
  result.parser = std::move(parser);
  return result;
}

TrainResult Train(const TrainConfig& config, const Treebank& train, const Treebank& dev,
                  const PretrainedVectors* vectors, const EpochCallback& on_epoch) {
  config.Validate();
  if (train.constituent != (config.model.formalism == Formalism::kConstituent)) {
    throw ContractViolation("training treebank formalism differs from the config");
  }
  Vocabulary vocab =
      train.constituent ? BuildConstVocab(train.cons, config.min_freq) : BuildDepVocab(train.dep, config.min_freq);
  return Train(MakeParser(config, std::move(vocab), vectors), train, dev, on_epoch);
}

}  // namespace encdec
