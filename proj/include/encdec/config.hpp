#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "encdec/action.hpp"

namespace encdec {

enum class DecoderVariant { kVanilla, kStackQueueAverage, kStackQueueAttention };

std::string DecoderVariantName(DecoderVariant v);
DecoderVariant ParseDecoderVariant(std::string_view name);

// Network shape. Defaults follow the reference hyper-parameter table.
struct ModelConfig {
  Formalism formalism = Formalism::kDependency;
  DecoderVariant decoder = DecoderVariant::kStackQueueAttention;
  int word_dim = 64;
  int fixed_dim = 100;
  int pos_dim = 6;
  int label_dim = 20;
  int action_dim = 40;
  int enc_input_dim = 100;
  int enc_hidden_dim = 200;  // per direction
  int enc_layers = 2;
  int dec_hidden_dim = 400;  // must be 2 * enc_hidden_dim
  int dec_input_dim = 400;
  int attention_dim = 50;
  int max_open_nts = 100;

  // Throws std::invalid_argument on non-positive dims or inconsistent sizes.
  void Validate() const;
  bool operator==(const ModelConfig&) const = default;
};

struct TrainConfig {
  ModelConfig model;
  double l2 = 1e-6;
  double adam_alpha = 1e-3;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  double clip_norm = 5.0;  // 0 disables clipping
  int epochs = 30;
  std::uint64_t seed = 1;
  bool shuffle = true;
  int min_freq = 2;
  // Stop once teacher-forced dev action accuracy reaches this value; 0 never.
  double stop_at_action_accuracy = 0.0;
  // Pretrained vector file; empty means none (the fixed table is one zero row).
  std::string vectors;

  void Validate() const;
  bool operator==(const TrainConfig&) const = default;
};

// `key = value` lines, `#` comments. Unknown keys and malformed values throw
// std::invalid_argument naming the line.
TrainConfig ParseTrainConfig(std::string_view text);
std::string FormatTrainConfig(const TrainConfig& config);

}  // namespace encdec
