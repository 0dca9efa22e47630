#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "encdec/config.hpp"
#include "encdec/neural/attention.hpp"
#include "encdec/neural/lstm.hpp"
#include "encdec/neural/tensor.hpp"

namespace encdec {

struct VocabSizes {
  int words = 1;
  int fixed = 1;  // pretrained rows + the zero row
  int pos = 1;
  int labels = 1;
  int actions = 1;

  bool operator==(const VocabSizes&) const = default;
};

// Per-token ids fed to the encoder. `fixed` indexes the pretrained table,
// with 0 meaning "no pretrained vector".
struct SentenceInput {
  std::vector<int> words;
  std::vector<int> fixed;
  std::vector<int> pos;

  int size() const { return static_cast<int>(words.size()); }
};

// Eigen maps over a ParamSet laid out by Model. Built on demand; valid as
// long as the ParamSet is not resized.
template <typename T>
struct ModelViews {
  MatMap<T> word, fixed, pos, action, label;
  VecMap<T> action_start;
  MatMap<T> enc_W;
  VecMap<T> enc_b;
  std::vector<LstmView<T>> enc_fwd, enc_bwd;
  std::vector<VecMap<T>> enc_h0_fwd, enc_c0_fwd, enc_h0_bwd, enc_c0_bwd;
  LstmView<T> dec_lstm;
  MatMap<T> dec_W;
  VecMap<T> dec_b;
  std::optional<AttentionView<T>> att;        // vanilla
  std::optional<AttentionView<T>> att_stack;  // sq-attention
  std::optional<AttentionView<T>> att_queue;
  MatMap<T> out_W;
  VecMap<T> out_b;

  static ModelViews Bind(ParamSet<T>& params, const ModelConfig& cfg);
};

template <typename T>
struct EncoderOutput {
  Matrix<T> H;   // 2*enc_hidden x n, column i = [h_l_i; h_r_i]
  Vector<T> s0;  // [h_l_n; h_r_1]
};

template <typename T>
struct EncoderTrace {
  Matrix<T> concat;  // [e_p; e_fixed; e_w] per token
  Matrix<T> pre;     // W_enc concat + b_enc
  std::vector<Matrix<T>> layer_inputs;
  std::vector<LstmTrace<T>> fwd, bwd;
};

// Attention keys Wh*H precomputed for one sentence.
template <typename T>
struct DecoderContext {
  const Matrix<T>* H = nullptr;
  Matrix<T> keys_a;  // full-range or stack attention
  Matrix<T> keys_b;  // queue attention
};

template <typename T>
struct StepRecord {
  int prev_action = -1;  // -1 is the start sentinel
  int boundary = 0;
  Vector<T> s_prev, c_prev;
  Vector<T> v;     // [s_prev; e_a; contexts...]
  Vector<T> upre;  // W_dec v + b_dec
  LstmTrace<T> lstm;
  // Attention (or, for average pooling, the uniform pooling weights) over
  // the full range / stack segment in att_a and the queue segment in att_b.
  AttentionTrace<T> att_a, att_b;
  Vector<T> logits, probs;

  const auto s() const { return lstm.h.col(0); }
  const auto c() const { return lstm.c.col(0); }
};

// Recorded forward pass of one teacher-forced sentence.
template <typename T>
struct Tape {
  bool recorded = false;
  SentenceInput input;
  std::vector<int> gold;
  EncoderTrace<T> enc_trace;
  EncoderOutput<T> enc;
  DecoderContext<T> ctx;
  std::vector<StepRecord<T>> steps;
  T loss = T(0);
};

template <typename T>
class Model {
 public:
  Model() = default;
  Model(const ModelConfig& config, const VocabSizes& sizes);

  const ModelConfig& config() const { return config_; }
  const VocabSizes& sizes() const { return sizes_; }
  ParamSet<T>& params() { return params_; }
  const ParamSet<T>& params() const { return params_; }

  // Seeded uniform initialization; the fixed table is left untouched.
  void Initialize(std::uint64_t seed);
  // Row r+1 of the fixed table receives vectors[r].
  void SetFixedEmbeddings(const std::vector<std::vector<float>>& vectors);

  ModelViews<T> Views() const;

  // x_i = ReLU(W_enc [e_pos; e_fixed; e_word] + b_enc).
  Vector<T> EmbedWord(int word, int fixed, int pos) const;

  EncoderOutput<T> Encode(const SentenceInput& input, EncoderTrace<T>* trace = nullptr) const;
  DecoderContext<T> MakeContext(const EncoderOutput<T>& enc) const;

  // One decoder step from (s_prev, c_prev). `boundary` is the stack/queue
  // split t in 0..n and is ignored by the vanilla decoder.
  void DecodeStep(const DecoderContext<T>& ctx, const Vector<T>& s_prev, const Vector<T>& c_prev,
                  int prev_action, int boundary, StepRecord<T>& rec) const;

  // Teacher-forced cross-entropy -sum_j log p(gold_j). Records into `tape`
  // when given.
  T ForwardTeacherForced(const SentenceInput& input, const std::vector<int>& gold,
                         const std::vector<int>& boundaries, Tape<T>* tape = nullptr) const;

  // Adds dLoss/dtheta of the recorded pass into `grads` (same layout as
  // params()). The fixed table never receives gradient.
  void Backward(const Tape<T>& tape, ParamSet<T>& grads) const;

  template <typename U>
  Model<U> Cast() const {
    Model<U> out(config_, sizes_);
    out.params() = params_.template Cast<U>();
    return out;
  }

 private:
  void CheckInput(const SentenceInput& input) const;

  ModelConfig config_;
  VocabSizes sizes_;
  ParamSet<T> params_;
};

}  // namespace encdec
