#include "encdec/neural/model.hpp"

#include <cmath>
#include <random>

namespace encdec {

namespace {

std::string LayerName(int layer, const char* dir) {
  return "enc.l" + std::to_string(layer) + "." + dir;
}

int ContextDim(const ModelConfig& cfg) {
  const int d = 2 * cfg.enc_hidden_dim;
  return cfg.decoder == DecoderVariant::kVanilla ? d : 2 * d;
}

bool EndsWith(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

template <typename T>
Vector<T> Relu(const Vector<T>& x) {
  return x.cwiseMax(T(0));
}

}  // namespace

template <typename T>
ModelViews<T> ModelViews<T>::Bind(ParamSet<T>& p, const ModelConfig& cfg) {
  ModelViews<T> v{p.Get("emb.word").mat(),
                  p.Get("emb.fixed").mat(),
                  p.Get("emb.pos").mat(),
                  p.Get("emb.action").mat(),
                  p.Get("emb.label").mat(),
                  p.Get("emb.action_start").vec(),
                  p.Get("enc.W").mat(),
                  p.Get("enc.b").vec(),
                  {},
                  {},
                  {},
                  {},
                  {},
                  {},
                  LstmView<T>::Bind(p, "dec.lstm"),
                  p.Get("dec.W").mat(),
                  p.Get("dec.b").vec(),
                  std::nullopt,
                  std::nullopt,
                  std::nullopt,
                  p.Get("out.W").mat(),
                  p.Get("out.b").vec()};
  for (int l = 0; l < cfg.enc_layers; ++l) {
    const std::string f = LayerName(l, "fwd"), b = LayerName(l, "bwd");
    v.enc_fwd.push_back(LstmView<T>::Bind(p, f));
    v.enc_bwd.push_back(LstmView<T>::Bind(p, b));
    v.enc_h0_fwd.push_back(p.Get(f + ".h0").vec());
    v.enc_c0_fwd.push_back(p.Get(f + ".c0").vec());
    v.enc_h0_bwd.push_back(p.Get(b + ".h0").vec());
    v.enc_c0_bwd.push_back(p.Get(b + ".c0").vec());
  }
  if (cfg.decoder == DecoderVariant::kVanilla) {
    v.att.emplace(AttentionView<T>::Bind(p, "att"));
  } else if (cfg.decoder == DecoderVariant::kStackQueueAttention) {
    v.att_stack.emplace(AttentionView<T>::Bind(p, "att.stack"));
    v.att_queue.emplace(AttentionView<T>::Bind(p, "att.queue"));
  }
  return v;
}

template <typename T>
Model<T>::Model(const ModelConfig& cfg, const VocabSizes& sizes) : config_(cfg), sizes_(sizes) {
  cfg.Validate();
  using sz = std::size_t;
  auto u = [](int x) { return static_cast<sz>(x); };
  params_.Add("emb.word", {u(sizes.words), u(cfg.word_dim)});
  params_.Add("emb.fixed", {u(sizes.fixed), u(cfg.fixed_dim)}, /*trainable=*/false);
  params_.Add("emb.pos", {u(sizes.pos), u(cfg.pos_dim)});
  params_.Add("emb.action", {u(sizes.actions), u(cfg.action_dim)});
  params_.Add("emb.action_start", {u(cfg.action_dim)});
  params_.Add("emb.label", {u(sizes.labels), u(cfg.label_dim)});
  params_.Add("enc.W", {u(cfg.enc_input_dim), u(cfg.pos_dim + cfg.fixed_dim + cfg.word_dim)});
  params_.Add("enc.b", {u(cfg.enc_input_dim)});
  for (int l = 0; l < cfg.enc_layers; ++l) {
    const int in = l == 0 ? cfg.enc_input_dim : 2 * cfg.enc_hidden_dim;
    for (const char* dir : {"fwd", "bwd"}) {
      const std::string name = LayerName(l, dir);
      AddLstmParams(params_, name, in, cfg.enc_hidden_dim);
      params_.Add(name + ".h0", {u(cfg.enc_hidden_dim)});
      params_.Add(name + ".c0", {u(cfg.enc_hidden_dim)});
    }
  }
  const int vdim = cfg.dec_hidden_dim + cfg.action_dim + ContextDim(cfg);
  params_.Add("dec.W", {u(cfg.dec_input_dim), u(vdim)});
  params_.Add("dec.b", {u(cfg.dec_input_dim)});
  AddLstmParams(params_, "dec.lstm", cfg.dec_input_dim, cfg.dec_hidden_dim);
  const int key_dim = 2 * cfg.enc_hidden_dim;
  if (cfg.decoder == DecoderVariant::kVanilla) {
    AddAttentionParams(params_, "att", key_dim, cfg.dec_hidden_dim, cfg.attention_dim);
  } else if (cfg.decoder == DecoderVariant::kStackQueueAttention) {
    AddAttentionParams(params_, "att.stack", key_dim, cfg.dec_hidden_dim, cfg.attention_dim);
    AddAttentionParams(params_, "att.queue", key_dim, cfg.dec_hidden_dim, cfg.attention_dim);
  }
  params_.Add("out.W", {u(sizes.actions), u(cfg.dec_hidden_dim)});
  params_.Add("out.b", {u(sizes.actions)});
}

template <typename T>
void Model<T>::Initialize(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (auto& e : params_.entries()) {
    if (!e.trainable) continue;
    auto& t = e.tensor;
    double bound = 0.0;
    if (EndsWith(e.name, ".b")) {
      bound = 0.0;
    } else if (e.name.rfind("emb.", 0) == 0 && t.shape().size() == 2) {
      bound = std::sqrt(6.0 / (1.0 + static_cast<double>(t.cols())));
    } else if (t.shape().size() == 2) {
      bound = std::sqrt(6.0 / static_cast<double>(t.rows() + t.cols()));
    } else {
      bound = std::sqrt(6.0 / (1.0 + static_cast<double>(t.size())));
    }
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (auto& x : t.values()) x = bound == 0.0 ? T(0) : static_cast<T>(dist(rng));
  }
}

template <typename T>
void Model<T>::SetFixedEmbeddings(const std::vector<std::vector<float>>& vectors) {
  auto& table = params_.Get("emb.fixed");
  if (vectors.size() + 1 != table.rows()) throw ContractViolation("pretrained table size mismatch");
  for (std::size_t r = 0; r < vectors.size(); ++r) {
    if (vectors[r].size() != table.cols()) throw ContractViolation("pretrained vector dimension mismatch");
    for (std::size_t k = 0; k < table.cols(); ++k) table.data()[(r + 1) * table.cols() + k] = static_cast<T>(vectors[r][k]);
  }
}

template <typename T>
ModelViews<T> Model<T>::Views() const {
  return ModelViews<T>::Bind(const_cast<ParamSet<T>&>(params_), config_);
}

template <typename T>
void Model<T>::CheckInput(const SentenceInput& in) const {
  if (in.size() == 0) throw ContractViolation("empty sentence");
  if (in.fixed.size() != in.words.size() || in.pos.size() != in.words.size()) {
    throw ContractViolation("sentence input columns differ in length");
  }
  for (int i = 0; i < in.size(); ++i) {
    if (in.words[i] < 0 || in.words[i] >= sizes_.words || in.fixed[i] < 0 || in.fixed[i] >= sizes_.fixed ||
        in.pos[i] < 0 || in.pos[i] >= sizes_.pos) {
      throw ContractViolation("token id out of range at position " + std::to_string(i + 1));
    }
  }
}

template <typename T>
Vector<T> Model<T>::EmbedWord(int word, int fixed, int pos) const {
  SentenceInput in{{word}, {fixed}, {pos}};
  CheckInput(in);
  const ModelViews<T> w = Views();
  Vector<T> concat(config_.pos_dim + config_.fixed_dim + config_.word_dim);
  concat << w.pos.row(pos).transpose(), w.fixed.row(fixed).transpose(), w.word.row(word).transpose();
  return Relu<T>(w.enc_W * concat + w.enc_b);
}

template <typename T>
EncoderOutput<T> Model<T>::Encode(const SentenceInput& in, EncoderTrace<T>* trace) const {
  CheckInput(in);
  const ModelViews<T> w = Views();
  const ModelConfig& cfg = config_;
  const int n = in.size();
  const int P = cfg.pos_dim, F = cfg.fixed_dim, Wd = cfg.word_dim, He = cfg.enc_hidden_dim;

  EncoderTrace<T> local;
  EncoderTrace<T>& tr = trace ? *trace : local;
  tr.concat.resize(P + F + Wd, n);
  for (int i = 0; i < n; ++i) {
    tr.concat.col(i).segment(0, P) = w.pos.row(in.pos[i]).transpose();
    tr.concat.col(i).segment(P, F) = w.fixed.row(in.fixed[i]).transpose();
    tr.concat.col(i).segment(P + F, Wd) = w.word.row(in.words[i]).transpose();
  }
  tr.pre = w.enc_W * tr.concat;
  tr.pre.colwise() += w.enc_b;
  Matrix<T> x = tr.pre.cwiseMax(T(0));

  tr.layer_inputs.assign(cfg.enc_layers, Matrix<T>());
  tr.fwd.assign(cfg.enc_layers, LstmTrace<T>());
  tr.bwd.assign(cfg.enc_layers, LstmTrace<T>());
  for (int l = 0; l < cfg.enc_layers; ++l) {
    tr.layer_inputs[l] = x;
    LstmForward<T>(w.enc_fwd[l], x, w.enc_h0_fwd[l], w.enc_c0_fwd[l], false, tr.fwd[l]);
    LstmForward<T>(w.enc_bwd[l], x, w.enc_h0_bwd[l], w.enc_c0_bwd[l], true, tr.bwd[l]);
    x.resize(2 * He, n);
    x.topRows(He) = tr.fwd[l].h;
    x.bottomRows(He) = tr.bwd[l].h;
  }
  EncoderOutput<T> out;
  out.H = std::move(x);
  out.s0.resize(2 * He);
  out.s0 << out.H.col(n - 1).head(He), out.H.col(0).tail(He);
  return out;
}

template <typename T>
DecoderContext<T> Model<T>::MakeContext(const EncoderOutput<T>& enc) const {
  const ModelViews<T> w = Views();
  DecoderContext<T> ctx;
  ctx.H = &enc.H;
  if (w.att) ctx.keys_a = w.att->Wh * enc.H;
  if (w.att_stack) ctx.keys_a = w.att_stack->Wh * enc.H;
  if (w.att_queue) ctx.keys_b = w.att_queue->Wh * enc.H;
  return ctx;
}

template <typename T>
void Model<T>::DecodeStep(const DecoderContext<T>& ctx, const Vector<T>& s_prev, const Vector<T>& c_prev,
                          int prev_action, int boundary, StepRecord<T>& rec) const {
  const ModelViews<T> w = Views();
  const ModelConfig& cfg = config_;
  const Matrix<T>& H = *ctx.H;
  const int n = static_cast<int>(H.cols());
  const int D = static_cast<int>(H.rows());
  if (prev_action < -1 || prev_action >= sizes_.actions) throw ContractViolation("previous action id out of range");

  rec.prev_action = prev_action;
  rec.boundary = boundary;
  rec.s_prev = s_prev;
  rec.c_prev = c_prev;

  switch (cfg.decoder) {
    case DecoderVariant::kVanilla:
      AttendSegment<T>(*w.att, H, ctx.keys_a, s_prev, 0, n - 1, rec.att_a);
      break;
    case DecoderVariant::kStackQueueAttention:
      if (boundary < 0 || boundary > n) throw ContractViolation("stack boundary out of range");
      AttendSegment<T>(*w.att_stack, H, ctx.keys_a, s_prev, 0, boundary - 1, rec.att_a);
      AttendSegment<T>(*w.att_queue, H, ctx.keys_b, s_prev, boundary, n - 1, rec.att_b);
      break;
    case DecoderVariant::kStackQueueAverage:
      if (boundary < 0 || boundary > n) throw ContractViolation("stack boundary out of range");
      rec.att_a.first = 0;
      rec.att_a.last = boundary - 1;
      rec.att_a.context = AveragePool<T>(H, 0, boundary - 1, &rec.att_a.alpha);
      rec.att_b.first = boundary;
      rec.att_b.last = n - 1;
      rec.att_b.context = AveragePool<T>(H, boundary, n - 1, &rec.att_b.alpha);
      break;
  }

  const int Hd = cfg.dec_hidden_dim, Ae = cfg.action_dim;
  rec.v.resize(Hd + Ae + ContextDim(cfg));
  rec.v.segment(0, Hd) = s_prev;
  if (prev_action < 0) {
    rec.v.segment(Hd, Ae) = w.action_start;
  } else {
    rec.v.segment(Hd, Ae) = w.action.row(prev_action).transpose();
  }
  rec.v.segment(Hd + Ae, D) = rec.att_a.context;
  if (cfg.decoder != DecoderVariant::kVanilla) rec.v.segment(Hd + Ae + D, D) = rec.att_b.context;

  rec.upre.noalias() = w.dec_W * rec.v;
  rec.upre += w.dec_b;
  rec.lstm.Resize(cfg.dec_input_dim, Hd, 1);
  rec.lstm.x.col(0) = Relu<T>(rec.upre);
  Vector<T> wx_b = w.dec_lstm.W * rec.lstm.x.col(0) + w.dec_lstm.b;
  LstmStep<T>(w.dec_lstm, wx_b, s_prev, c_prev, rec.lstm, 0);

  rec.logits.noalias() = w.out_W * rec.lstm.h.col(0);
  rec.logits += w.out_b;
  rec.probs = Softmax<T>(rec.logits);
}

template <typename T>
T Model<T>::ForwardTeacherForced(const SentenceInput& input, const std::vector<int>& gold,
                                 const std::vector<int>& boundaries, Tape<T>* tape) const {
  if (gold.empty() || gold.size() != boundaries.size()) {
    throw ContractViolation("teacher forcing needs one boundary per gold action");
  }
  Tape<T> local;
  Tape<T>& tp = tape ? *tape : local;
  tp = Tape<T>{};
  tp.input = input;
  tp.gold = gold;
  tp.enc = Encode(input, tape ? &tp.enc_trace : nullptr);
  tp.ctx = MakeContext(tp.enc);

  const int Hd = config_.dec_hidden_dim;
  Vector<T> s = tp.enc.s0;
  Vector<T> c = Vector<T>::Zero(Hd);
  int prev = -1;
  T loss = T(0);
  StepRecord<T> scratch;
  if (tape) tp.steps.reserve(gold.size());
  for (std::size_t j = 0; j < gold.size(); ++j) {
    if (gold[j] < 0 || gold[j] >= sizes_.actions) throw ContractViolation("gold action id out of range");
    StepRecord<T>& rec = tape ? tp.steps.emplace_back() : scratch;
    DecodeStep(tp.ctx, s, c, prev, boundaries[j], rec);
    const T m = rec.logits.maxCoeff();
    const T lse = m + std::log((rec.logits.array() - m).exp().sum());
    loss += lse - rec.logits(gold[j]);
    s = rec.lstm.h.col(0);
    c = rec.lstm.c.col(0);
    prev = gold[j];
  }
  tp.loss = loss;
  tp.recorded = tape != nullptr;
  return loss;
}

template <typename T>
void Model<T>::Backward(const Tape<T>& tape, ParamSet<T>& grads) const {
  if (!tape.recorded) throw ContractViolation("backward called without a recorded forward pass");
  const ModelViews<T> w = Views();
  ModelViews<T> g = ModelViews<T>::Bind(grads, config_);
  const ModelConfig& cfg = config_;
  const Matrix<T>& H = tape.enc.H;
  const int n = static_cast<int>(H.cols());
  const int D = static_cast<int>(H.rows());
  const int m = static_cast<int>(tape.steps.size());
  const int Hd = cfg.dec_hidden_dim, Ae = cfg.action_dim, Din = cfg.dec_input_dim;
  const int A = cfg.attention_dim;
  const int vdim = Hd + Ae + ContextDim(cfg);

  Matrix<T> dH = Matrix<T>::Zero(D, n);
  Matrix<T> dkeys_a = Matrix<T>::Zero(A, n), dkeys_b = Matrix<T>::Zero(A, n);
  Matrix<T> DG(4 * Hd, m), DU(Din, m), DL(sizes_.actions, m);
  Matrix<T> DQa = Matrix<T>::Zero(A, m), DQb = Matrix<T>::Zero(A, m);
  Matrix<T> X(Din, m), Sprev(Hd, m), S(Hd, m), V(vdim, m);

  Vector<T> ds_next = Vector<T>::Zero(Hd), dc_next = Vector<T>::Zero(Hd);
  Vector<T> dg, dc_prev;
  for (int j = m - 1; j >= 0; --j) {
    const StepRecord<T>& rec = tape.steps[j];
    X.col(j) = rec.lstm.x.col(0);
    Sprev.col(j) = rec.s_prev;
    S.col(j) = rec.lstm.h.col(0);
    V.col(j) = rec.v;

    Vector<T> dlogit = rec.probs;
    dlogit(tape.gold[j]) -= T(1);
    DL.col(j) = dlogit;
    Vector<T> ds = w.out_W.transpose() * dlogit + ds_next;

    LstmStepBackward<T>(w.dec_lstm, rec.lstm, 0, ds, dc_next, dg, dc_prev, g.dec_lstm);
    DG.col(j) = dg;
    Vector<T> ds_prev = w.dec_lstm.R.transpose() * dg;
    Vector<T> du = w.dec_lstm.W.transpose() * dg;
    Vector<T> dupre = (rec.upre.array() > T(0)).select(du, T(0));
    DU.col(j) = dupre;
    Vector<T> dv = w.dec_W.transpose() * dupre;

    ds_prev += dv.segment(0, Hd);
    if (rec.prev_action < 0) {
      g.action_start += dv.segment(Hd, Ae);
    } else {
      g.action.row(rec.prev_action) += dv.segment(Hd, Ae).transpose();
    }
    const Vector<T> dctx_a = dv.segment(Hd + Ae, D);
    switch (cfg.decoder) {
      case DecoderVariant::kVanilla: {
        Vector<T> dq = AttendSegmentBackward<T>(*w.att, H, rec.att_a, dctx_a, dH, dkeys_a, *g.att);
        ds_prev.noalias() += w.att->Ws.transpose() * dq;
        DQa.col(j) = dq;
        break;
      }
      case DecoderVariant::kStackQueueAttention: {
        const Vector<T> dctx_b = dv.segment(Hd + Ae + D, D);
        Vector<T> dqa = AttendSegmentBackward<T>(*w.att_stack, H, rec.att_a, dctx_a, dH, dkeys_a, *g.att_stack);
        Vector<T> dqb = AttendSegmentBackward<T>(*w.att_queue, H, rec.att_b, dctx_b, dH, dkeys_b, *g.att_queue);
        ds_prev.noalias() += w.att_stack->Ws.transpose() * dqa;
        ds_prev.noalias() += w.att_queue->Ws.transpose() * dqb;
        DQa.col(j) = dqa;
        DQb.col(j) = dqb;
        break;
      }
      case DecoderVariant::kStackQueueAverage: {
        const Vector<T> dctx_b = dv.segment(Hd + Ae + D, D);
        for (const auto* seg : {&rec.att_a, &rec.att_b}) {
          if (seg->empty()) continue;
          const Vector<T>& dctx = seg == &rec.att_a ? dctx_a : dctx_b;
          dH.middleCols(seg->first, seg->last - seg->first + 1).noalias() += dctx * seg->alpha.transpose();
        }
        break;
      }
    }
    ds_next = ds_prev;
    dc_next = dc_prev;
  }

  g.out_W.noalias() += DL * S.transpose();
  g.out_b += DL.rowwise().sum();
  g.dec_lstm.W.noalias() += DG * X.transpose();
  g.dec_lstm.R.noalias() += DG * Sprev.transpose();
  g.dec_lstm.b += DG.rowwise().sum();
  g.dec_W.noalias() += DU * V.transpose();
  g.dec_b += DU.rowwise().sum();

  auto finish_attention = [&](const AttentionView<T>& wa, AttentionView<T>& ga, const Matrix<T>& dkeys,
                              const Matrix<T>& dq) {
    ga.Ws.noalias() += dq * Sprev.transpose();
    ga.Wh.noalias() += dkeys * H.transpose();
    dH.noalias() += wa.Wh.transpose() * dkeys;
  };
  if (w.att) finish_attention(*w.att, *g.att, dkeys_a, DQa);
  if (w.att_stack) finish_attention(*w.att_stack, *g.att_stack, dkeys_a, DQa);
  if (w.att_queue) finish_attention(*w.att_queue, *g.att_queue, dkeys_b, DQb);

  // Encoder: s0 = [h_l_n; h_r_1].
  const int He = cfg.enc_hidden_dim;
  const EncoderTrace<T>& tr = tape.enc_trace;
  Matrix<T> dX = std::move(dH);
  dX.col(n - 1).head(He) += ds_next.head(He);
  dX.col(0).tail(He) += ds_next.tail(He);
  Matrix<T> dxf, dxb;
  Vector<T> dh0, dc0;
  for (int l = cfg.enc_layers - 1; l >= 0; --l) {
    const Matrix<T> dhf = dX.topRows(He);
    const Matrix<T> dhb = dX.bottomRows(He);
    LstmBackward<T>(w.enc_fwd[l], tr.fwd[l], dhf, false, g.enc_fwd[l], dxf, dh0, dc0);
    g.enc_h0_fwd[l] += dh0;
    g.enc_c0_fwd[l] += dc0;
    LstmBackward<T>(w.enc_bwd[l], tr.bwd[l], dhb, true, g.enc_bwd[l], dxb, dh0, dc0);
    g.enc_h0_bwd[l] += dh0;
    g.enc_c0_bwd[l] += dc0;
    dX = dxf + dxb;
  }
  Matrix<T> dpre = (tr.pre.array() > T(0)).select(dX, T(0));
  g.enc_W.noalias() += dpre * tr.concat.transpose();
  g.enc_b += dpre.rowwise().sum();
  Matrix<T> dconcat = w.enc_W.transpose() * dpre;
  const int P = cfg.pos_dim, F = cfg.fixed_dim, Wd = cfg.word_dim;
  for (int i = 0; i < n; ++i) {
    g.pos.row(tape.input.pos[i]) += dconcat.col(i).segment(0, P).transpose();
    g.word.row(tape.input.words[i]) += dconcat.col(i).segment(P + F, Wd).transpose();
  }
}

template struct ModelViews<float>;
template struct ModelViews<double>;
template class Model<float>;
template class Model<double>;

}  // namespace encdec
