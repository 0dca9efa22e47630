#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "encdec/error.hpp"
#include "encdec/neural/model.hpp"
#include "test_support.hpp"

using namespace encdec;

namespace {

// Straight-line scalar reference. Everything here reads parameters by name
// and loops over plain vectors; nothing goes through Eigen.
using Vec = std::vector<double>;

struct Ref {
  const ParamSet<double>& p;

  const Tensor<double>& P(const std::string& name) const { return p.Get(name); }

  Vec MatVec(const std::string& name, const Vec& x) const {
    const auto& W = P(name);
    REQUIRE(W.cols() == x.size());
    Vec out(W.rows(), 0.0);
    for (std::size_t r = 0; r < W.rows(); ++r) {
      double acc = 0.0;
      for (std::size_t c = 0; c < W.cols(); ++c) acc += W.data()[r * W.cols() + c] * x[c];
      out[r] = acc;
    }
    return out;
  }

  Vec Row(const std::string& name, int r) const {
    const auto& t = P(name);
    return Vec(t.data() + r * t.cols(), t.data() + (r + 1) * t.cols());
  }

  Vec Get(const std::string& name) const { return Vec(P(name).values().begin(), P(name).values().end()); }

  static double Sig(double x) { return 1.0 / (1.0 + std::exp(-x)); }

  // Returns {h, c}.
  std::pair<Vec, Vec> Lstm(const std::string& pre, const Vec& x, const Vec& h, const Vec& c) const {
    const std::size_t H = h.size();
    const Vec wx = MatVec(pre + ".W", x);
    const Vec rh = MatVec(pre + ".R", h);
    const Vec b = Get(pre + ".b");
    const Vec peep = Get(pre + ".peep");
    Vec hn(H), cn(H);
    for (std::size_t k = 0; k < H; ++k) {
      const double gi = Sig(wx[k] + rh[k] + b[k] + peep[k] * c[k]);
      const double gf = Sig(wx[H + k] + rh[H + k] + b[H + k] + peep[H + k] * c[k]);
      const double z = std::tanh(wx[2 * H + k] + rh[2 * H + k] + b[2 * H + k]);
      cn[k] = gf * c[k] + gi * z;
      const double go = Sig(wx[3 * H + k] + rh[3 * H + k] + b[3 * H + k] + peep[2 * H + k] * cn[k]);
      hn[k] = go * std::tanh(cn[k]);
    }
    return {hn, cn};
  }

  Vec Embed(int w, int f, int pos) const {
    Vec concat = Row("emb.pos", pos);
    const Vec fx = Row("emb.fixed", f), wx = Row("emb.word", w);
    concat.insert(concat.end(), fx.begin(), fx.end());
    concat.insert(concat.end(), wx.begin(), wx.end());
    Vec x = MatVec("enc.W", concat);
    const Vec b = Get("enc.b");
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = std::max(0.0, x[k] + b[k]);
    return x;
  }

  std::vector<Vec> Encode(const SentenceInput& in, int layers) const {
    const int n = in.size();
    std::vector<Vec> x(n);
    for (int i = 0; i < n; ++i) x[i] = Embed(in.words[i], in.fixed[i], in.pos[i]);
    for (int l = 0; l < layers; ++l) {
      const std::string f = "enc.l" + std::to_string(l) + ".fwd", b = "enc.l" + std::to_string(l) + ".bwd";
      std::vector<Vec> hf(n), hb(n);
      Vec h = Get(f + ".h0"), c = Get(f + ".c0");
      for (int i = 0; i < n; ++i) std::tie(h, c) = Lstm(f, x[i], h, c), hf[i] = h;
      h = Get(b + ".h0");
      c = Get(b + ".c0");
      for (int i = n - 1; i >= 0; --i) std::tie(h, c) = Lstm(b, x[i], h, c), hb[i] = h;
      for (int i = 0; i < n; ++i) {
        x[i] = hf[i];
        x[i].insert(x[i].end(), hb[i].begin(), hb[i].end());
      }
    }
    return x;
  }

  // Attention over 0-based [first, last]; returns {context, alpha}.
  std::pair<Vec, Vec> Attend(const std::string& pre, const std::vector<Vec>& H, const Vec& s, int first,
                             int last) const {
    const std::size_t D = H[0].size();
    Vec ctx(D, 0.0), alpha;
    if (first > last) return {ctx, alpha};
    const Vec ws = MatVec(pre + ".Ws", s);
    const Vec b = Get(pre + ".b"), U = Get(pre + ".U");
    Vec beta;
    for (int i = first; i <= last; ++i) {
      const Vec wh = MatVec(pre + ".Wh", H[i]);
      double acc = 0.0;
      for (std::size_t a = 0; a < U.size(); ++a) acc += U[a] * std::tanh(wh[a] + ws[a] + b[a]);
      beta.push_back(acc);
    }
    const double m = *std::max_element(beta.begin(), beta.end());
    double z = 0.0;
    for (double v : beta) z += std::exp(v - m);
    for (double v : beta) alpha.push_back(std::exp(v - m) / z);
    for (int i = first; i <= last; ++i) {
      for (std::size_t d = 0; d < D; ++d) ctx[d] += alpha[i - first] * H[i][d];
    }
    return {ctx, alpha};
  }

  Vec Mean(const std::vector<Vec>& H, int first, int last) const {
    Vec ctx(H[0].size(), 0.0);
    if (first > last) return ctx;
    for (int i = first; i <= last; ++i) {
      for (std::size_t d = 0; d < ctx.size(); ++d) ctx[d] += H[i][d];
    }
    for (double& v : ctx) v /= last - first + 1;
    return ctx;
  }

  struct Step {
    Vec logits, s, c;
  };

  Step Decode(DecoderVariant d, const std::vector<Vec>& H, const Vec& s, const Vec& c, int prev, int t) const {
    const int n = static_cast<int>(H.size());
    Vec v = s;
    const Vec ea = prev < 0 ? Get("emb.action_start") : Row("emb.action", prev);
    v.insert(v.end(), ea.begin(), ea.end());
    auto append = [&](const Vec& x) { v.insert(v.end(), x.begin(), x.end()); };
    if (d == DecoderVariant::kVanilla) {
      append(Attend("att", H, s, 0, n - 1).first);
    } else if (d == DecoderVariant::kStackQueueAttention) {
      append(Attend("att.stack", H, s, 0, t - 1).first);
      append(Attend("att.queue", H, s, t, n - 1).first);
    } else {
      append(Mean(H, 0, t - 1));
      append(Mean(H, t, n - 1));
    }
    Vec u = MatVec("dec.W", v);
    const Vec b = Get("dec.b");
    for (std::size_t k = 0; k < u.size(); ++k) u[k] = std::max(0.0, u[k] + b[k]);
    Step out;
    std::tie(out.s, out.c) = Lstm("dec.lstm", u, s, c);
    out.logits = MatVec("out.W", out.s);
    const Vec ob = Get("out.b");
    for (std::size_t k = 0; k < ob.size(); ++k) out.logits[k] += ob[k];
    return out;
  }

  double Loss(const ModelConfig& cfg, const SentenceInput& in, const std::vector<int>& gold,
              const std::vector<int>& bounds) const {
    const auto H = Encode(in, cfg.enc_layers);
    const int n = in.size();
    const std::size_t He = cfg.enc_hidden_dim;
    Vec s(H[n - 1].begin(), H[n - 1].begin() + He);
    s.insert(s.end(), H[0].begin() + He, H[0].end());
    Vec c(cfg.dec_hidden_dim, 0.0);
    int prev = -1;
    double loss = 0.0;
    for (std::size_t j = 0; j < gold.size(); ++j) {
      const Step st = Decode(cfg.decoder, H, s, c, prev, bounds[j]);
      double m = st.logits[0];
      for (double x : st.logits) m = std::max(m, x);
      double z = 0.0;
      for (double x : st.logits) z += std::exp(x - m);
      loss += m + std::log(z) - st.logits[gold[j]];
      s = st.s;
      c = st.c;
      prev = gold[j];
    }
    return loss;
  }
};

template <typename V>
double MaxDiff(const V& a, const Vec& b) {
  REQUIRE(static_cast<std::size_t>(a.size()) == b.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) worst = std::max(worst, std::abs(a(i) - b[i]));
  return worst;
}

void Randomize(ParamSet<double>& p, std::uint64_t seed, double scale = 0.5) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-scale, scale);
  for (auto& e : p.entries()) {
    for (auto& x : e.tensor.values()) x = u(rng);
  }
}

const DecoderVariant kVariants[] = {DecoderVariant::kVanilla, DecoderVariant::kStackQueueAverage,
                                    DecoderVariant::kStackQueueAttention};

// Tiny model in double precision with every block (fixed table included)
// drawn away from the initializer's ranges.
Model<double> DoubleModel(Formalism f, DecoderVariant d, std::uint64_t seed = 3) {
  Model<double> m = testing::TinyParser(f, d).model.Cast<double>();
  Randomize(m.params(), seed);
  return m;
}

Matrix<double> ToMatrix(const std::vector<Vec>& cols) {
  Matrix<double> m(cols[0].size(), cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    for (std::size_t i = 0; i < cols[j].size(); ++i) m(i, j) = cols[j][i];
  }
  return m;
}

}  // namespace

TEST_CASE("lstm cell: zero weights and states") {
  ParamSet<double> p;
  AddLstmParams(p, "l", 3, 2);
  const auto w = LstmView<double>::Bind(p, "l");
  const auto out = LstmCell<double>(w, Vector<double>::Ones(3), Vector<double>::Zero(2), Vector<double>::Zero(2));
  CHECK(out.h.isZero(0.0));
  CHECK(out.c.isZero(0.0));
}

TEST_CASE("lstm cell: saturated gates carry the cell") {
  ParamSet<double> p;
  AddLstmParams(p, "l", 3, 2);
  Randomize(p, 4, 0.1);
  auto w = LstmView<double>::Bind(p, "l");
  w.peep.setZero();
  w.b.segment(0, 2).setConstant(-60.0);  // input gate -> 0
  w.b.segment(2, 2).setConstant(60.0);   // forget gate -> 1
  Vector<double> c(2);
  c << 0.7, -1.3;
  const auto out = LstmCell<double>(w, Vector<double>::Ones(3), Vector<double>::Constant(2, 0.2), c);
  CHECK(std::abs(out.c(0) - 0.7) < 1e-12);
  CHECK(std::abs(out.c(1) + 1.3) < 1e-12);
}

TEST_CASE("lstm cell: matches the scalar loop") {
  ParamSet<double> p;
  AddLstmParams(p, "l", 4, 3);
  Randomize(p, 9, 0.8);
  const auto w = LstmView<double>::Bind(p, "l");
  const Vector<double> x = Vector<double>::Ones(4);
  Vector<double> h(3), c(3);
  h << 0.1, -0.4, 0.9;
  c << -0.5, 0.3, 1.2;
  const auto out = LstmCell<double>(w, x, h, c);
  const auto [rh, rc] = Ref{p}.Lstm("l", Vec(4, 1.0), {0.1, -0.4, 0.9}, {-0.5, 0.3, 1.2});
  CHECK(MaxDiff(out.h, rh) < 1e-12);
  CHECK(MaxDiff(out.c, rc) < 1e-12);
  CHECK_THROWS_AS(LstmCell<double>(w, Vector<double>::Ones(3), h, c), ContractViolation);
  CHECK_THROWS_AS(LstmCell<double>(w, x, Vector<double>::Ones(2), c), ContractViolation);
}

TEST_CASE("embed_word") {
  Model<double> m = DoubleModel(Formalism::kDependency, DecoderVariant::kVanilla);
  auto& W = m.params().Get("enc.W").values();
  auto& b = m.params().Get("enc.b").values();
  const auto saved_W = W, saved_b = b;
  std::fill(W.begin(), W.end(), 0.0);
  std::fill(b.begin(), b.end(), 0.0);
  CHECK(m.EmbedWord(1, 1, 1).isZero(0.0));
  std::fill(b.begin(), b.end(), -1.0);
  CHECK(m.EmbedWord(1, 1, 1).isZero(0.0));
  W = saved_W;
  b = saved_b;

  const Vocabulary& v = testing::TinyParser(Formalism::kDependency, DecoderVariant::kVanilla).vocab;
  const int w = v.WordId("likes"), pos = v.PosId("VBZ");
  REQUIRE(w > 0);
  REQUIRE(pos > 0);
  CHECK(MaxDiff(m.EmbedWord(w, 0, pos), Ref{m.params()}.Embed(w, 0, pos)) < 1e-12);
  CHECK(MaxDiff(m.EmbedWord(w, 2, pos), Ref{m.params()}.Embed(w, 2, pos)) < 1e-12);
  CHECK_THROWS_AS(m.EmbedWord(m.sizes().words, 0, 0), ContractViolation);
  CHECK_THROWS_AS(m.EmbedWord(0, m.sizes().fixed, 0), ContractViolation);
  CHECK_THROWS_AS(m.EmbedWord(0, 0, -1), ContractViolation);
}

TEST_CASE("missing pretrained vectors embed as the zero row") {
  const Parser p = testing::TinyParser(Formalism::kDependency, DecoderVariant::kVanilla);
  const SentenceInput in = p.Featurize(testing::ThreeWordDep().tokens);
  CHECK(in.fixed == std::vector<int>{1, 0, 2});
  const auto& fixed = p.model.params().Get("emb.fixed").values();
  for (int k = 0; k < 2; ++k) CHECK(fixed[k] == 0.0f);
  CHECK(fixed[2] == 0.5f);
  CHECK(fixed[5] == 1.0f);
}

TEST_CASE("encode: matches the scalar loop") {
  for (int layers : {1, 2}) {
    TrainConfig cfg;
    cfg.model = testing::TinyModel(Formalism::kDependency, DecoderVariant::kVanilla);
    cfg.model.enc_layers = layers;
    VocabSizes sizes;
    sizes.words = 4;
    sizes.fixed = 3;
    sizes.pos = 3;
    sizes.actions = 5;
    Model<double> m(cfg.model, sizes);
    Randomize(m.params(), 21 + layers);
    const SentenceInput in{{1, 3, 0, 2}, {0, 2, 1, 0}, {2, 1, 1, 0}};
    const auto enc = m.Encode(in);
    const auto ref = Ref{m.params()}.Encode(in, layers);
    REQUIRE(enc.H.cols() == 4);
    for (int i = 0; i < 4; ++i) CHECK(MaxDiff(enc.H.col(i), ref[i]) < 1e-12);
    CHECK(enc.s0.head(3) == enc.H.col(3).head(3));
    CHECK(enc.s0.tail(3) == enc.H.col(0).tail(3));
  }
}

TEST_CASE("encode: one word") {
  Model<double> m = DoubleModel(Formalism::kDependency, DecoderVariant::kVanilla);
  const SentenceInput in{{1}, {0}, {1}};
  const auto enc = m.Encode(in);
  REQUIRE(enc.H.cols() == 1);
  CHECK(enc.s0 == enc.H.col(0));
  CHECK(MaxDiff(enc.H.col(0), Ref{m.params()}.Encode(in, 2)[0]) < 1e-12);
  CHECK_THROWS_AS(m.Encode(SentenceInput{}), ContractViolation);
}

TEST_CASE("encode: zero weights give zero states") {
  Model<double> m = DoubleModel(Formalism::kDependency, DecoderVariant::kVanilla);
  m.params().SetZero();
  const auto enc = m.Encode(SentenceInput{{1, 2, 3}, {0, 1, 2}, {1, 2, 3}});
  CHECK(enc.H.isZero(0.0));
}

TEST_CASE("encode: tied directions mirror under reversal") {
  Model<double> m = DoubleModel(Formalism::kDependency, DecoderVariant::kVanilla, 17);
  auto& p = m.params();
  const int He = m.config().enc_hidden_dim;
  for (int l = 0; l < 2; ++l) {
    const std::string f = "enc.l" + std::to_string(l) + ".fwd", b = "enc.l" + std::to_string(l) + ".bwd";
    for (const char* part : {".R", ".b", ".peep", ".h0", ".c0"}) p.Get(b + part) = p.Get(f + part);
    if (l == 0) {
      p.Get(b + ".W") = p.Get(f + ".W");
    } else {
      // The second layer reads [fwd; bwd], which reversal swaps.
      auto Wf = p.Get(f + ".W").mat();
      auto Wb = p.Get(b + ".W").mat();
      Wb.leftCols(He) = Wf.rightCols(He);
      Wb.rightCols(He) = Wf.leftCols(He);
    }
  }
  const SentenceInput in{{1, 2, 3, 1}, {0, 1, 2, 2}, {1, 3, 2, 0}};
  SentenceInput rev = in;
  std::reverse(rev.words.begin(), rev.words.end());
  std::reverse(rev.fixed.begin(), rev.fixed.end());
  std::reverse(rev.pos.begin(), rev.pos.end());
  const auto a = m.Encode(in);
  const auto r = m.Encode(rev);
  for (int i = 0; i < 4; ++i) {
    CHECK((a.H.col(i).head(He) - r.H.col(3 - i).tail(He)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((a.H.col(i).tail(He) - r.H.col(3 - i).head(He)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("attend: singleton, uniform, scalar loop, empty") {
  ParamSet<double> p;
  AddAttentionParams(p, "att", 4, 3, 2);
  Randomize(p, 5);
  const auto w = AttentionView<double>::Bind(p, "att");
  std::vector<Vec> cols = {{0.1, 0.2, 0.3, 0.4}, {-1.0, 0.5, 0.0, 2.0}, {0.3, -0.3, 0.9, -0.1}};
  const Matrix<double> H = ToMatrix(cols);
  const Vector<double> s = Vector<double>::LinSpaced(3, -0.5, 0.5);

  const auto one = Attend<double>(w, H, s, 2, 2);
  REQUIRE(one.weights.size() == 1);
  CHECK(one.weights(0) == 1.0);
  CHECK(one.context == H.col(1));

  const auto full = Attend<double>(w, H, s, 1, 3);
  const auto [rctx, ralpha] = Ref{p}.Attend("att", cols, {-0.5, 0.0, 0.5}, 0, 2);
  CHECK(MaxDiff(full.weights, ralpha) < 1e-10);
  CHECK(MaxDiff(full.context, rctx) < 1e-10);
  CHECK(std::abs(full.weights.sum() - 1.0) < 1e-12);

  const auto empty = Attend<double>(w, H, s, 3, 2);
  CHECK(empty.weights.size() == 0);
  CHECK(empty.context.size() == 4);
  CHECK(empty.context.isZero(0.0));
  CHECK_THROWS_AS(Attend<double>(w, H, s, 0, 2), ContractViolation);
  CHECK_THROWS_AS(Attend<double>(w, H, s, 2, 4), ContractViolation);

  p.Get("att.U").values().assign(2, 0.0);
  const auto uni = Attend<double>(w, H, s, 1, 3);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(uni.weights(i) - 1.0 / 3) < 1e-15);
}

TEST_CASE("decode step: every variant matches the scalar loop") {
  for (auto f : {Formalism::kDependency, Formalism::kConstituent}) {
    for (auto d : kVariants) {
      CAPTURE(static_cast<int>(d));
      Model<double> m = DoubleModel(f, d, 31);
      const SentenceInput in{{1, 2}, {1, 0}, {1, 2}};
      const auto enc = m.Encode(in);
      const auto ctx = m.MakeContext(enc);
      const Ref ref{m.params()};
      const auto H = ref.Encode(in, 2);
      Vector<double> s = enc.s0, c = Vector<double>::Zero(m.config().dec_hidden_dim);
      Vec rs(s.data(), s.data() + s.size()), rc(c.size(), 0.0);
      const int prevs[] = {-1, 0, m.sizes().actions - 1};
      const int bounds[] = {0, 1, 2};
      for (int j = 0; j < 3; ++j) {
        StepRecord<double> rec;
        m.DecodeStep(ctx, s, c, prevs[j], bounds[j], rec);
        const auto st = ref.Decode(d, H, rs, rc, prevs[j], bounds[j]);
        CHECK(MaxDiff(rec.logits, st.logits) < 1e-10);
        CHECK(MaxDiff(rec.s(), st.s) < 1e-10);
        CHECK(std::abs(rec.probs.sum() - 1.0) < 1e-12);
        CHECK((rec.probs.array() >= 0.0).all());
        s = rec.s();
        c = rec.c();
        rs = st.s;
        rc = st.c;
      }
    }
  }
}

TEST_CASE("decode step: the first step reads the start sentinel") {
  Model<double> m = DoubleModel(Formalism::kDependency, DecoderVariant::kVanilla);
  const auto enc = m.Encode(SentenceInput{{1, 2}, {1, 0}, {1, 2}});
  const auto ctx = m.MakeContext(enc);
  const Vector<double> c = Vector<double>::Zero(m.config().dec_hidden_dim);
  StepRecord<double> a, b;
  m.DecodeStep(ctx, enc.s0, c, -1, 0, a);
  CHECK(a.v.segment(m.config().dec_hidden_dim, m.config().action_dim) ==
        m.params().Get("emb.action_start").vec());
  for (auto& x : m.params().Get("emb.action").values()) x += 1.0;
  m.DecodeStep(ctx, enc.s0, c, -1, 0, b);
  CHECK(a.logits == b.logits);
  CHECK_THROWS_AS(m.DecodeStep(ctx, enc.s0, c, -2, 0, b), ContractViolation);
  CHECK_THROWS_AS(m.DecodeStep(ctx, enc.s0, c, m.sizes().actions, 0, b), ContractViolation);
}

TEST_CASE("decode step: stack/queue boundaries") {
  const SentenceInput in{{1, 2, 3}, {1, 0, 2}, {1, 2, 3}};
  for (auto d : {DecoderVariant::kStackQueueAttention, DecoderVariant::kStackQueueAverage}) {
    Model<double> m = DoubleModel(Formalism::kDependency, d);
    const auto enc = m.Encode(in);
    const auto ctx = m.MakeContext(enc);
    const Vector<double> c = Vector<double>::Zero(m.config().dec_hidden_dim);
    StepRecord<double> r;
    m.DecodeStep(ctx, enc.s0, c, -1, 0, r);
    CHECK(r.att_a.empty());
    CHECK(r.att_a.context.isZero(0.0));
    CHECK(r.att_b.first == 0);
    CHECK(r.att_b.last == 2);
    CHECK(std::abs(r.att_b.alpha.sum() - 1.0) < 1e-12);

    m.DecodeStep(ctx, enc.s0, c, -1, 3, r);
    CHECK(r.att_b.empty());
    CHECK(r.att_b.context.isZero(0.0));
    CHECK(r.att_a.first == 0);
    CHECK(r.att_a.last == 2);
    CHECK(std::abs(r.att_a.alpha.sum() - 1.0) < 1e-12);

    CHECK_THROWS_AS(m.DecodeStep(ctx, enc.s0, c, -1, -1, r), ContractViolation);
    CHECK_THROWS_AS(m.DecodeStep(ctx, enc.s0, c, -1, 4, r), ContractViolation);
  }
}

TEST_CASE("average pooling over singletons returns the states") {
  Model<double> m = DoubleModel(Formalism::kDependency, DecoderVariant::kStackQueueAverage);
  const auto enc = m.Encode(SentenceInput{{1, 2}, {1, 0}, {1, 2}});
  const auto ctx = m.MakeContext(enc);
  StepRecord<double> r;
  m.DecodeStep(ctx, enc.s0, Vector<double>::Zero(m.config().dec_hidden_dim), -1, 1, r);
  CHECK(r.att_a.context == enc.H.col(0));
  CHECK(r.att_b.context == enc.H.col(1));
}

TEST_CASE("vanilla attention ignores the boundary") {
  Model<double> m = DoubleModel(Formalism::kDependency, DecoderVariant::kVanilla);
  const auto enc = m.Encode(SentenceInput{{1, 2, 3}, {1, 0, 2}, {1, 2, 3}});
  const auto ctx = m.MakeContext(enc);
  const Vector<double> c = Vector<double>::Zero(m.config().dec_hidden_dim);
  StepRecord<double> a, b;
  m.DecodeStep(ctx, enc.s0, c, -1, 0, a);
  m.DecodeStep(ctx, enc.s0, c, -1, 2, b);
  CHECK(a.logits == b.logits);
}

TEST_CASE("teacher-forced loss matches the scalar loop") {
  for (auto f : {Formalism::kDependency, Formalism::kConstituent}) {
    for (auto d : kVariants) {
      const Parser parser = testing::TinyParser(f, d);
      const Example ex = MakeExample(parser, testing::Single(f), 0);
      Model<double> m = DoubleModel(f, d, 41);
      const double loss = m.ForwardTeacherForced(ex.input, ex.actions, ex.boundaries);
      const double ref = Ref{m.params()}.Loss(m.config(), ex.input, ex.actions, ex.boundaries);
      CHECK(std::abs(loss - ref) < 1e-10);
    }
  }
}

TEST_CASE("backward: contract and softmax cross-entropy gradient") {
  const Parser parser = testing::TinyParser(Formalism::kDependency, DecoderVariant::kVanilla);
  const Example ex = MakeExample(parser, testing::Single(Formalism::kDependency), 0);
  Model<double> m = DoubleModel(Formalism::kDependency, DecoderVariant::kVanilla);
  ParamSet<double> g = m.params().ZerosLike();
  Tape<double> tape;
  CHECK_THROWS_AS(m.Backward(tape, g), ContractViolation);

  m.ForwardTeacherForced(ex.input, ex.actions, ex.boundaries, &tape);
  m.Backward(tape, g);
  // d/d out.b of -sum log p = sum_j (p_j - onehot_j)
  Vector<double> expected = Vector<double>::Zero(m.sizes().actions);
  for (std::size_t j = 0; j < ex.actions.size(); ++j) {
    expected += tape.steps[j].probs;
    expected(ex.actions[j]) -= 1.0;
  }
  CHECK((g.Get("out.b").vec() - expected).cwiseAbs().maxCoeff() < 1e-14);
  for (double x : g.Get("emb.fixed").values()) CHECK(x == 0.0);
}

TEST_CASE("gradient check: every block, both formalisms, all decoders") {
  for (auto f : {Formalism::kDependency, Formalism::kConstituent}) {
    for (auto d : kVariants) {
      const Parser parser = testing::TinyParser(f, d);
      const Example ex = MakeExample(parser, testing::Single(f), 0);
      Model<double> m = parser.model.Cast<double>();
      for (double l2 : {0.0, 1e-2}) {
        const auto r = testing::CheckGradients(m, ex, l2);
        CAPTURE(r.worst_param);
        CHECK(r.worst_error <= 1e-4);
        CHECK(r.fixed_untouched);
        CHECK(r.checked == static_cast<long>(m.params().NumValues(true)));
      }
    }
  }
}

TEST_CASE("float and double forward agree") {
  const Parser parser = testing::TinyParser(Formalism::kConstituent, DecoderVariant::kStackQueueAttention);
  const Example ex = MakeExample(parser, testing::Single(Formalism::kConstituent), 0);
  const float lf = parser.model.ForwardTeacherForced(ex.input, ex.actions, ex.boundaries);
  const double ld = parser.model.Cast<double>().ForwardTeacherForced(ex.input, ex.actions, ex.boundaries);
  CHECK(std::abs(lf - ld) < 1e-4 * std::max(1.0, ld));
}
