#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "doctest.h"
#include "encdec/error.hpp"
#include "encdec/inference.hpp"
#include "encdec/oracle.hpp"
#include "encdec/training.hpp"
#include "test_support.hpp"

using namespace encdec;

namespace {

TrainConfig SmallConfig(Formalism f, DecoderVariant d, int epochs) {
  TrainConfig c;
  c.model = testing::SmallModel(f, d);
  c.epochs = epochs;
  c.min_freq = 1;
  c.seed = 3;
  return c;
}

std::vector<std::vector<std::string>> Rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, '\t')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

const DecoderVariant kVariants[] = {DecoderVariant::kVanilla, DecoderVariant::kStackQueueAverage,
                                    DecoderVariant::kStackQueueAttention};

}  // namespace

TEST_CASE("masked argmax") {
  CHECK(MaskedArgmax({0.1f, 0.5f, 0.4f}, {true, true, true}) == 1);
  CHECK(MaskedArgmax({0.1f, 0.5f, 0.4f}, {true, false, true}) == 2);
  CHECK(MaskedArgmax({0.3f, 0.3f, 0.4f}, {true, true, false}) == 0);
  CHECK(MaskedArgmax({0.2f, 0.4f, 0.4f}, {true, true, true}) == 1);
  CHECK(MaskedArgmax({0.2f, 0.8f}, {false, false}) == -1);
}

TEST_CASE("one-word dependency sentence") {
  const Parser p = testing::TinyParser(Formalism::kDependency, DecoderVariant::kStackQueueAttention);
  const ParseResult r = Parse(p, {{"Tom", "NNP", 1}});
  CHECK(r.actions == std::vector<Action>{Action::Shift()});
  REQUIRE(r.dep);
  CHECK(r.dep->heads == std::vector<int>{0});
  CHECK(r.dep->labels == std::vector<std::string>{"root"});
  CHECK_THROWS_AS(Parse(p, {}), ContractViolation);
}

TEST_CASE("untrained parsers emit valid structures") {
  const Treebank dep = testing::Synthetic(Formalism::kDependency, 30, 5, 20);
  const Treebank cons = testing::Synthetic(Formalism::kConstituent, 30, 5, 20);
  for (auto d : kVariants) {
    const Parser dp = MakeParser(SmallConfig(Formalism::kDependency, d, 0), BuildDepVocab(dep.dep, 1), nullptr);
    for (const auto& s : dep.dep) {
      const ParseResult r = Parse(dp, s.tokens);
      REQUIRE(r.dep);
      ValidateDepSentence(*r.dep);
      CHECK(r.actions.size() == 2 * s.size() - 1);
      CHECK(r.steps.size() == r.actions.size());
      CHECK(r.dep->tokens == s.tokens);
    }
    const Parser cp = MakeParser(SmallConfig(Formalism::kConstituent, d, 0), BuildConstVocab(cons.cons, 1), nullptr);
    std::size_t runaways = 0;
    const Treebank out = ParseTreebank(cp, cons, &runaways);
    REQUIRE(out.cons.size() == cons.cons.size());
    for (std::size_t i = 0; i < out.cons.size(); ++i) {
      ValidateConstTree(out.cons[i]);
      CHECK(out.cons[i].Leaves() == cons.cons[i].Leaves());
    }
    CHECK(runaways <= cons.size());
  }
}

TEST_CASE("masking only intervenes on illegal picks") {
  const Treebank dep = testing::Synthetic(Formalism::kDependency, 10, 6, 15);
  const Parser p = MakeParser(SmallConfig(Formalism::kDependency, DecoderVariant::kStackQueueAttention, 0),
                              BuildDepVocab(dep.dep, 1), nullptr);
  const ActionSet set = p.actions();
  for (const auto& s : dep.dep) {
    const ParseResult r = Parse(p, s.tokens);
    ParserState state = p.InitialState(s.tokens);
    for (std::size_t j = 0; j < r.steps.size(); ++j) {
      const auto& probs = r.steps[j].probs;
      CHECK(std::abs(std::accumulate(probs.begin(), probs.end(), 0.0) - 1.0) < 1e-5);
      const int unmasked = static_cast<int>(std::max_element(probs.begin(), probs.end()) - probs.begin());
      if (state.IsLegal(set.At(unmasked))) CHECK(r.steps[j].action == unmasked);
      CHECK(r.steps[j].boundary == state.Boundary());
      state.Apply(r.actions[j]);
    }
    CHECK(state.IsTerminal());
  }
}

TEST_CASE("parse is deterministic") {
  const Treebank tb = testing::Synthetic(Formalism::kConstituent, 5, 7, 12);
  const Parser p = MakeParser(SmallConfig(Formalism::kConstituent, DecoderVariant::kStackQueueAttention, 0),
                              BuildConstVocab(tb.cons, 1), nullptr);
  for (std::size_t i = 0; i < tb.size(); ++i) {
    try {
      const ParseResult a = Parse(p, tb.Tokens(i));
      const ParseResult b = Parse(p, tb.Tokens(i));
      CHECK(a.actions == b.actions);
      CHECK(*a.cons == *b.cons);
    } catch (const RunawayDecodeError&) {
      CHECK_THROWS_AS(Parse(p, tb.Tokens(i)), RunawayDecodeError);
    }
  }
}

TEST_CASE("attention trace rows") {
  for (auto d : kVariants) {
    const Parser p = testing::TinyParser(Formalism::kDependency, d);
    const auto tokens = testing::ThreeWordDep().tokens;
    const ParseResult r = Parse(p, tokens);
    const auto rows = Rows(FormatAttentionTrace(p, tokens, r));
    const std::size_t per_step = d == DecoderVariant::kVanilla ? 1 : 2;
    REQUIRE(rows.size() == 1 + per_step * r.actions.size());
    CHECK(rows[0] == std::vector<std::string>{"step", "action", "t", "segment", "Tom", "likes", "tomatoes"});
    for (std::size_t k = 1; k < rows.size(); ++k) {
      REQUIRE(rows[k].size() == 7);
      double sum = 0.0;
      for (int i = 4; i < 7; ++i) {
        const double v = std::stod(rows[k][i]);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        sum += v;
      }
      const int t = std::stoi(rows[k][2]);
      const std::string& seg = rows[k][3];
      const bool empty = (seg == "stack" && t == 0) || (seg == "queue" && t == 3);
      if (empty) {
        CHECK(sum == 0.0);
      } else {
        CHECK(std::abs(sum - 1.0) < 1e-5);
      }
      if (seg == "stack") {
        for (int i = t; i < 3; ++i) CHECK(std::stod(rows[k][4 + i]) == 0.0);
      } else if (seg == "queue") {
        for (int i = 0; i < t; ++i) CHECK(std::stod(rows[k][4 + i]) == 0.0);
      }
    }
  }
}

TEST_CASE("memorized sentence parses to gold with a nine-step trace") {
  const DepSentence gold = testing::FigureOneDep();
  Treebank one;
  one.dep = {gold};
  TrainConfig cfg = SmallConfig(Formalism::kDependency, DecoderVariant::kStackQueueAttention, 300);
  cfg.stop_at_action_accuracy = 100.0;
  const TrainResult tr = Train(cfg, one, one);
  const ParseResult r = Parse(tr.parser, gold.tokens);
  CHECK(r.actions == DepOracle(gold, tr.parser.vocab.labels));
  REQUIRE(r.dep);
  CHECK(*r.dep == gold);
  const auto rows = Rows(FormatAttentionTrace(tr.parser, gold.tokens, r));
  CHECK(rows.size() == 1 + 2 * 9);
  CHECK(rows.back()[0] == "9");

  Treebank cone;
  cone.constituent = true;
  cone.cons = {testing::FigureOneConst()};
  TrainConfig ccfg = SmallConfig(Formalism::kConstituent, DecoderVariant::kStackQueueAttention, 300);
  ccfg.stop_at_action_accuracy = 100.0;
  const TrainResult ctr = Train(ccfg, cone, cone);
  const ParseResult cr = Parse(ctr.parser, cone.cons[0].Leaves());
  REQUIRE(cr.cons);
  CHECK(*cr.cons == cone.cons[0]);
}

TEST_CASE("flat fallback tree") {
  const Parser p = testing::TinyParser(Formalism::kConstituent, DecoderVariant::kVanilla);
  const auto tokens = testing::ThreeWordConst().Leaves();
  const ConstTree t = FlatTree(p, tokens);
  ValidateConstTree(t);
  CHECK(t.Leaves() == tokens);
  CHECK(t.label() == "S");
}
