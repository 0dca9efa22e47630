#include "encdec/inference.hpp"

#include <sstream>
#include <stdexcept>

#include "encdec/error.hpp"

namespace encdec {

int MaskedArgmax(const std::vector<float>& probs, const std::vector<bool>& legal) {
  int best = -1;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    if (!legal[k]) continue;
    if (best < 0 || probs[k] > probs[best]) best = static_cast<int>(k);
  }
  return best;
}

ParseResult Parse(const Parser& parser, const std::vector<Token>& tokens) {
  if (tokens.empty()) throw ContractViolation("cannot parse an empty sentence");
  const Model<float>& model = parser.model;
  const ActionSet set = parser.actions();
  const SentenceInput input = parser.Featurize(tokens);
  const EncoderOutput<float> enc = model.Encode(input);
  const DecoderContext<float> ctx = model.MakeContext(enc);

  ParserState state = parser.InitialState(tokens);
  ParseResult result;
  Vector<float> s = enc.s0;
  Vector<float> c = Vector<float>::Zero(s.size());
  int prev = -1;
  const std::size_t limit = 10 * tokens.size() + 100;
  StepRecord<float> rec;
  std::vector<bool> legal(set.size());
  while (!state.IsTerminal()) {
    if (result.actions.size() >= limit) {
      throw RunawayDecodeError("runaway decode: more than " + std::to_string(limit) + " steps");
    }
    const int t = state.Boundary();
    model.DecodeStep(ctx, s, c, prev, t, rec);
    ParseStep step;
    step.boundary = t;
    step.probs.assign(rec.probs.data(), rec.probs.data() + rec.probs.size());
    for (int k = 0; k < set.size(); ++k) legal[k] = state.IsLegal(set.At(k));
    const int id = MaskedArgmax(step.probs, legal);
    if (id < 0) throw std::logic_error("no legal action in state " + state.Summary());
    step.action = id;
    step.first_a = rec.att_a.first;
    step.last_a = rec.att_a.last;
    step.alpha_a.assign(rec.att_a.alpha.data(), rec.att_a.alpha.data() + rec.att_a.alpha.size());
    if (parser.config.model.decoder != DecoderVariant::kVanilla) {
      step.first_b = rec.att_b.first;
      step.last_b = rec.att_b.last;
      step.alpha_b.assign(rec.att_b.alpha.data(), rec.att_b.alpha.data() + rec.att_b.alpha.size());
    }
    const Action a = set.At(id);
    state.Apply(a);
    result.actions.push_back(a);
    result.steps.push_back(std::move(step));
    s = rec.lstm.h.col(0);
    c = rec.lstm.c.col(0);
    prev = id;
  }
  if (const DepState* d = state.dep()) {
    result.dep = d->ReadOut(parser.vocab.labels, parser.vocab.root_label);
  } else {
    result.cons = state.cons()->ReadOut();
  }
  return result;
}

std::string FormatAttentionTrace(const Parser& parser, const std::vector<Token>& tokens,
                                 const ParseResult& result) {
  const int n = static_cast<int>(tokens.size());
  const bool vanilla = parser.config.model.decoder == DecoderVariant::kVanilla;
  const SymbolTable& labels = parser.vocab.labels;
  const ActionSet set = parser.actions();
  std::ostringstream os;
  os << "step\taction\tt\tsegment";
  for (const auto& tok : tokens) os << '\t' << tok.form;
  os << '\n';
  auto row = [&](std::size_t j, const ParseStep& st, const char* segment, int first, int last,
                 const std::vector<float>& alpha) {
    os << j + 1 << '\t' << FormatAction(set.At(st.action), labels) << '\t' << st.boundary << '\t' << segment;
    for (int i = 0; i < n; ++i) {
      os << '\t' << ((i >= first && i <= last) ? alpha[i - first] : 0.0f);
    }
    os << '\n';
  };
  for (std::size_t j = 0; j < result.steps.size(); ++j) {
    const ParseStep& st = result.steps[j];
    if (vanilla) {
      row(j, st, "all", st.first_a, st.last_a, st.alpha_a);
    } else {
      row(j, st, "stack", st.first_a, st.last_a, st.alpha_a);
      row(j, st, "queue", st.first_b, st.last_b, st.alpha_b);
    }
  }
  return os.str();
}

ConstTree FlatTree(const Parser& parser, const std::vector<Token>& tokens) {
  std::vector<ConstTree> leaves;
  for (const auto& t : tokens) leaves.push_back(ConstTree::Leaf(t));
  const std::string label = parser.vocab.labels.size() > 0 ? parser.vocab.labels.Symbol(0) : "X";
  return ConstTree::Node(label, std::move(leaves));
}

Treebank ParseTreebank(const Parser& parser, const Treebank& input, std::size_t* runaways) {
  Treebank out;
  out.constituent = parser.formalism() == Formalism::kConstituent;
  for (std::size_t i = 0; i < input.size(); ++i) {
    const std::vector<Token> tokens = input.Tokens(i);
    ParseResult r;
    try {
      r = Parse(parser, tokens);
    } catch (const RunawayDecodeError&) {
      // Only the constituent system can loop (unary NT chains); the
      // dependency system always stops after 2n - 1 actions.
      if (runaways) ++*runaways;
      out.cons.push_back(FlatTree(parser, tokens));
      continue;
    }
    if (r.dep) {
      out.dep.push_back(std::move(*r.dep));
    } else {
      out.cons.push_back(std::move(*r.cons));
    }
  }
  return out;
}

}  // namespace encdec
