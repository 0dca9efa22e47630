#include "encdec/parser.hpp"

#include "encdec/error.hpp"
#include "encdec/oracle.hpp"

namespace encdec {

SentenceInput Parser::Featurize(const std::vector<Token>& tokens) const {
  SentenceInput in;
  for (const auto& t : tokens) {
    in.words.push_back(vocab.WordId(t.form));
    in.fixed.push_back(fixed_words.Find(t.form) + 1);
    in.pos.push_back(vocab.PosId(t.pos));
  }
  return in;
}

ParserState Parser::InitialState(const std::vector<Token>& tokens) const {
  if (formalism() == Formalism::kDependency) return ParserState(DepState(MakeTokens(tokens), vocab.labels.size()));
  return ParserState(ConstState(MakeTokens(tokens), vocab.labels, config.model.max_open_nts));
}

Parser MakeParser(const TrainConfig& config, Vocabulary vocab, const PretrainedVectors* vectors) {
  config.Validate();
  if (vocab.formalism != config.model.formalism) throw ContractViolation("vocabulary formalism differs from config");
  Parser p;
  p.config = config;
  p.vocab = std::move(vocab);
  VocabSizes sizes;
  sizes.words = p.vocab.words.size();
  sizes.pos = p.vocab.pos.size();
  sizes.labels = std::max(1, p.vocab.labels.size());
  sizes.actions = p.vocab.actions().size();
  if (vectors) {
    if (vectors->dim != config.model.fixed_dim) {
      throw ContractViolation("pretrained vectors have dimension " + std::to_string(vectors->dim) +
                              " but fixed_dim is " + std::to_string(config.model.fixed_dim));
    }
    p.fixed_words = vectors->words;
    sizes.fixed = vectors->words.size() + 1;
  }
  p.model = Model<float>(config.model, sizes);
  p.model.Initialize(config.seed);
  if (vectors) p.model.SetFixedEmbeddings(vectors->vectors);
  return p;
}

std::vector<int> SimulateBoundaries(ParserState state, const std::vector<Action>& actions) {
  std::vector<int> out;
  out.reserve(actions.size());
  for (const auto& a : actions) {
    out.push_back(state.Boundary());
    state.Apply(a);
  }
  if (!state.IsTerminal()) throw OracleError("action sequence does not reach a terminal state");
  return out;
}

Example MakeExample(const Parser& parser, const Treebank& treebank, std::size_t index) {
  if (treebank.constituent != (parser.formalism() == Formalism::kConstituent)) {
    throw ContractViolation("treebank formalism differs from the parser");
  }
  Example ex;
  ex.index = index;
  const std::vector<Token> tokens = treebank.Tokens(index);
  ex.input = parser.Featurize(tokens);
  const std::vector<Action> gold = treebank.constituent ? ConstOracle(treebank.cons[index], parser.vocab.labels)
                                                        : DepOracle(treebank.dep[index], parser.vocab.labels);
  const ActionSet set = parser.actions();
  for (const auto& a : gold) ex.actions.push_back(set.Id(a));
  ex.boundaries = SimulateBoundaries(parser.InitialState(tokens), gold);
  return ex;
}

}  // namespace encdec
