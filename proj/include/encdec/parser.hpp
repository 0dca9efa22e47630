#pragma once

#include <string>
#include <vector>

#include "encdec/config.hpp"
#include "encdec/neural/model.hpp"
#include "encdec/transition.hpp"
#include "encdec/vocabulary.hpp"

namespace encdec {

// A model together with the symbol tables it was trained with.
struct Parser {
  TrainConfig config;
  Vocabulary vocab;
  SymbolTable fixed_words;  // row r+1 of emb.fixed belongs to fixed_words[r]
  Model<float> model;

  Formalism formalism() const { return config.model.formalism; }
  ActionSet actions() const { return vocab.actions(); }
  SentenceInput Featurize(const std::vector<Token>& tokens) const;
  ParserState InitialState(const std::vector<Token>& tokens) const;
};

// Fresh, randomly initialized parser. `vectors` may be null.
Parser MakeParser(const TrainConfig& config, Vocabulary vocab, const PretrainedVectors* vectors);

// Teacher-forcing targets for one gold sentence.
struct Example {
  std::size_t index = 0;  // position in the source treebank
  SentenceInput input;
  std::vector<int> actions;
  std::vector<int> boundaries;  // stack/queue split before each action
};

// Runs the oracle and simulates it to record boundaries. Throws OracleError
// for underivable gold structures (non-projective, unseen labels).
Example MakeExample(const Parser& parser, const Treebank& treebank, std::size_t index);

// Boundaries of the states visited by `actions`, checking legality.
std::vector<int> SimulateBoundaries(ParserState state, const std::vector<Action>& actions);

}  // namespace encdec
