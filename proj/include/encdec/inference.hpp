#pragma once

#include <optional>
#include <string>
#include <vector>

#include "encdec/parser.hpp"

namespace encdec {

// One greedy decoder step. Attention weights are indexed by 0-based word
// position relative to their segment start.
struct ParseStep {
  int action = 0;
  int boundary = 0;
  int first_a = 0, last_a = -1;  // full range (vanilla) or stack segment
  int first_b = 0, last_b = -1;  // queue segment
  std::vector<float> alpha_a, alpha_b;
  std::vector<float> probs;  // unmasked model distribution
};

struct ParseResult {
  std::vector<Action> actions;
  std::vector<ParseStep> steps;
  std::optional<DepSentence> dep;
  std::optional<ConstTree> cons;
};

// Greedy decoding with illegal actions masked out; ties go to the lowest id.
// Throws ContractViolation for an empty sentence and RunawayDecodeError when
// decoding exceeds 10n + 100 steps.
ParseResult Parse(const Parser& parser, const std::vector<Token>& tokens);

// Argmax over legal ids of a distribution (lowest id on ties); -1 if none.
int MaskedArgmax(const std::vector<float>& probs, const std::vector<bool>& legal);

// Tab-separated attention matrix: a header row of words, then one row per
// step and segment with the weight of every word (0 outside the segment).
std::string FormatAttentionTrace(const Parser& parser, const std::vector<Token>& tokens,
                                 const ParseResult& result);

// Root label over the bare leaves. Its only bracket is the root, so it
// scores as an empty prediction.
ConstTree FlatTree(const Parser& parser, const std::vector<Token>& tokens);

// Parses every sentence of a treebank, keeping the gold tokens. A sentence
// whose decode runs away is replaced by FlatTree and counted in `runaways`.
Treebank ParseTreebank(const Parser& parser, const Treebank& input, std::size_t* runaways = nullptr);

}  // namespace encdec
