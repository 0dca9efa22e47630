#pragma once

#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "encdec/action.hpp"
#include "encdec/treebank.hpp"

namespace encdec {

inline constexpr std::string_view kUnknown = "<unk>";

// Symbol inventories for one formalism. Word and POS id 0 is the unknown
// symbol. `labels` holds dependency relations (excluding the root relation,
// which no action produces) or nonterminals.
struct Vocabulary {
  Formalism formalism = Formalism::kDependency;
  SymbolTable words;
  SymbolTable pos;
  SymbolTable labels;
  std::string root_label = "root";
  std::map<std::string, int> word_freq;

  int WordId(std::string_view form) const;
  int PosId(std::string_view tag) const;
  ActionSet actions() const { return ActionSet(formalism, labels.size()); }

  bool operator==(const Vocabulary& other) const;
};

Vocabulary BuildDepVocab(const std::vector<DepSentence>& treebank, int min_freq = 2);
Vocabulary BuildConstVocab(const std::vector<ConstTree>& treebank, int min_freq = 2);

// Line-oriented `kind<TAB>symbol<TAB>id` text. Frequency rows store the
// count in the third column.
std::string SaveVocabulary(const Vocabulary& vocab);
Vocabulary LoadVocabulary(std::string_view text);

// Fixed (never trained) word vectors. Row 0 of the derived table is the
// zero vector used for words without a pretrained entry.
struct PretrainedVectors {
  int dim = 0;
  SymbolTable words;
  std::vector<std::vector<float>> vectors;
  int duplicates = 0;

  // 0 when the word has no vector; otherwise 1 + its row.
  int FixedId(std::string_view form) const;
};

PretrainedVectors LoadVectors(std::string_view text);

}  // namespace encdec
