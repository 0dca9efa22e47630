#pragma once

#include <cstdint>
#include <vector>

#include "encdec/treebank.hpp"

namespace encdec {

// A small head-annotated English-like grammar. Each derivation yields a
// projective labeled dependency tree and the matching constituent tree.
// Prepositional phrases attach to the verb or to the object noun depending
// on the lexical class of the preposition's object, so attachment is
// learnable but not local.
struct SyntheticOptions {
  std::size_t sentences = 100;
  std::uint64_t seed = 1;
  int min_length = 6;
  int max_length = 30;
};

struct SyntheticCorpus {
  std::vector<DepSentence> dep;
  std::vector<ConstTree> cons;
};

SyntheticCorpus GenerateCorpus(const SyntheticOptions& options);

}  // namespace encdec
