#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace encdec {

struct Token {
  std::string form;
  std::string pos;
  int index = 0;  // 1-based position in the sentence

  bool operator==(const Token&) const = default;
};

// A dependency-annotated sentence. heads[i] is the 1-based head of token
// i+1, with 0 marking the root.
struct DepSentence {
  std::vector<Token> tokens;
  std::vector<int> heads;
  std::vector<std::string> labels;

  std::size_t size() const { return tokens.size(); }
  bool operator==(const DepSentence&) const = default;
};

// Throws ValidationError unless the sentence forms a single-rooted tree
// over all tokens with contiguous 1-based indices.
void ValidateDepSentence(const DepSentence& sentence);

// True when no two arcs cross (arc-standard can derive the tree).
bool IsProjective(const DepSentence& sentence);

// Constituent tree whose leaves are POS-tagged tokens. Preterminals are not
// separate nodes: `(NN dog)` is read as a single leaf.
class ConstTree {
 public:
  ConstTree() = default;
  static ConstTree Leaf(Token token);
  static ConstTree Node(std::string label, std::vector<ConstTree> children);

  bool is_leaf() const { return is_leaf_; }
  const std::string& label() const { return label_; }
  const Token& token() const { return token_; }
  const std::vector<ConstTree>& children() const { return children_; }
  std::vector<ConstTree>& mutable_children() { return children_; }

  std::vector<Token> Leaves() const;
  std::size_t NumLeaves() const;

  bool operator==(const ConstTree&) const = default;

 private:
  bool is_leaf_ = false;
  std::string label_;
  Token token_;
  std::vector<ConstTree> children_;
};

// Throws ValidationError on empty internal nodes or leaf indices that do not
// run 1..n left to right.
void ValidateConstTree(const ConstTree& tree);

// CoNLL-X: ten tab-separated columns, blank line between sentences. Uses
// ID, FORM, POS (column 5), HEAD and DEPREL.
std::vector<DepSentence> ReadConll(std::string_view text);
std::string WriteConll(const std::vector<DepSentence>& sentences);

// One tree per line, `(S (NP (NNP Tom)) ...)`.
std::vector<ConstTree> ReadBrackets(std::string_view text);
ConstTree ParseBracketTree(std::string_view line);
std::string WriteBracketTree(const ConstTree& tree);
std::string WriteBrackets(const std::vector<ConstTree>& trees);

// Drops functional suffixes: NP-SBJ-1 -> NP, but -NONE- stays.
std::string StripFunctionTags(std::string_view label);

// A treebank in either formalism; exactly one of `dep` / `cons` is used.
struct Treebank {
  bool constituent = false;
  std::vector<DepSentence> dep;
  std::vector<ConstTree> cons;

  std::size_t size() const { return constituent ? cons.size() : dep.size(); }
  std::vector<Token> Tokens(std::size_t i) const { return constituent ? cons[i].Leaves() : dep[i].tokens; }
};

// CoNLL for dependency, brackets for constituent.
Treebank ReadTreebank(const std::string& path, bool constituent);
void WriteTreebank(const std::string& path, const Treebank& treebank);

std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, std::string_view content);

}  // namespace encdec
