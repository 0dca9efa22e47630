#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "encdec/action.hpp"
#include "encdec/treebank.hpp"

namespace encdec {

inline constexpr int kDefaultMaxOpenNts = 100;

using TokenSeq = std::shared_ptr<const std::vector<Token>>;

// Arc-standard configuration (S, Q, L). Words are 1-based; the queue is the
// suffix of the sentence starting at next().
class DepState {
 public:
  DepState(TokenSeq tokens, int num_labels);

  int size() const { return static_cast<int>(tokens_->size()); }
  const std::vector<int>& stack() const { return stack_; }
  int next() const { return next_; }
  bool queue_empty() const { return next_ > size(); }
  // 0 when unattached.
  int head(int word) const { return heads_[word - 1]; }
  int relation(int word) const { return rels_[word - 1]; }
  int num_arcs() const { return num_arcs_; }
  int num_labels() const { return num_labels_; }
  const std::vector<Token>& tokens() const { return *tokens_; }

  bool IsLegal(const Action& a) const;
  std::vector<Action> LegalActions() const;
  void Apply(const Action& a);
  bool IsTerminal() const { return queue_empty() && stack_.size() == 1; }
  // Sentence index of the stack top, 0 for an empty stack.
  int Boundary() const { return stack_.empty() ? 0 : stack_.back(); }

  // Throws ContractViolation unless the state is terminal.
  DepSentence ReadOut(const SymbolTable& relations, const std::string& root_label) const;
  // Throws ContractViolation if a token is missing from (or repeated across)
  // stack, queue and attached dependents.
  void CheckInvariants() const;
  std::string Summary() const;

 private:
  TokenSeq tokens_;
  int num_labels_;
  std::vector<int> stack_;
  int next_ = 1;
  std::vector<int> heads_;
  std::vector<int> rels_;
  int num_arcs_ = 0;
};

struct OpenNT {
  int label;
};
struct Terminal {
  Token token;
};
struct Completed {
  ConstTree tree;
};
using StackItem = std::variant<OpenNT, Terminal, Completed>;

// Top-down configuration (S, Q, n).
class ConstState {
 public:
  ConstState(TokenSeq tokens, const SymbolTable& nonterminals, int max_open_nts = kDefaultMaxOpenNts);

  int size() const { return static_cast<int>(tokens_->size()); }
  const std::vector<StackItem>& stack() const { return stack_; }
  int next() const { return next_; }
  bool queue_empty() const { return next_ > size(); }
  int open_count() const { return open_count_; }
  int max_open_nts() const { return max_open_nts_; }
  const std::vector<Token>& tokens() const { return *tokens_; }

  bool IsLegal(const Action& a) const;
  std::vector<Action> LegalActions() const;
  void Apply(const Action& a);
  bool IsTerminal() const { return queue_empty() && stack_.size() == 1 && open_count_ == 0; }
  // Every shifted word stays dominated by some stack item, so the stack
  // segment ends at the most recently shifted word.
  int Boundary() const { return next_ - 1; }

  ConstTree ReadOut() const;
  void CheckInvariants() const;
  std::string Summary() const;

 private:
  TokenSeq tokens_;
  const SymbolTable* nonterminals_;
  int max_open_nts_;
  std::vector<StackItem> stack_;
  int next_ = 1;
  int open_count_ = 0;
};

// Formalism-agnostic handle used by training and decoding.
class ParserState {
 public:
  explicit ParserState(DepState s) : state_(std::move(s)) {}
  explicit ParserState(ConstState s) : state_(std::move(s)) {}

  bool IsLegal(const Action& a) const;
  std::vector<Action> LegalActions() const;
  void Apply(const Action& a);
  bool IsTerminal() const;
  int Boundary() const;
  int size() const;
  std::string Summary() const;

  const DepState* dep() const { return std::get_if<DepState>(&state_); }
  const ConstState* cons() const { return std::get_if<ConstState>(&state_); }

 private:
  std::variant<DepState, ConstState> state_;
};

TokenSeq MakeTokens(std::vector<Token> tokens);

// Simulates `actions` from the initial state, checking legality at each step.
DepState RunDep(TokenSeq tokens, int num_labels, const std::vector<Action>& actions);
ConstState RunConst(TokenSeq tokens, const SymbolTable& nonterminals, const std::vector<Action>& actions,
                    int max_open_nts = kDefaultMaxOpenNts);

}  // namespace encdec
