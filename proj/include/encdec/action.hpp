#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace encdec {

enum class Formalism { kDependency, kConstituent };

std::string FormalismName(Formalism f);
Formalism ParseFormalism(std::string_view name);

// Dense 0-based symbol ids, stable in insertion order.
class SymbolTable {
 public:
  int Add(std::string_view symbol);
  // -1 when absent.
  int Find(std::string_view symbol) const;
  const std::string& Symbol(int id) const;
  int size() const { return static_cast<int>(symbols_.size()); }
  const std::vector<std::string>& symbols() const { return symbols_; }

  bool operator==(const SymbolTable& other) const { return symbols_ == other.symbols_; }

 private:
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, int> ids_;
};

struct Action {
  enum class Kind { kShift, kLeftArc, kRightArc, kNT, kReduce };

  Kind kind = Kind::kShift;
  int label = -1;  // relation id for arcs, nonterminal id for NT

  static Action Shift() { return {Kind::kShift, -1}; }
  static Action LeftArc(int rel) { return {Kind::kLeftArc, rel}; }
  static Action RightArc(int rel) { return {Kind::kRightArc, rel}; }
  static Action NT(int nt) { return {Kind::kNT, nt}; }
  static Action Reduce() { return {Kind::kReduce, -1}; }

  bool operator==(const Action&) const = default;
};

// Maps actions to contiguous output ids.
//   dependency:  0 Shift, 1..L LeftArc(l), L+1..2L RightArc(l)
//   constituent: 0 Shift, 1 Reduce, 2..L+1 NT(l)
class ActionSet {
 public:
  ActionSet(Formalism formalism, int num_labels);

  Formalism formalism() const { return formalism_; }
  int num_labels() const { return num_labels_; }
  int size() const;
  int Id(const Action& action) const;
  Action At(int id) const;

 private:
  Formalism formalism_;
  int num_labels_;
};

// Action text: SHIFT, LEFT-ARC(nsubj), RIGHT-ARC(dobj), NT(S), REDUCE.
std::string FormatAction(const Action& action, const SymbolTable& labels);
Action ParseAction(std::string_view text, const SymbolTable& labels);
std::string FormatActions(const std::vector<Action>& actions, const SymbolTable& labels);
std::vector<Action> ParseActions(std::string_view line, const SymbolTable& labels);

}  // namespace encdec
