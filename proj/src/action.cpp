#include "encdec/action.hpp"

#include <optional>
#include <sstream>
#include <stdexcept>

#include "encdec/error.hpp"

namespace encdec {

std::string FormalismName(Formalism f) {
  return f == Formalism::kDependency ? "dependency" : "constituent";
}

Formalism ParseFormalism(std::string_view name) {
  if (name == "dependency" || name == "dep") return Formalism::kDependency;
  if (name == "constituent" || name == "const") return Formalism::kConstituent;
  throw std::invalid_argument("unknown formalism '" + std::string(name) + "'");
}

int SymbolTable::Add(std::string_view symbol) {
  auto it = ids_.find(std::string(symbol));
  if (it != ids_.end()) return it->second;
  const int id = static_cast<int>(symbols_.size());
  symbols_.emplace_back(symbol);
  ids_.emplace(symbols_.back(), id);
  return id;
}

int SymbolTable::Find(std::string_view symbol) const {
  auto it = ids_.find(std::string(symbol));
  return it == ids_.end() ? -1 : it->second;
}

const std::string& SymbolTable::Symbol(int id) const {
  if (id < 0 || id >= size()) throw ContractViolation("symbol id " + std::to_string(id) + " out of range");
  return symbols_[id];
}

ActionSet::ActionSet(Formalism formalism, int num_labels)
    : formalism_(formalism), num_labels_(num_labels) {}

int ActionSet::size() const {
  return formalism_ == Formalism::kDependency ? 1 + 2 * num_labels_ : 2 + num_labels_;
}

int ActionSet::Id(const Action& a) const {
  auto check_label = [&] {
    if (a.label < 0 || a.label >= num_labels_) {
      throw ContractViolation("action label " + std::to_string(a.label) + " out of range");
    }
  };
  if (formalism_ == Formalism::kDependency) {
    switch (a.kind) {
      case Action::Kind::kShift: return 0;
      case Action::Kind::kLeftArc: check_label(); return 1 + a.label;
      case Action::Kind::kRightArc: check_label(); return 1 + num_labels_ + a.label;
      default: break;
    }
  } else {
    switch (a.kind) {
      case Action::Kind::kShift: return 0;
      case Action::Kind::kReduce: return 1;
      case Action::Kind::kNT: check_label(); return 2 + a.label;
      default: break;
    }
  }
  throw ContractViolation("action kind not available in " + FormalismName(formalism_) + " mode");
}

Action ActionSet::At(int id) const {
  if (id < 0 || id >= size()) throw ContractViolation("action id " + std::to_string(id) + " out of range");
  if (formalism_ == Formalism::kDependency) {
    if (id == 0) return Action::Shift();
    if (id <= num_labels_) return Action::LeftArc(id - 1);
    return Action::RightArc(id - 1 - num_labels_);
  }
  if (id == 0) return Action::Shift();
  if (id == 1) return Action::Reduce();
  return Action::NT(id - 2);
}

std::string FormatAction(const Action& a, const SymbolTable& labels) {
  switch (a.kind) {
    case Action::Kind::kShift: return "SHIFT";
    case Action::Kind::kReduce: return "REDUCE";
    case Action::Kind::kLeftArc: return "LEFT-ARC(" + labels.Symbol(a.label) + ")";
    case Action::Kind::kRightArc: return "RIGHT-ARC(" + labels.Symbol(a.label) + ")";
    case Action::Kind::kNT: return "NT(" + labels.Symbol(a.label) + ")";
  }
  return {};
}

Action ParseAction(std::string_view text, const SymbolTable& labels) {
  if (text == "SHIFT") return Action::Shift();
  if (text == "REDUCE") return Action::Reduce();
  auto labelled = [&](std::string_view prefix, Action::Kind kind) -> std::optional<Action> {
    if (text.size() <= prefix.size() + 1 || text.substr(0, prefix.size()) != prefix ||
        text.back() != ')') {
      return std::nullopt;
    }
    std::string_view name = text.substr(prefix.size(), text.size() - prefix.size() - 1);
    const int id = labels.Find(name);
    if (id < 0) throw std::invalid_argument("unknown label in action '" + std::string(text) + "'");
    return Action{kind, id};
  };
  if (auto a = labelled("LEFT-ARC(", Action::Kind::kLeftArc)) return *a;
  if (auto a = labelled("RIGHT-ARC(", Action::Kind::kRightArc)) return *a;
  if (auto a = labelled("NT(", Action::Kind::kNT)) return *a;
  throw std::invalid_argument("unrecognized action '" + std::string(text) + "'");
}

std::string FormatActions(const std::vector<Action>& actions, const SymbolTable& labels) {
  std::string out;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (i) out += ' ';
    out += FormatAction(actions[i], labels);
  }
  return out;
}

std::vector<Action> ParseActions(std::string_view line, const SymbolTable& labels) {
  std::vector<Action> out;
  std::istringstream is{std::string(line)};
  std::string tok;
  while (is >> tok) out.push_back(ParseAction(tok, labels));
  return out;
}

}  // namespace encdec
