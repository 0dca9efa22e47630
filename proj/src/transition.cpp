#include "encdec/transition.hpp"

#include <algorithm>
#include <sstream>

#include "encdec/error.hpp"

namespace encdec {

namespace {

std::string KindName(const Action& a) {
  switch (a.kind) {
    case Action::Kind::kShift: return "SHIFT";
    case Action::Kind::kLeftArc: return "LEFT-ARC(" + std::to_string(a.label) + ")";
    case Action::Kind::kRightArc: return "RIGHT-ARC(" + std::to_string(a.label) + ")";
    case Action::Kind::kNT: return "NT(" + std::to_string(a.label) + ")";
    case Action::Kind::kReduce: return "REDUCE";
  }
  return "?";
}

}  // namespace

TokenSeq MakeTokens(std::vector<Token> tokens) {
  return std::make_shared<const std::vector<Token>>(std::move(tokens));
}

DepState::DepState(TokenSeq tokens, int num_labels)
    : tokens_(std::move(tokens)),
      num_labels_(num_labels),
      heads_(tokens_->size(), 0),
      rels_(tokens_->size(), -1) {}

bool DepState::IsLegal(const Action& a) const {
  switch (a.kind) {
    case Action::Kind::kShift:
      return !queue_empty();
    case Action::Kind::kLeftArc:
    case Action::Kind::kRightArc:
      return stack_.size() >= 2 && a.label >= 0 && a.label < num_labels_;
    default:
      return false;
  }
}

std::vector<Action> DepState::LegalActions() const {
  std::vector<Action> out;
  if (!queue_empty()) out.push_back(Action::Shift());
  if (stack_.size() >= 2) {
    for (int l = 0; l < num_labels_; ++l) out.push_back(Action::LeftArc(l));
    for (int l = 0; l < num_labels_; ++l) out.push_back(Action::RightArc(l));
  }
  return out;
}

void DepState::Apply(const Action& a) {
  if (!IsLegal(a)) {
    throw ContractViolation("illegal action " + KindName(a) + " in state " + Summary());
  }
  if (a.kind == Action::Kind::kShift) {
    stack_.push_back(next_++);
    return;
  }
  const int s0 = stack_.back();
  const int s1 = stack_[stack_.size() - 2];
  stack_.pop_back();
  stack_.pop_back();
  if (a.kind == Action::Kind::kLeftArc) {
    heads_[s1 - 1] = s0;
    rels_[s1 - 1] = a.label;
    stack_.push_back(s0);
  } else {
    heads_[s0 - 1] = s1;
    rels_[s0 - 1] = a.label;
    stack_.push_back(s1);
  }
  ++num_arcs_;
}

DepSentence DepState::ReadOut(const SymbolTable& relations, const std::string& root_label) const {
  if (!IsTerminal()) throw ContractViolation("read-out of non-terminal state " + Summary());
  DepSentence out;
  out.tokens = *tokens_;
  out.heads = heads_;
  out.labels.resize(tokens_->size());
  const int root = stack_.front();
  for (int i = 1; i <= size(); ++i) {
    out.labels[i - 1] = i == root ? root_label : relations.Symbol(rels_[i - 1]);
  }
  out.heads[root - 1] = 0;
  return out;
}

void DepState::CheckInvariants() const {
  std::vector<int> seen(size() + 1, 0);
  for (int w : stack_) ++seen[w];
  for (int w = next_; w <= size(); ++w) ++seen[w];
  for (int w = 1; w <= size(); ++w) {
    if (heads_[w - 1] != 0) ++seen[w];
  }
  for (int w = 1; w <= size(); ++w) {
    if (seen[w] != 1) {
      throw ContractViolation("token " + std::to_string(w) + " appears " + std::to_string(seen[w]) +
                              " times in " + Summary());
    }
  }
  if (size() > 0 && num_arcs_ > size() - 1) throw ContractViolation("too many arcs in " + Summary());
}

std::string DepState::Summary() const {
  std::ostringstream os;
  os << "stack=[";
  for (std::size_t i = 0; i < stack_.size(); ++i) os << (i ? " " : "") << stack_[i];
  os << "] next=" << next_ << "/" << size() << " arcs=" << num_arcs_;
  return os.str();
}

ConstState::ConstState(TokenSeq tokens, const SymbolTable& nonterminals, int max_open_nts)
    : tokens_(std::move(tokens)), nonterminals_(&nonterminals), max_open_nts_(max_open_nts) {}

bool ConstState::IsLegal(const Action& a) const {
  switch (a.kind) {
    case Action::Kind::kShift:
      return !queue_empty() && open_count_ >= 1;
    case Action::Kind::kNT:
      return !queue_empty() && open_count_ < max_open_nts_ && a.label >= 0 &&
             a.label < nonterminals_->size();
    case Action::Kind::kReduce:
      return !stack_.empty() && !std::holds_alternative<OpenNT>(stack_.back()) && open_count_ >= 1 &&
             !(open_count_ == 1 && !queue_empty());
    default:
      return false;
  }
}

std::vector<Action> ConstState::LegalActions() const {
  std::vector<Action> out;
  if (IsLegal(Action::Shift())) out.push_back(Action::Shift());
  if (IsLegal(Action::Reduce())) out.push_back(Action::Reduce());
  if (!queue_empty() && open_count_ < max_open_nts_) {
    for (int l = 0; l < nonterminals_->size(); ++l) out.push_back(Action::NT(l));
  }
  return out;
}

void ConstState::Apply(const Action& a) {
  if (!IsLegal(a)) {
    throw ContractViolation("illegal action " + KindName(a) + " in state " + Summary());
  }
  switch (a.kind) {
    case Action::Kind::kShift:
      stack_.emplace_back(Terminal{(*tokens_)[next_ - 1]});
      ++next_;
      break;
    case Action::Kind::kNT:
      stack_.emplace_back(OpenNT{a.label});
      ++open_count_;
      break;
    case Action::Kind::kReduce: {
      std::vector<ConstTree> children;
      while (!std::holds_alternative<OpenNT>(stack_.back())) {
        StackItem& item = stack_.back();
        if (auto* t = std::get_if<Terminal>(&item)) {
          children.push_back(ConstTree::Leaf(std::move(t->token)));
        } else {
          children.push_back(std::move(std::get<Completed>(item).tree));
        }
        stack_.pop_back();
      }
      const int label = std::get<OpenNT>(stack_.back()).label;
      stack_.pop_back();
      std::reverse(children.begin(), children.end());
      stack_.emplace_back(Completed{ConstTree::Node(nonterminals_->Symbol(label), std::move(children))});
      --open_count_;
      break;
    }
    default:
      break;
  }
}

ConstTree ConstState::ReadOut() const {
  if (!IsTerminal()) throw ContractViolation("read-out of non-terminal state " + Summary());
  const StackItem& item = stack_.front();
  if (auto* c = std::get_if<Completed>(&item)) return c->tree;
  throw ContractViolation("terminal stack does not hold a completed constituent");
}

void ConstState::CheckInvariants() const {
  int open = 0;
  for (const auto& item : stack_) open += std::holds_alternative<OpenNT>(item) ? 1 : 0;
  if (open != open_count_) {
    throw ContractViolation("open_count " + std::to_string(open_count_) + " but " + std::to_string(open) +
                            " open nonterminals in " + Summary());
  }
}

std::string ConstState::Summary() const {
  std::ostringstream os;
  os << "stack=[";
  for (std::size_t i = 0; i < stack_.size(); ++i) {
    if (i) os << ' ';
    const StackItem& item = stack_[i];
    if (auto* o = std::get_if<OpenNT>(&item)) {
      os << "(" << nonterminals_->Symbol(o->label);
    } else if (auto* t = std::get_if<Terminal>(&item)) {
      os << t->token.form;
    } else {
      os << WriteBracketTree(std::get<Completed>(item).tree);
    }
  }
  os << "] next=" << next_ << "/" << size() << " open=" << open_count_;
  return os.str();
}

bool ParserState::IsLegal(const Action& a) const {
  return std::visit([&](const auto& s) { return s.IsLegal(a); }, state_);
}
std::vector<Action> ParserState::LegalActions() const {
  return std::visit([](const auto& s) { return s.LegalActions(); }, state_);
}
void ParserState::Apply(const Action& a) {
  std::visit([&](auto& s) { s.Apply(a); }, state_);
}
bool ParserState::IsTerminal() const {
  return std::visit([](const auto& s) { return s.IsTerminal(); }, state_);
}
int ParserState::Boundary() const {
  return std::visit([](const auto& s) { return s.Boundary(); }, state_);
}
int ParserState::size() const {
  return std::visit([](const auto& s) { return s.size(); }, state_);
}
std::string ParserState::Summary() const {
  return std::visit([](const auto& s) { return s.Summary(); }, state_);
}

DepState RunDep(TokenSeq tokens, int num_labels, const std::vector<Action>& actions) {
  DepState s(std::move(tokens), num_labels);
  for (const auto& a : actions) s.Apply(a);
  return s;
}

ConstState RunConst(TokenSeq tokens, const SymbolTable& nonterminals, const std::vector<Action>& actions,
                    int max_open_nts) {
  ConstState s(std::move(tokens), nonterminals, max_open_nts);
  for (const auto& a : actions) s.Apply(a);
  return s;
}

}  // namespace encdec
