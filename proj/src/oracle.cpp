#include "encdec/oracle.hpp"

#include "encdec/error.hpp"

namespace encdec {

std::vector<Action> DepOracle(const DepSentence& gold, const SymbolTable& relations) {
  const int n = static_cast<int>(gold.size());
  std::vector<int> rel_id(n + 1, -1);
  std::vector<int> pending(n + 1, 0);  // dependents not yet attached
  for (int i = 1; i <= n; ++i) {
    const int h = gold.heads[i - 1];
    ++pending[h];
    if (h == 0) continue;
    rel_id[i] = relations.Find(gold.labels[i - 1]);
    if (rel_id[i] < 0) throw OracleError("relation '" + gold.labels[i - 1] + "' not in vocabulary");
  }

  std::vector<Action> actions;
  actions.reserve(2 * n);
  std::vector<int> stack;
  int next = 1;
  while (!(next > n && stack.size() == 1)) {
    if (stack.size() >= 2) {
      const int s0 = stack.back();
      const int s1 = stack[stack.size() - 2];
      if (gold.heads[s1 - 1] == s0 && pending[s1] == 0) {
        actions.push_back(Action::LeftArc(rel_id[s1]));
        stack.erase(stack.end() - 2);
        --pending[s0];
        continue;
      }
      if (gold.heads[s0 - 1] == s1 && pending[s0] == 0) {
        actions.push_back(Action::RightArc(rel_id[s0]));
        stack.pop_back();
        --pending[s1];
        continue;
      }
    }
    if (next > n) {
      throw OracleError("no gold action from a stack of " + std::to_string(stack.size()) +
                        " words with an empty queue (non-projective tree)");
    }
    actions.push_back(Action::Shift());
    stack.push_back(next++);
  }
  return actions;
}

namespace {

void Emit(const ConstTree& t, const SymbolTable& nonterminals, std::vector<Action>& out) {
  if (t.is_leaf()) {
    out.push_back(Action::Shift());
    return;
  }
  const int id = nonterminals.Find(t.label());
  if (id < 0) throw OracleError("nonterminal '" + t.label() + "' not in vocabulary");
  out.push_back(Action::NT(id));
  for (const auto& c : t.children()) Emit(c, nonterminals, out);
  out.push_back(Action::Reduce());
}

}  // namespace

std::vector<Action> ConstOracle(const ConstTree& gold, const SymbolTable& nonterminals) {
  std::vector<Action> out;
  Emit(gold, nonterminals, out);
  return out;
}

}  // namespace encdec
