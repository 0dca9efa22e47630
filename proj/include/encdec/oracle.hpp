#pragma once

#include <vector>

#include "encdec/action.hpp"
#include "encdec/treebank.hpp"

namespace encdec {

// Static arc-standard oracle. Throws OracleError for non-projective input or
// relations missing from `relations`.
std::vector<Action> DepOracle(const DepSentence& gold, const SymbolTable& relations);

// Pre-order top-down oracle: NT at each internal node, Shift at each leaf,
// Reduce once a node's children are complete.
std::vector<Action> ConstOracle(const ConstTree& gold, const SymbolTable& nonterminals);

}  // namespace encdec
