#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "encdec/treebank.hpp"

namespace encdec {

// POS tags excluded from attachment scores.
bool IsPunctuationTag(std::string_view pos);

struct DepScore {
  long tokens = 0;  // scored (non-punctuation) tokens
  long heads = 0;   // correct head
  long labeled = 0; // correct head and relation

  double uas() const { return tokens ? 100.0 * heads / tokens : 0.0; }
  double las() const { return tokens ? 100.0 * labeled / tokens : 0.0; }
};

// Throws AlignmentError naming the first misaligned sentence.
DepScore ScoreDependency(const std::vector<DepSentence>& pred, const std::vector<DepSentence>& gold);

struct BracketScore {
  long matched = 0;
  long predicted = 0;
  long gold = 0;

  double precision() const { return predicted ? 100.0 * matched / predicted : 0.0; }
  double recall() const { return gold ? 100.0 * matched / gold : 0.0; }
  double f1() const {
    const double p = precision(), r = recall();
    return p + r > 0 ? 2 * p * r / (p + r) : 0.0;
  }
};

struct Bracket {
  std::string label;
  int start = 0;  // 0-based first leaf
  int end = 0;    // one past the last leaf

  auto operator<=>(const Bracket&) const = default;
};

// Labeled spans of internal nodes; the top node is skipped when
// `exclude_root` is set.
std::vector<Bracket> Brackets(const ConstTree& tree, bool exclude_root = true);

// Multiset matching of (label, start, end).
BracketScore ScoreConstituent(const std::vector<ConstTree>& pred, const std::vector<ConstTree>& gold,
                              bool exclude_root = true);

// One row of a breakdown table. `key` is the bin label, POS tag or arc
// length; `value` the score in percent over `support` items.
struct BreakdownRow {
  std::string key;
  long support = 0;
  long correct = 0;
  double value = 0.0;
};

// Bins [w*k, w*k + w) are labelled w*k + w, so length 12 lands in bin 20.
// Dependency rows hold UAS over scored tokens; empty bins are absent.
std::vector<BreakdownRow> DepBreakdownByLength(const std::vector<DepSentence>& pred,
                                               const std::vector<DepSentence>& gold, int bin = 10);
// Constituent rows hold bracket F1 with `support` = sentence count.
std::vector<BreakdownRow> ConstBreakdownByLength(const std::vector<ConstTree>& pred,
                                                 const std::vector<ConstTree>& gold, int bin = 10,
                                                 bool exclude_root = true);
// Precision of predicted non-root arcs grouped by |head - dependent|,
// skipping punctuation dependents.
std::vector<BreakdownRow> BreakdownByArcLength(const std::vector<DepSentence>& pred,
                                               const std::vector<DepSentence>& gold);
// Head recall for the `top` most frequent gold POS tags (punctuation
// excluded), by descending frequency then tag.
std::vector<BreakdownRow> BreakdownByPos(const std::vector<DepSentence>& pred, const std::vector<DepSentence>& gold,
                                         int top = 15);

// Header row then one line per row, tab-separated.
std::string FormatBreakdown(std::string_view key_name, std::string_view value_name,
                            const std::vector<BreakdownRow>& rows);

}  // namespace encdec
