#include "encdec/evaluation.hpp"

#include <algorithm>
#include <cstdlib>
#include <iomanip>
#include <map>
#include <sstream>

#include "encdec/error.hpp"

namespace encdec {

bool IsPunctuationTag(std::string_view pos) {
  return pos == "``" || pos == "''" || pos == ":" || pos == "," || pos == ".";
}

namespace {

void CheckAligned(std::size_t pred, std::size_t gold) {
  if (pred != gold) {
    throw AlignmentError("treebank sizes differ: " + std::to_string(pred) + " predicted vs " + std::to_string(gold) +
                         " gold sentences");
  }
}

void CheckTokens(std::size_t i, const std::vector<Token>& pred, const std::vector<Token>& gold) {
  if (pred.size() != gold.size()) {
    throw AlignmentError("sentence " + std::to_string(i + 1) + ": " + std::to_string(pred.size()) +
                         " predicted vs " + std::to_string(gold.size()) + " gold tokens");
  }
  for (std::size_t k = 0; k < pred.size(); ++k) {
    if (pred[k].form != gold[k].form) {
      throw AlignmentError("sentence " + std::to_string(i + 1) + ": token " + std::to_string(k + 1) +
                           " differs ('" + pred[k].form + "' vs '" + gold[k].form + "')");
    }
  }
}

DepScore ScoreSentence(const DepSentence& p, const DepSentence& g) {
  DepScore s;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (IsPunctuationTag(g.tokens[k].pos)) continue;
    ++s.tokens;
    if (p.heads[k] == g.heads[k]) {
      ++s.heads;
      if (p.labels[k] == g.labels[k]) ++s.labeled;
    }
  }
  return s;
}

BracketScore ScoreTree(const ConstTree& p, const ConstTree& g, bool exclude_root) {
  std::vector<Bracket> pb = Brackets(p, exclude_root), gb = Brackets(g, exclude_root);
  std::sort(pb.begin(), pb.end());
  std::sort(gb.begin(), gb.end());
  std::vector<Bracket> common;
  std::set_intersection(pb.begin(), pb.end(), gb.begin(), gb.end(), std::back_inserter(common));
  BracketScore s;
  s.matched = static_cast<long>(common.size());
  s.predicted = static_cast<long>(pb.size());
  s.gold = static_cast<long>(gb.size());
  return s;
}

int CollectBrackets(const ConstTree& t, int start, bool skip, std::vector<Bracket>& out) {
  if (t.is_leaf()) return start + 1;
  int end = start;
  for (const auto& c : t.children()) end = CollectBrackets(c, end, false, out);
  if (!skip) out.push_back({t.label(), start, end});
  return end;
}

int BinOf(std::size_t length, int bin) { return (static_cast<int>(length) / bin + 1) * bin; }

}  // namespace

DepScore ScoreDependency(const std::vector<DepSentence>& pred, const std::vector<DepSentence>& gold) {
  CheckAligned(pred.size(), gold.size());
  DepScore total;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    CheckTokens(i, pred[i].tokens, gold[i].tokens);
    const DepScore s = ScoreSentence(pred[i], gold[i]);
    total.tokens += s.tokens;
    total.heads += s.heads;
    total.labeled += s.labeled;
  }
  return total;
}

std::vector<Bracket> Brackets(const ConstTree& tree, bool exclude_root) {
  std::vector<Bracket> out;
  CollectBrackets(tree, 0, exclude_root, out);
  return out;
}

BracketScore ScoreConstituent(const std::vector<ConstTree>& pred, const std::vector<ConstTree>& gold,
                              bool exclude_root) {
  CheckAligned(pred.size(), gold.size());
  BracketScore total;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    CheckTokens(i, pred[i].Leaves(), gold[i].Leaves());
    const BracketScore s = ScoreTree(pred[i], gold[i], exclude_root);
    total.matched += s.matched;
    total.predicted += s.predicted;
    total.gold += s.gold;
  }
  return total;
}

std::vector<BreakdownRow> DepBreakdownByLength(const std::vector<DepSentence>& pred,
                                               const std::vector<DepSentence>& gold, int bin) {
  CheckAligned(pred.size(), gold.size());
  std::map<int, DepScore> bins;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    CheckTokens(i, pred[i].tokens, gold[i].tokens);
    const DepScore s = ScoreSentence(pred[i], gold[i]);
    DepScore& b = bins[BinOf(gold[i].size(), bin)];
    b.tokens += s.tokens;
    b.heads += s.heads;
  }
  std::vector<BreakdownRow> rows;
  for (const auto& [label, s] : bins) rows.push_back({std::to_string(label), s.tokens, s.heads, s.uas()});
  return rows;
}

std::vector<BreakdownRow> ConstBreakdownByLength(const std::vector<ConstTree>& pred,
                                                 const std::vector<ConstTree>& gold, int bin, bool exclude_root) {
  CheckAligned(pred.size(), gold.size());
  std::map<int, std::pair<long, BracketScore>> bins;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    CheckTokens(i, pred[i].Leaves(), gold[i].Leaves());
    const BracketScore s = ScoreTree(pred[i], gold[i], exclude_root);
    auto& [count, b] = bins[BinOf(gold[i].NumLeaves(), bin)];
    ++count;
    b.matched += s.matched;
    b.predicted += s.predicted;
    b.gold += s.gold;
  }
  std::vector<BreakdownRow> rows;
  for (const auto& [label, entry] : bins) {
    rows.push_back({std::to_string(label), entry.first, entry.second.matched, entry.second.f1()});
  }
  return rows;
}

std::vector<BreakdownRow> BreakdownByArcLength(const std::vector<DepSentence>& pred,
                                               const std::vector<DepSentence>& gold) {
  CheckAligned(pred.size(), gold.size());
  std::map<int, std::pair<long, long>> bins;  // length -> (predicted, correct)
  for (std::size_t i = 0; i < gold.size(); ++i) {
    CheckTokens(i, pred[i].tokens, gold[i].tokens);
    for (std::size_t k = 0; k < gold[i].size(); ++k) {
      const int h = pred[i].heads[k];
      if (h == 0 || IsPunctuationTag(gold[i].tokens[k].pos)) continue;
      auto& [n, ok] = bins[std::abs(h - static_cast<int>(k + 1))];
      ++n;
      if (gold[i].heads[k] == h) ++ok;
    }
  }
  std::vector<BreakdownRow> rows;
  for (const auto& [len, c] : bins) rows.push_back({std::to_string(len), c.first, c.second, 100.0 * c.second / c.first});
  return rows;
}

std::vector<BreakdownRow> BreakdownByPos(const std::vector<DepSentence>& pred, const std::vector<DepSentence>& gold,
                                         int top) {
  CheckAligned(pred.size(), gold.size());
  std::map<std::string, std::pair<long, long>> tags;  // tag -> (gold count, correct)
  for (std::size_t i = 0; i < gold.size(); ++i) {
    CheckTokens(i, pred[i].tokens, gold[i].tokens);
    for (std::size_t k = 0; k < gold[i].size(); ++k) {
      const std::string& pos = gold[i].tokens[k].pos;
      if (IsPunctuationTag(pos)) continue;
      auto& [n, ok] = tags[pos];
      ++n;
      if (pred[i].heads[k] == gold[i].heads[k]) ++ok;
    }
  }
  std::vector<BreakdownRow> rows;
  for (const auto& [tag, c] : tags) rows.push_back({tag, c.first, c.second, 100.0 * c.second / c.first});
  std::stable_sort(rows.begin(), rows.end(),
                   [](const BreakdownRow& a, const BreakdownRow& b) { return a.support > b.support; });
  if (static_cast<int>(rows.size()) > top) rows.resize(top);
  return rows;
}

std::string FormatBreakdown(std::string_view key_name, std::string_view value_name,
                            const std::vector<BreakdownRow>& rows) {
  std::ostringstream os;
  os << key_name << "\tsupport\tcorrect\t" << value_name << '\n';
  os << std::fixed << std::setprecision(2);
  for (const auto& r : rows) os << r.key << '\t' << r.support << '\t' << r.correct << '\t' << r.value << '\n';
  return os.str();
}

}  // namespace encdec
