#pragma once

// Small scoring fixtures with hand-counted expected values, shared by the
// evaluation unit tests and the acceptance run.

#include <cmath>
#include <string>
#include <vector>

#include "encdec/evaluation.hpp"
#include "encdec/treebank.hpp"

namespace encdec::testing {

// Hand values are written as decimals, so allow the last bit or two.
inline bool SameScore(double a, double b) { return std::abs(a - b) <= 1e-12; }

inline DepSentence FourWords(std::vector<int> heads, std::vector<std::string> labels) {
  DepSentence s;
  const char* forms[] = {"the", "dog", "saw", "cats"};
  const char* tags[] = {"DT", "NN", "VBD", "NNS"};
  for (int i = 0; i < 4; ++i) s.tokens.push_back({forms[i], tags[i], i + 1});
  s.heads = std::move(heads);
  s.labels = std::move(labels);
  return s;
}

struct DepFixture {
  std::string name;
  std::vector<DepSentence> pred, gold;
  long tokens;
  double uas, las;
};

struct ConstFixture {
  std::string name;
  std::vector<ConstTree> pred, gold;
  double precision, recall, f1;
};

inline std::vector<DepFixture> DepFixtures() {
  const std::vector<std::string> labels = {"nsubj", "root", "amod", "dobj"};
  std::vector<DepFixture> out;
  out.push_back({"identical sentence", {FourWords({2, 0, 4, 2}, labels)}, {FourWords({2, 0, 4, 2}, labels)}, 4,
                 100.0, 100.0});
  // 3 of 4 heads right; every right head also has the right label.
  out.push_back({"one wrong head", {FourWords({2, 0, 2, 2}, labels)}, {FourWords({2, 0, 4, 2}, labels)}, 4, 75.0,
                 75.0});
  out.push_back({"one wrong relation",
                 {FourWords({2, 0, 4, 2}, {"nsubj", "root", "det", "dobj"})},
                 {FourWords({2, 0, 4, 2}, labels)},
                 4,
                 100.0,
                 75.0});
  // The final "." is punctuation; its wrong head and label do not count.
  DepSentence gold = ReadConll(
                         "1\tTom\t_\tNNP\tNNP\t_\t2\tnsubj\t_\t_\n"
                         "2\tlikes\t_\tVBZ\tVBZ\t_\t0\troot\t_\t_\n"
                         "3\tred\t_\tJJ\tJJ\t_\t4\tamod\t_\t_\n"
                         "4\ttomatoes\t_\tNNS\tNNS\t_\t2\tdobj\t_\t_\n"
                         "5\t.\t_\t.\t.\t_\t2\tpunct\t_\t_\n")
                         .at(0);
  DepSentence pred = gold;
  pred.heads[4] = 4;
  pred.labels[4] = "dep";
  out.push_back({"punctuation ignored", {pred}, {gold}, 4, 100.0, 100.0});
  // Two sentences: 4/4 and 2/4 heads -> 6/8; the second has one of its
  // right heads mislabelled -> 5/8.
  out.push_back({"two sentences pooled",
                 {FourWords({2, 0, 4, 2}, labels), FourWords({3, 0, 2, 3}, {"nsubj", "root", "amod", "iobj"})},
                 {FourWords({2, 0, 4, 2}, labels), FourWords({2, 0, 4, 3}, labels)},
                 8,
                 75.0,
                 62.5});
  return out;
}

inline std::vector<ConstFixture> ConstFixtures() {
  const ConstTree gold = ParseBracketTree("(S (NP (DT a) (NN b)) (VP (VB c) (NP (NN d))) (. .))");
  std::vector<ConstFixture> out;
  out.push_back({"identical tree", {gold}, {gold}, 100.0, 100.0, 100.0});
  // Gold has NP[0,2] VP[2,4] NP[3,4]; the prediction adds X[1,2].
  out.push_back({"one spurious bracket",
                 {ParseBracketTree("(S (NP (DT a) (X (NN b))) (VP (VB c) (NP (NN d))) (. .))")},
                 {gold},
                 75.0,
                 100.0,
                 600.0 / 7.0});
  out.push_back({"no brackets", {ParseBracketTree("(S (DT a) (NN b) (VB c) (NN d) (. .))")}, {gold}, 0.0, 0.0, 0.0});
  // Wrong label on VP and missing inner NP: 1 of 2 predicted, 1 of 3 gold.
  out.push_back({"relabel and drop",
                 {ParseBracketTree("(S (NP (DT a) (NN b)) (XP (VB c) (NN d)) (. .))")},
                 {gold},
                 50.0,
                 100.0 / 3.0,
                 40.0});
  return out;
}

}  // namespace encdec::testing
