#include "encdec/vocabulary.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "encdec/error.hpp"

namespace encdec {

int Vocabulary::WordId(std::string_view form) const {
  const int id = words.Find(form);
  return id < 0 ? 0 : id;
}

int Vocabulary::PosId(std::string_view tag) const {
  const int id = pos.Find(tag);
  return id < 0 ? 0 : id;
}

bool Vocabulary::operator==(const Vocabulary& o) const {
  return formalism == o.formalism && words == o.words && pos == o.pos && labels == o.labels &&
         root_label == o.root_label && word_freq == o.word_freq;
}

namespace {

Vocabulary StartVocab(Formalism f, const std::vector<std::vector<Token>>& sentences, int min_freq) {
  Vocabulary v;
  v.formalism = f;
  v.words.Add(kUnknown);
  v.pos.Add(kUnknown);
  std::vector<std::string> order;
  for (const auto& s : sentences) {
    for (const auto& t : s) {
      if (v.word_freq[t.form]++ == 0) order.push_back(t.form);
      v.pos.Add(t.pos);
    }
  }
  for (const auto& w : order) {
    if (v.word_freq[w] >= min_freq) v.words.Add(w);
  }
  return v;
}

void CollectNonterminals(const ConstTree& t, SymbolTable& out) {
  if (t.is_leaf()) return;
  out.Add(t.label());
  for (const auto& c : t.children()) CollectNonterminals(c, out);
}

}  // namespace

Vocabulary BuildDepVocab(const std::vector<DepSentence>& treebank, int min_freq) {
  std::vector<std::vector<Token>> toks;
  toks.reserve(treebank.size());
  for (const auto& s : treebank) toks.push_back(s.tokens);
  Vocabulary v = StartVocab(Formalism::kDependency, toks, min_freq);
  std::map<std::string, int> root_counts;
  for (const auto& s : treebank) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s.heads[i] == 0) {
        ++root_counts[s.labels[i]];
      } else {
        v.labels.Add(s.labels[i]);
      }
    }
  }
  int best = 0;
  for (const auto& [label, count] : root_counts) {
    if (count > best) {
      best = count;
      v.root_label = label;
    }
  }
  return v;
}

Vocabulary BuildConstVocab(const std::vector<ConstTree>& treebank, int min_freq) {
  std::vector<std::vector<Token>> toks;
  toks.reserve(treebank.size());
  for (const auto& t : treebank) toks.push_back(t.Leaves());
  Vocabulary v = StartVocab(Formalism::kConstituent, toks, min_freq);
  for (const auto& t : treebank) CollectNonterminals(t, v.labels);
  return v;
}

std::string SaveVocabulary(const Vocabulary& v) {
  std::ostringstream os;
  os << "formalism\t" << FormalismName(v.formalism) << "\t0\n";
  os << "root\t" << v.root_label << "\t0\n";
  auto table = [&](const char* kind, const SymbolTable& t) {
    for (int i = 0; i < t.size(); ++i) os << kind << '\t' << t.Symbol(i) << '\t' << i << '\n';
  };
  table("word", v.words);
  table("pos", v.pos);
  table("label", v.labels);
  const ActionSet actions = v.actions();
  for (int i = 0; i < actions.size(); ++i) {
    os << "action\t" << FormatAction(actions.At(i), v.labels) << '\t' << i << '\n';
  }
  for (const auto& [w, c] : v.word_freq) os << "freq\t" << w << '\t' << c << '\n';
  return os.str();
}

Vocabulary LoadVocabulary(std::string_view text) {
  Vocabulary v;
  std::vector<std::string> action_rows;
  std::size_t pos = 0, line_no = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (line.empty()) continue;
    const std::size_t t1 = line.find('\t');
    const std::size_t t2 = t1 == std::string_view::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string_view::npos) {
      throw ParseError("vocabulary line " + std::to_string(line_no) + ": expected 3 columns", line_no);
    }
    std::string_view kind = line.substr(0, t1);
    std::string_view sym = line.substr(t1 + 1, t2 - t1 - 1);
    std::string_view num = line.substr(t2 + 1);
    int id = 0;
    auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), id);
    if (ec != std::errc() || p != num.data() + num.size()) {
      throw ParseError("vocabulary line " + std::to_string(line_no) + ": bad id", line_no);
    }
    auto add = [&](SymbolTable& table) {
      if (table.Add(sym) != id) {
        throw ParseError("vocabulary line " + std::to_string(line_no) + ": ids are not dense", line_no);
      }
    };
    if (kind == "formalism") {
      v.formalism = ParseFormalism(sym);
    } else if (kind == "root") {
      v.root_label = std::string(sym);
    } else if (kind == "word") {
      add(v.words);
    } else if (kind == "pos") {
      add(v.pos);
    } else if (kind == "label") {
      add(v.labels);
    } else if (kind == "action") {
      if (static_cast<int>(action_rows.size()) != id) {
        throw ParseError("vocabulary line " + std::to_string(line_no) + ": ids are not dense", line_no);
      }
      action_rows.emplace_back(sym);
    } else if (kind == "freq") {
      v.word_freq[std::string(sym)] = id;
    } else {
      throw ParseError("vocabulary line " + std::to_string(line_no) + ": unknown kind '" +
                           std::string(kind) + "'",
                       line_no);
    }
  }
  const ActionSet actions = v.actions();
  if (static_cast<int>(action_rows.size()) != actions.size()) {
    throw ValidationError("vocabulary action rows do not match the label inventory");
  }
  for (int i = 0; i < actions.size(); ++i) {
    if (FormatAction(actions.At(i), v.labels) != action_rows[i]) {
      throw ValidationError("vocabulary action " + std::to_string(i) + " is '" + action_rows[i] +
                            "', expected '" + FormatAction(actions.At(i), v.labels) + "'");
    }
  }
  return v;
}

int PretrainedVectors::FixedId(std::string_view form) const {
  const int id = words.Find(form);
  return id < 0 ? 0 : id + 1;
}

PretrainedVectors LoadVectors(std::string_view text) {
  PretrainedVectors pv;
  std::size_t pos = 0, line_no = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string line(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream is(line);
    std::string word;
    is >> word;
    std::vector<float> vec;
    std::string field;
    while (is >> field) {
      float x = 0.0f;
      auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), x);
      if (ec != std::errc() || p != field.data() + field.size() || !std::isfinite(x)) {
        throw ParseError("vector line " + std::to_string(line_no) + ": bad value '" + field + "'", line_no);
      }
      vec.push_back(x);
    }
    if (pv.dim == 0) {
      if (vec.empty()) throw ValidationError("vector line " + std::to_string(line_no) + " has no values");
      pv.dim = static_cast<int>(vec.size());
    } else if (static_cast<int>(vec.size()) != pv.dim) {
      throw ValidationError("vector line " + std::to_string(line_no) + " ('" + word + "') has dimension " +
                            std::to_string(vec.size()) + ", expected " + std::to_string(pv.dim));
    }
    const int existing = pv.words.Find(word);
    if (existing >= 0) {
      pv.vectors[existing] = std::move(vec);
      ++pv.duplicates;
    } else {
      pv.words.Add(word);
      pv.vectors.push_back(std::move(vec));
    }
  }
  if (pv.dim == 0) throw ValidationError("empty vector file: cannot infer dimension");
  return pv;
}

}  // namespace encdec
