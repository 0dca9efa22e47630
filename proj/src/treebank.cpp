#include "encdec/treebank.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "encdec/error.hpp"

namespace encdec {

namespace {

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> cols;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      cols.push_back(line.substr(start));
      break;
    }
    cols.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return cols;
}

std::string_view TrimRight(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\n')) {
    s.remove_suffix(1);
  }
  return s;
}

bool IsBlank(std::string_view s) {
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

int ParseInt(std::string_view field, std::size_t line_no, const char* column) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw ParseError("line " + std::to_string(line_no) + ": bad " + column + " '" +
                         std::string(field) + "'",
                     line_no);
  }
  return value;
}

}  // namespace

void ValidateDepSentence(const DepSentence& s) {
  const int n = static_cast<int>(s.tokens.size());
  if (s.heads.size() != s.tokens.size() || s.labels.size() != s.tokens.size()) {
    throw ValidationError("heads/labels do not match token count");
  }
  int roots = 0;
  for (int i = 0; i < n; ++i) {
    const Token& t = s.tokens[i];
    if (t.form.empty()) throw ValidationError("empty form at token " + std::to_string(i + 1));
    if (t.index != i + 1) throw ValidationError("token indices are not contiguous from 1");
    const int h = s.heads[i];
    if (h < 0 || h > n) throw ValidationError("head out of range at token " + std::to_string(i + 1));
    if (h == i + 1) throw ValidationError("self-loop at token " + std::to_string(i + 1));
    if (h == 0) ++roots;
  }
  if (n > 0 && roots != 1) {
    throw ValidationError("expected exactly one root, found " + std::to_string(roots));
  }
  // Every token must reach the root without revisiting a node.
  std::vector<int> state(n + 1, 0);  // 0 unvisited, 1 on path, 2 reaches root
  state[0] = 2;
  for (int i = 1; i <= n; ++i) {
    std::vector<int> path;
    int cur = i;
    while (state[cur] == 0) {
      state[cur] = 1;
      path.push_back(cur);
      cur = s.heads[cur - 1];
    }
    if (state[cur] == 1) throw ValidationError("cycle through token " + std::to_string(cur));
    for (int p : path) state[p] = 2;
  }
}

bool IsProjective(const DepSentence& s) {
  const int n = static_cast<int>(s.size());
  for (int i = 1; i <= n; ++i) {
    const int hi = s.heads[i - 1];
    if (hi == 0) continue;
    const int lo1 = std::min(i, hi), hi1 = std::max(i, hi);
    for (int j = 1; j <= n; ++j) {
      const int hj = s.heads[j - 1];
      if (hj == 0 || j == i) continue;
      const int lo2 = std::min(j, hj), hi2 = std::max(j, hj);
      if ((lo1 < lo2 && lo2 < hi1 && hi1 < hi2) || (lo2 < lo1 && lo1 < hi2 && hi2 < hi1)) {
        return false;
      }
    }
  }
  // The root may not sit under an arc either.
  for (int i = 1; i <= n; ++i) {
    if (s.heads[i - 1] != 0) continue;
    for (int j = 1; j <= n; ++j) {
      const int hj = s.heads[j - 1];
      if (hj == 0) continue;
      if (std::min(j, hj) < i && i < std::max(j, hj)) return false;
    }
  }
  return true;
}

std::vector<DepSentence> ReadConll(std::string_view text) {
  std::vector<DepSentence> out;
  DepSentence cur;
  std::size_t line_no = 0;
  auto flush = [&]() {
    if (cur.tokens.empty()) return;
    try {
      ValidateDepSentence(cur);
    } catch (const ValidationError& e) {
      throw ValidationError("sentence " + std::to_string(out.size() + 1) + " (ending line " +
                            std::to_string(line_no) + "): " + e.what());
    }
    out.push_back(std::move(cur));
    cur = DepSentence{};
  };
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = TrimRight(text.substr(pos, nl - pos));
    ++line_no;
    pos = nl + 1;
    if (IsBlank(line)) {
      flush();
      continue;
    }
    if (line.front() == '#') continue;
    auto cols = SplitTabs(line);
    if (cols.size() != 10) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 10 columns, got " +
                           std::to_string(cols.size()),
                       line_no);
    }
    Token tok;
    tok.index = ParseInt(cols[0], line_no, "ID");
    tok.form = std::string(cols[1]);
    tok.pos = std::string(cols[4]);
    if (tok.form.empty()) throw ParseError("line " + std::to_string(line_no) + ": empty FORM", line_no);
    cur.heads.push_back(ParseInt(cols[6], line_no, "HEAD"));
    cur.labels.emplace_back(cols[7]);
    cur.tokens.push_back(std::move(tok));
  }
  flush();
  return out;
}

std::string WriteConll(const std::vector<DepSentence>& sentences) {
  std::ostringstream os;
  for (const auto& s : sentences) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      const Token& t = s.tokens[i];
      os << t.index << '\t' << t.form << "\t_\t" << t.pos << '\t' << t.pos << "\t_\t" << s.heads[i]
         << '\t' << s.labels[i] << "\t_\t_\n";
    }
    os << '\n';
  }
  return os.str();
}

ConstTree ConstTree::Leaf(Token token) {
  ConstTree t;
  t.is_leaf_ = true;
  t.token_ = std::move(token);
  return t;
}

ConstTree ConstTree::Node(std::string label, std::vector<ConstTree> children) {
  ConstTree t;
  t.label_ = std::move(label);
  t.children_ = std::move(children);
  return t;
}

namespace {
void CollectLeaves(const ConstTree& t, std::vector<Token>& out) {
  if (t.is_leaf()) {
    out.push_back(t.token());
    return;
  }
  for (const auto& c : t.children()) CollectLeaves(c, out);
}
}  // namespace

std::vector<Token> ConstTree::Leaves() const {
  std::vector<Token> out;
  CollectLeaves(*this, out);
  return out;
}

std::size_t ConstTree::NumLeaves() const {
  if (is_leaf_) return 1;
  std::size_t n = 0;
  for (const auto& c : children_) n += c.NumLeaves();
  return n;
}

namespace {
void ValidateNode(const ConstTree& t, int& next_index) {
  if (t.is_leaf()) {
    if (t.token().form.empty()) throw ValidationError("leaf with empty form");
    if (t.token().index != next_index) {
      throw ValidationError("leaf index " + std::to_string(t.token().index) + " where " +
                            std::to_string(next_index) + " expected");
    }
    ++next_index;
    return;
  }
  if (t.children().empty()) throw ValidationError("constituent '" + t.label() + "' has no children");
  for (const auto& c : t.children()) ValidateNode(c, next_index);
}
}  // namespace

void ValidateConstTree(const ConstTree& tree) {
  int next = 1;
  ValidateNode(tree, next);
}

std::string StripFunctionTags(std::string_view label) {
  if (label.empty() || label.front() == '-') return std::string(label);
  const std::size_t cut = label.find_first_of("-=");
  return std::string(label.substr(0, cut));
}

namespace {

// Recursive-descent reader over a single bracketed tree.
class BracketReader {
 public:
  explicit BracketReader(std::string_view text) : text_(text) {}

  ConstTree ReadTop() {
    SkipSpace();
    if (pos_ >= text_.size() || text_[pos_] != '(') Fail("expected '('");
    ConstTree tree = ReadNode();
    SkipSpace();
    if (pos_ != text_.size()) Fail("trailing characters after tree");
    // PTB wraps trees in an unlabeled outer bracket.
    if (!tree.is_leaf() && tree.label().empty() && tree.children().size() == 1) {
      tree = ConstTree(tree.children().front());
    }
    int next = 1;
    Renumber(tree, next);
    ValidateConstTree(tree);
    return tree;
  }

 private:
  [[noreturn]] void Fail(const std::string& msg) {
    throw ParseError("offset " + std::to_string(pos_) + ": " + msg, pos_);
  }

  void SkipSpace() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string_view ReadAtom() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != '(' && text_[pos_] != ')' &&
           !std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    return text_.substr(start, pos_ - start);
  }

  ConstTree ReadNode() {
    ++pos_;  // '('
    SkipSpace();
    if (pos_ >= text_.size()) Fail("unbalanced parentheses");
    std::string_view label = (text_[pos_] == '(' || text_[pos_] == ')') ? std::string_view{} : ReadAtom();
    SkipSpace();
    if (pos_ >= text_.size()) Fail("unbalanced parentheses");
    if (text_[pos_] != '(' && text_[pos_] != ')') {
      std::string_view form = ReadAtom();
      SkipSpace();
      if (pos_ >= text_.size()) Fail("unbalanced parentheses");
      if (text_[pos_] != ')') Fail("leaf '" + std::string(label) + "' has more than one word");
      ++pos_;
      if (label.empty()) Fail("leaf without a POS tag");
      return ConstTree::Leaf(Token{std::string(form), std::string(label), 0});
    }
    std::vector<ConstTree> children;
    while (true) {
      SkipSpace();
      if (pos_ >= text_.size()) Fail("unbalanced parentheses");
      if (text_[pos_] == ')') {
        ++pos_;
        break;
      }
      if (text_[pos_] != '(') Fail("bare word inside a constituent");
      children.push_back(ReadNode());
    }
    if (children.empty()) {
      throw ValidationError("constituent '" + std::string(label) + "' has no children");
    }
    return ConstTree::Node(StripFunctionTags(label), std::move(children));
  }

  static void Renumber(ConstTree& t, int& next) {
    if (t.is_leaf()) {
      Token tok = t.token();
      tok.index = next++;
      t = ConstTree::Leaf(std::move(tok));
      return;
    }
    for (auto& c : t.mutable_children()) Renumber(c, next);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void WriteNode(const ConstTree& t, std::string& out) {
  out += '(';
  if (t.is_leaf()) {
    out += t.token().pos;
    out += ' ';
    out += t.token().form;
  } else {
    out += t.label();
    for (const auto& c : t.children()) {
      out += ' ';
      WriteNode(c, out);
    }
  }
  out += ')';
}

}  // namespace

ConstTree ParseBracketTree(std::string_view line) { return BracketReader(line).ReadTop(); }

std::vector<ConstTree> ReadBrackets(std::string_view text) {
  std::vector<ConstTree> out;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    ++line_no;
    pos = nl + 1;
    if (IsBlank(line)) continue;
    try {
      out.push_back(ParseBracketTree(line));
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(line_no) + ", " + e.what(), e.location());
    } catch (const ValidationError& e) {
      throw ValidationError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::string WriteBracketTree(const ConstTree& tree) {
  std::string out;
  WriteNode(tree, out);
  return out;
}

std::string WriteBrackets(const std::vector<ConstTree>& trees) {
  std::string out;
  for (const auto& t : trees) {
    WriteNode(t, out);
    out += '\n';
  }
  return out;
}

Treebank ReadTreebank(const std::string& path, bool constituent) {
  Treebank tb;
  tb.constituent = constituent;
  if (constituent) {
    tb.cons = ReadBrackets(ReadFile(path));
  } else {
    tb.dep = ReadConll(ReadFile(path));
  }
  return tb;
}

void WriteTreebank(const std::string& path, const Treebank& treebank) {
  WriteFile(path, treebank.constituent ? WriteBrackets(treebank.cons) : WriteConll(treebank.dep));
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

}  // namespace encdec
