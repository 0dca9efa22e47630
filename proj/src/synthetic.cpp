#include "encdec/synthetic.hpp"

#include <random>
#include <set>
#include <string>

namespace encdec {

namespace {

struct Node {
  std::string label;  // nonterminal, or the POS tag of a leaf
  std::string form;   // leaves only
  std::string rel;    // relation of this node's head word to its parent's
  int head = 0;       // head child of an internal node
  std::vector<Node> kids;

  bool leaf() const { return kids.empty(); }
};

Node Word(std::string pos, std::string form, std::string rel) { return Node{std::move(pos), std::move(form), std::move(rel), 0, {}}; }

Node Phrase(std::string label, std::string rel, int head, std::vector<Node> kids) {
  return Node{std::move(label), "", std::move(rel), head, std::move(kids)};
}

// Pseudo-words are built from a fixed seed so the lexicon does not depend
// on the corpus seed.
class Lexicon {
 public:
  Lexicon() {
    std::mt19937_64 rng(20150000);
    for (const char* w : {"the", "a", "this", "every", "some", "he", "she", "they", "we", "it", "with", "on", "in",
                          "near", "from", "under", "and", "or", "that"}) {
      used_.insert(w);
    }
    verb_nouns = Make(rng, 60);
    noun_nouns = Make(rng, 60);
    proper = Make(rng, 30);
    for (auto& w : proper) w[0] = static_cast<char>(w[0] - 'a' + 'A');
    transitive = Make(rng, 40, "ed");
    intransitive = Make(rng, 25, "ed");
    saying = Make(rng, 8, "ed");
    adjectives = Make(rng, 40, "y");
    adverbs = Make(rng, 20, "ly");
  }

  std::vector<std::string> verb_nouns;  // objects of verb-attached PPs
  std::vector<std::string> noun_nouns;  // objects of noun-attached PPs
  std::vector<std::string> proper, transitive, intransitive, saying, adjectives, adverbs;
  const std::vector<std::string> determiners{"the", "a", "this", "every", "some"};
  const std::vector<std::string> pronouns{"he", "she", "they", "we", "it"};
  const std::vector<std::string> prepositions{"with", "on", "in", "near", "from", "under"};
  const std::vector<std::string> conjunctions{"and", "or"};

 private:
  std::vector<std::string> Make(std::mt19937_64& rng, int count, const std::string& suffix = "") {
    static const char* onsets[] = {"b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z",
                                   "bl", "br", "dr", "fl", "gr", "kl", "pr", "sk", "sl", "st", "tr"};
    static const char* vowels[] = {"a", "e", "i", "o", "u", "ai", "ee", "oo"};
    static const char* codas[] = {"", "b", "d", "g", "k", "l", "m", "n", "p", "r", "t", "x", "nd", "st"};
    std::vector<std::string> out;
    while (static_cast<int>(out.size()) < count) {
      const int syllables = 1 + static_cast<int>(rng() % 2);
      std::string w;
      for (int s = 0; s < syllables; ++s) {
        w += onsets[rng() % std::size(onsets)];
        w += vowels[rng() % std::size(vowels)];
        w += codas[rng() % std::size(codas)];
      }
      w += suffix;
      if (used_.insert(w).second) out.push_back(w);
    }
    return out;
  }

  std::set<std::string> used_;
};

const Lexicon& Lex() {
  static const Lexicon lex;
  return lex;
}

class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  Node Sentence() {
    std::vector<Node> kids;
    int head = 1;
    if (Coin(0.15)) {
      kids.push_back(Phrase("ADVP", "advmod", 0, {Word("RB", Pick(Lex().adverbs), "advmod")}));
      kids.push_back(Word(",", ",", "punct"));
      head = 3;
    }
    kids.push_back(Subject(0));
    kids.push_back(VerbPhrase(0));
    kids.push_back(Word(".", ".", "punct"));
    return Phrase("S", "root", head, std::move(kids));
  }

 private:
  bool Coin(double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < p; }

  // Zipf-like choice: item r has weight 1 / (r + 1).
  const std::string& Pick(const std::vector<std::string>& words) {
    std::vector<double> w(words.size());
    for (std::size_t r = 0; r < w.size(); ++r) w[r] = 1.0 / static_cast<double>(r + 1);
    return words[std::discrete_distribution<std::size_t>(w.begin(), w.end())(rng_)];
  }

  // Determiner, adjectives and a common noun; plural half the time.
  Node CommonNoun(const std::string& rel, const std::vector<std::string>& nouns) {
    std::vector<Node> kids;
    const bool plural = Coin(0.3);
    if (!plural || Coin(0.5)) kids.push_back(Word("DT", Pick(Lex().determiners), "det"));
    while (kids.size() < 3 && Coin(0.35)) kids.push_back(Word("JJ", Pick(Lex().adjectives), "amod"));
    const int head = static_cast<int>(kids.size());
    kids.push_back(plural ? Word("NNS", Pick(nouns) + "s", rel) : Word("NN", Pick(nouns), rel));
    return Phrase("NP", rel, head, std::move(kids));
  }

  Node Subject(int depth) {
    const double r = std::uniform_real_distribution<double>(0.0, 1.0)(rng_);
    if (r < 0.2) return Phrase("NP", "nsubj", 0, {Word("PRP", Pick(Lex().pronouns), "nsubj")});
    if (r < 0.4) {
      std::vector<Node> kids;
      if (Coin(0.3)) kids.push_back(Word("NNP", Pick(Lex().proper), "nn"));
      kids.push_back(Word("NNP", Pick(Lex().proper), "nsubj"));
      const int head = static_cast<int>(kids.size()) - 1;
      return Phrase("NP", "nsubj", head, std::move(kids));
    }
    Node np = CommonNoun("nsubj", Coin(0.5) ? Lex().verb_nouns : Lex().noun_nouns);
    if (depth == 0 && Coin(0.15)) np = AttachPP(std::move(np), depth);
    if (depth == 0 && Coin(0.08)) {
      Node other = CommonNoun("conj", Lex().noun_nouns);
      np = Phrase("NP", "nsubj", 0, {std::move(np), Word("CC", Pick(Lex().conjunctions), "cc"), std::move(other)});
    }
    return np;
  }

  Node PrepPhrase(bool verb_attached, int depth) {
    Node obj = CommonNoun("pobj", verb_attached ? Lex().verb_nouns : Lex().noun_nouns);
    if (!verb_attached && depth < 1 && Coin(0.2)) obj = AttachPP(std::move(obj), depth + 1);
    return Phrase("PP", "prep", 0, {Word("IN", Pick(Lex().prepositions), "prep"), std::move(obj)});
  }

  // NP -> NP PP with a noun-attached preposition.
  Node AttachPP(Node np, int depth) {
    const std::string rel = np.rel;
    return Phrase("NP", rel, 0, {std::move(np), PrepPhrase(false, depth)});
  }

  Node VerbPhrase(int depth) {
    const double r = std::uniform_real_distribution<double>(0.0, 1.0)(rng_);
    std::vector<Node> kids;
    if (r < 0.6) {
      kids.push_back(Word("VBD", Pick(Lex().transitive), "root"));
      Node obj = CommonNoun("dobj", Coin(0.5) ? Lex().verb_nouns : Lex().noun_nouns);
      if (Coin(0.5)) {
        // The PP object's class decides where it attaches.
        if (Coin(0.5)) {
          kids.push_back(std::move(obj));
          kids.push_back(PrepPhrase(true, depth));
        } else {
          kids.push_back(AttachPP(std::move(obj), depth));
        }
      } else {
        kids.push_back(std::move(obj));
      }
    } else if (r < 0.85 || depth >= 1) {
      kids.push_back(Word("VBD", Pick(Lex().intransitive), "root"));
      if (Coin(0.6)) kids.push_back(PrepPhrase(true, depth));
    } else {
      kids.push_back(Word("VBD", Pick(Lex().saying), "root"));
      Node clause = Phrase("S", "ccomp", 1, {Subject(depth + 1), VerbPhrase(depth + 1)});
      kids.push_back(Phrase("SBAR", "ccomp", 1, {Word("IN", "that", "mark"), std::move(clause)}));
    }
    if (Coin(0.15)) kids.push_back(Phrase("ADVP", "advmod", 0, {Word("RB", Pick(Lex().adverbs), "advmod")}));
    return Phrase("VP", "root", 0, std::move(kids));
  }

  std::mt19937_64 rng_;
};

int EmitDep(const Node& n, DepSentence& s) {
  if (n.leaf()) {
    s.tokens.push_back({n.form, n.label, static_cast<int>(s.tokens.size()) + 1});
    s.heads.push_back(0);
    s.labels.push_back(n.rel);
    return static_cast<int>(s.tokens.size());
  }
  std::vector<int> heads;
  for (const auto& k : n.kids) heads.push_back(EmitDep(k, s));
  const int h = heads[n.head];
  for (std::size_t k = 0; k < n.kids.size(); ++k) {
    if (static_cast<int>(k) == n.head) continue;
    s.heads[heads[k] - 1] = h;
    s.labels[heads[k] - 1] = n.kids[k].rel;
  }
  return h;
}

ConstTree EmitConst(const Node& n, int& next) {
  if (n.leaf()) return ConstTree::Leaf(Token{n.form, n.label, next++});
  std::vector<ConstTree> kids;
  for (const auto& k : n.kids) kids.push_back(EmitConst(k, next));
  return ConstTree::Node(n.label, std::move(kids));
}

int CountLeaves(const Node& n) {
  if (n.leaf()) return 1;
  int c = 0;
  for (const auto& k : n.kids) c += CountLeaves(k);
  return c;
}

}  // namespace

SyntheticCorpus GenerateCorpus(const SyntheticOptions& options) {
  Generator gen(options.seed);
  SyntheticCorpus out;
  while (out.dep.size() < options.sentences) {
    const Node s = gen.Sentence();
    const int n = CountLeaves(s);
    if (n < options.min_length || n > options.max_length) continue;
    DepSentence dep;
    const int root = EmitDep(s, dep);
    dep.heads[root - 1] = 0;
    dep.labels[root - 1] = "root";
    int next = 1;
    out.cons.push_back(EmitConst(s, next));
    out.dep.push_back(std::move(dep));
  }
  return out;
}

}  // namespace encdec
