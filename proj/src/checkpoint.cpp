#include "encdec/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <sstream>

#include "encdec/error.hpp"
#include "encdec/treebank.hpp"

namespace encdec {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

namespace {

class Writer {
 public:
  template <typename U>
  void Put(U x) {
    char buf[sizeof(U)];
    std::memcpy(buf, &x, sizeof(U));
    out_.append(buf, sizeof(U));
  }
  void Bytes(std::string_view s) { out_.append(s.data(), s.size()); }
  void Text(std::string_view s) {
    Put<std::uint64_t>(s.size());
    Bytes(s);
  }
  std::string& str() { return out_; }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}

  template <typename U>
  U Get() {
    Need(sizeof(U));
    U x;
    std::memcpy(&x, in_.data() + pos_, sizeof(U));
    pos_ += sizeof(U);
    return x;
  }
  std::string_view Bytes(std::size_t n) {
    Need(n);
    std::string_view s = in_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::string Text() { return std::string(Bytes(Get<std::uint64_t>())); }
  bool done() const { return pos_ == in_.size(); }

 private:
  void Need(std::size_t n) const {
    if (in_.size() - pos_ < n) throw ParseError("checkpoint truncated", pos_);
  }

  std::string_view in_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string SerializeParser(const Parser& parser) {
  Writer w;
  w.Bytes(kCheckpointMagic);
  w.Put<std::uint32_t>(kCheckpointVersion);
  w.Text(FormatTrainConfig(parser.config));
  w.Text(SaveVocabulary(parser.vocab));
  std::string fixed;
  for (const auto& s : parser.fixed_words.symbols()) fixed += s + "\n";
  w.Text(fixed);
  const auto& entries = parser.model.params().entries();
  w.Put<std::uint32_t>(static_cast<std::uint32_t>(entries.size()));
  for (const auto& e : entries) {
    w.Put<std::uint32_t>(static_cast<std::uint32_t>(e.name.size()));
    w.Bytes(e.name);
    w.Put<std::uint8_t>(e.trainable ? 1 : 0);
    w.Put<std::uint32_t>(static_cast<std::uint32_t>(e.tensor.shape().size()));
    for (auto d : e.tensor.shape()) w.Put<std::uint64_t>(d);
    w.Bytes(std::string_view(reinterpret_cast<const char*>(e.tensor.data()), e.tensor.size() * sizeof(float)));
  }
  return std::move(w.str());
}

Parser DeserializeParser(std::string_view bytes) {
  Reader r(bytes);
  if (r.Bytes(kCheckpointMagic.size()) != kCheckpointMagic) throw ParseError("not a checkpoint file", 0);
  const auto version = r.Get<std::uint32_t>();
  if (version != kCheckpointVersion) {
    throw ParseError("unsupported checkpoint version " + std::to_string(version), kCheckpointMagic.size());
  }
  Parser p;
  p.config = ParseTrainConfig(r.Text());
  p.vocab = LoadVocabulary(r.Text());
  std::istringstream fixed(r.Text());
  for (std::string line; std::getline(fixed, line);) p.fixed_words.Add(line);

  VocabSizes sizes;
  sizes.words = p.vocab.words.size();
  sizes.pos = p.vocab.pos.size();
  sizes.labels = std::max(1, p.vocab.labels.size());
  sizes.actions = p.vocab.actions().size();
  sizes.fixed = p.fixed_words.size() + 1;
  p.model = Model<float>(p.config.model, sizes);

  const auto count = r.Get<std::uint32_t>();
  auto& entries = p.model.params().entries();
  if (count != entries.size()) throw ValidationError("checkpoint parameter count does not match its config");
  for (auto& e : entries) {
    const std::string name(r.Bytes(r.Get<std::uint32_t>()));
    if (name != e.name) throw ValidationError("checkpoint parameter '" + name + "' where '" + e.name + "' expected");
    e.trainable = r.Get<std::uint8_t>() != 0;
    const auto rank = r.Get<std::uint32_t>();
    std::vector<std::size_t> shape;
    for (std::uint32_t k = 0; k < rank; ++k) shape.push_back(r.Get<std::uint64_t>());
    if (shape != e.tensor.shape()) throw ValidationError("checkpoint parameter '" + name + "' has the wrong shape");
    std::string_view raw = r.Bytes(e.tensor.size() * sizeof(float));
    std::memcpy(e.tensor.data(), raw.data(), raw.size());
  }
  if (!r.done()) throw ParseError("trailing bytes after checkpoint", bytes.size());
  return p;
}

void SaveCheckpoint(const std::string& path, const Parser& parser) { WriteFile(path, SerializeParser(parser)); }

Parser LoadCheckpoint(const std::string& path) { return DeserializeParser(ReadFile(path)); }

}  // namespace encdec
