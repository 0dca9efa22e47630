#include "encdec/config.hpp"

#include <cctype>
#include <charconv>
#include <functional>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>

namespace encdec {

std::string DecoderVariantName(DecoderVariant v) {
  switch (v) {
    case DecoderVariant::kVanilla: return "vanilla";
    case DecoderVariant::kStackQueueAverage: return "sq-average";
    case DecoderVariant::kStackQueueAttention: return "sq-attention";
  }
  return "?";
}

DecoderVariant ParseDecoderVariant(std::string_view name) {
  if (name == "vanilla") return DecoderVariant::kVanilla;
  if (name == "sq-average") return DecoderVariant::kStackQueueAverage;
  if (name == "sq-attention") return DecoderVariant::kStackQueueAttention;
  throw std::invalid_argument("unknown decoder variant '" + std::string(name) + "'");
}

void ModelConfig::Validate() const {
  for (int d : {word_dim, fixed_dim, pos_dim, label_dim, action_dim, enc_input_dim, enc_hidden_dim,
                enc_layers, dec_hidden_dim, dec_input_dim, attention_dim, max_open_nts}) {
    if (d <= 0) throw std::invalid_argument("model dimensions must be positive");
  }
  if (dec_hidden_dim != 2 * enc_hidden_dim) {
    throw std::invalid_argument("dec_hidden_dim must equal 2 * enc_hidden_dim (decoder starts from [h_l_n; h_r_1])");
  }
}

void TrainConfig::Validate() const {
  model.Validate();
  if (l2 < 0) throw std::invalid_argument("l2 must be >= 0");
  if (adam_alpha <= 0 || adam_eps <= 0) throw std::invalid_argument("adam_alpha and adam_eps must be > 0");
  if (adam_beta1 < 0 || adam_beta1 >= 1 || adam_beta2 < 0 || adam_beta2 >= 1) {
    throw std::invalid_argument("adam betas must lie in [0, 1)");
  }
  if (clip_norm < 0) throw std::invalid_argument("clip_norm must be >= 0");
  if (epochs < 0) throw std::invalid_argument("epochs must be >= 0");
  if (min_freq < 1) throw std::invalid_argument("min_freq must be >= 1");
}

namespace {

using Setter = std::function<void(TrainConfig&, const std::string&)>;

int ToInt(const std::string& v) {
  int x = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size()) throw std::invalid_argument("expected integer, got '" + v + "'");
  return x;
}

double ToDouble(const std::string& v) {
  std::size_t used = 0;
  double x = 0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty()) throw std::invalid_argument("expected number, got '" + v + "'");
  return x;
}

std::uint64_t ToU64(const std::string& v) {
  std::uint64_t x = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size()) throw std::invalid_argument("expected unsigned integer, got '" + v + "'");
  return x;
}

bool ToBool(const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw std::invalid_argument("expected true/false, got '" + v + "'");
}

const std::map<std::string, Setter>& Setters() {
  static const std::map<std::string, Setter> setters = {
      {"formalism", [](TrainConfig& c, const std::string& v) { c.model.formalism = ParseFormalism(v); }},
      {"decoder", [](TrainConfig& c, const std::string& v) { c.model.decoder = ParseDecoderVariant(v); }},
      {"word_dim", [](TrainConfig& c, const std::string& v) { c.model.word_dim = ToInt(v); }},
      {"fixed_dim", [](TrainConfig& c, const std::string& v) { c.model.fixed_dim = ToInt(v); }},
      {"pos_dim", [](TrainConfig& c, const std::string& v) { c.model.pos_dim = ToInt(v); }},
      {"label_dim", [](TrainConfig& c, const std::string& v) { c.model.label_dim = ToInt(v); }},
      {"action_dim", [](TrainConfig& c, const std::string& v) { c.model.action_dim = ToInt(v); }},
      {"enc_input_dim", [](TrainConfig& c, const std::string& v) { c.model.enc_input_dim = ToInt(v); }},
      {"enc_hidden_dim", [](TrainConfig& c, const std::string& v) { c.model.enc_hidden_dim = ToInt(v); }},
      {"enc_layers", [](TrainConfig& c, const std::string& v) { c.model.enc_layers = ToInt(v); }},
      {"dec_hidden_dim", [](TrainConfig& c, const std::string& v) { c.model.dec_hidden_dim = ToInt(v); }},
      {"dec_input_dim", [](TrainConfig& c, const std::string& v) { c.model.dec_input_dim = ToInt(v); }},
      {"attention_dim", [](TrainConfig& c, const std::string& v) { c.model.attention_dim = ToInt(v); }},
      {"max_open_nts", [](TrainConfig& c, const std::string& v) { c.model.max_open_nts = ToInt(v); }},
      {"l2", [](TrainConfig& c, const std::string& v) { c.l2 = ToDouble(v); }},
      {"adam_alpha", [](TrainConfig& c, const std::string& v) { c.adam_alpha = ToDouble(v); }},
      {"adam_beta1", [](TrainConfig& c, const std::string& v) { c.adam_beta1 = ToDouble(v); }},
      {"adam_beta2", [](TrainConfig& c, const std::string& v) { c.adam_beta2 = ToDouble(v); }},
      {"adam_eps", [](TrainConfig& c, const std::string& v) { c.adam_eps = ToDouble(v); }},
      {"clip_norm", [](TrainConfig& c, const std::string& v) { c.clip_norm = ToDouble(v); }},
      {"epochs", [](TrainConfig& c, const std::string& v) { c.epochs = ToInt(v); }},
      {"seed", [](TrainConfig& c, const std::string& v) { c.seed = ToU64(v); }},
      {"shuffle", [](TrainConfig& c, const std::string& v) { c.shuffle = ToBool(v); }},
      {"min_freq", [](TrainConfig& c, const std::string& v) { c.min_freq = ToInt(v); }},
      {"stop_at_action_accuracy",
       [](TrainConfig& c, const std::string& v) { c.stop_at_action_accuracy = ToDouble(v); }},
      {"vectors", [](TrainConfig& c, const std::string& v) { c.vectors = v; }},
  };
  return setters;
}

std::string Trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

TrainConfig ParseTrainConfig(std::string_view text) {
  TrainConfig config;
  std::istringstream is{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::string trimmed = Trim(line);
    if (trimmed.empty()) continue;
    const std::size_t eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = Trim(std::string_view(trimmed).substr(0, eq));
    const std::string value = Trim(std::string_view(trimmed).substr(eq + 1));
    auto it = Setters().find(key);
    if (it == Setters().end()) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    try {
      it->second(config, value);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + " (" + key + "): " + e.what());
    }
  }
  config.Validate();
  return config;
}

std::string FormatTrainConfig(const TrainConfig& c) {
  std::ostringstream os;
  os << std::setprecision(17);
  const ModelConfig& m = c.model;
  os << "formalism = " << FormalismName(m.formalism) << '\n'
     << "decoder = " << DecoderVariantName(m.decoder) << '\n'
     << "word_dim = " << m.word_dim << '\n'
     << "fixed_dim = " << m.fixed_dim << '\n'
     << "pos_dim = " << m.pos_dim << '\n'
     << "label_dim = " << m.label_dim << '\n'
     << "action_dim = " << m.action_dim << '\n'
     << "enc_input_dim = " << m.enc_input_dim << '\n'
     << "enc_hidden_dim = " << m.enc_hidden_dim << '\n'
     << "enc_layers = " << m.enc_layers << '\n'
     << "dec_hidden_dim = " << m.dec_hidden_dim << '\n'
     << "dec_input_dim = " << m.dec_input_dim << '\n'
     << "attention_dim = " << m.attention_dim << '\n'
     << "max_open_nts = " << m.max_open_nts << '\n'
     << "l2 = " << c.l2 << '\n'
     << "adam_alpha = " << c.adam_alpha << '\n'
     << "adam_beta1 = " << c.adam_beta1 << '\n'
     << "adam_beta2 = " << c.adam_beta2 << '\n'
     << "adam_eps = " << c.adam_eps << '\n'
     << "clip_norm = " << c.clip_norm << '\n'
     << "epochs = " << c.epochs << '\n'
     << "seed = " << c.seed << '\n'
     << "shuffle = " << (c.shuffle ? "true" : "false") << '\n'
     << "min_freq = " << c.min_freq << '\n'
     << "stop_at_action_accuracy = " << c.stop_at_action_accuracy << '\n'
     << "vectors = " << c.vectors << '\n';
  return os.str();
}

}  // namespace encdec
