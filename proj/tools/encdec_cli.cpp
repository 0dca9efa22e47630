// Command-line front end: oracle, train, parse, eval, generate.

#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "encdec/checkpoint.hpp"
#include "encdec/error.hpp"
#include "encdec/evaluation.hpp"
#include "encdec/inference.hpp"
#include "encdec/oracle.hpp"
#include "encdec/synthetic.hpp"
#include "encdec/training.hpp"

namespace fs = std::filesystem;
using namespace encdec;

namespace {

void Emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    WriteFile(path, text);
  }
}

int RunOracle(const std::string& input, const std::string& formalism, const std::string& output) {
  const bool constituent = ParseFormalism(formalism) == Formalism::kConstituent;
  const Treebank tb = ReadTreebank(input, constituent);
  std::ostringstream os;
  int failed = 0;
  if (constituent) {
    const Vocabulary v = BuildConstVocab(tb.cons, 1);
    for (const auto& t : tb.cons) os << FormatActions(ConstOracle(t, v.labels), v.labels) << '\n';
  } else {
    const Vocabulary v = BuildDepVocab(tb.dep, 1);
    for (std::size_t i = 0; i < tb.dep.size(); ++i) {
      try {
        os << FormatActions(DepOracle(tb.dep[i], v.labels), v.labels) << '\n';
      } catch (const OracleError& e) {
        os << '\n';
        ++failed;
        std::cerr << "sentence " << i + 1 << ": " << e.what() << '\n';
      }
    }
  }
  Emit(output, os.str());
  if (failed) std::cerr << failed << " sentence(s) without a derivation (written as empty lines)\n";
  return 0;
}

int RunTrain(const std::string& config_path, const std::string& train_path, const std::string& dev_path,
             const std::string& out) {
  const TrainConfig config = ParseTrainConfig(ReadFile(config_path));
  const bool constituent = config.model.formalism == Formalism::kConstituent;
  const Treebank train = ReadTreebank(train_path, constituent);
  const Treebank dev = dev_path.empty() ? Treebank{constituent, {}, {}} : ReadTreebank(dev_path, constituent);
  PretrainedVectors vectors;
  if (!config.vectors.empty()) {
    vectors = LoadVectors(ReadFile(config.vectors));
    if (vectors.duplicates) std::cerr << vectors.duplicates << " duplicate vector entries (last one kept)\n";
  }
  const char* metric = constituent ? "F1" : "UAS";
  std::cerr << "epoch\ttrain_loss\tdev_loss\tdev_action_acc\tdev_" << metric << "\tseconds\n";
  auto progress = [&](const EpochRecord& r) {
    std::cerr << std::fixed << std::setprecision(4) << r.epoch << '\t' << r.train_loss << '\t' << r.dev.loss << '\t'
              << r.dev.action_accuracy << '\t' << r.dev.structure << '\t' << std::setprecision(1) << r.seconds
              << std::endl;
  };
  TrainResult result =
      Train(config, train, dev, config.vectors.empty() ? nullptr : &vectors, progress);
  if (result.report.skipped) {
    std::cerr << result.report.skipped << " training sentence(s) skipped (no derivation, e.g. non-projective)\n";
  }
  std::cerr << "best epoch: " << result.report.best_epoch << '\n';
  SaveCheckpoint(out, result.parser);
  return 0;
}

int RunParse(const std::string& model_path, const std::string& input, const std::string& format,
             const std::string& trace_dir, const std::string& output) {
  const Parser parser = LoadCheckpoint(model_path);
  const bool constituent = parser.formalism() == Formalism::kConstituent;
  if ((format == "brackets") != constituent) {
    throw std::invalid_argument("--format " + format + " does not match the model's formalism (" +
                                FormalismName(parser.formalism()) + ")");
  }
  const Treebank in = ReadTreebank(input, constituent);
  if (!trace_dir.empty()) fs::create_directories(trace_dir);
  Treebank out;
  out.constituent = constituent;
  for (std::size_t i = 0; i < in.size(); ++i) {
    const std::vector<Token> tokens = in.Tokens(i);
    ParseResult r;
    try {
      r = Parse(parser, tokens);
    } catch (const RunawayDecodeError& e) {
      std::cerr << "sentence " << i + 1 << ": " << e.what() << "; writing a flat tree\n";
      out.cons.push_back(FlatTree(parser, tokens));
      continue;
    }
    if (!trace_dir.empty()) {
      WriteFile((fs::path(trace_dir) / ("sent" + std::to_string(i + 1) + ".attn")).string(),
                FormatAttentionTrace(parser, tokens, r));
    }
    if (r.dep) {
      out.dep.push_back(std::move(*r.dep));
    } else {
      out.cons.push_back(std::move(*r.cons));
    }
  }
  Emit(output, constituent ? WriteBrackets(out.cons) : WriteConll(out.dep));
  return 0;
}

int RunEval(const std::string& gold_path, const std::string& pred_path, const std::string& mode,
            const std::string& breakdowns, bool keep_root) {
  const bool constituent = mode == "const";
  if (!constituent && mode != "dep") throw std::invalid_argument("--mode must be dep or const");
  const Treebank gold = ReadTreebank(gold_path, constituent);
  const Treebank pred = ReadTreebank(pred_path, constituent);
  if (!breakdowns.empty()) fs::create_directories(breakdowns);
  auto dump = [&](const std::string& name, const std::string& text) {
    WriteFile((fs::path(breakdowns) / name).string(), text);
  };
  std::cout << std::fixed << std::setprecision(2);
  if (constituent) {
    const BracketScore s = ScoreConstituent(pred.cons, gold.cons, !keep_root);
    std::cout << "# labeled brackets, root " << (keep_root ? "included" : "excluded") << '\n'
              << "precision\t" << s.precision() << "\nrecall\t" << s.recall() << "\nf1\t" << s.f1() << '\n';
    if (!breakdowns.empty()) dump("length.tsv", FormatBreakdown("length_bin", "f1", ConstBreakdownByLength(pred.cons, gold.cons, 10, !keep_root)));
  } else {
    const DepScore s = ScoreDependency(pred.dep, gold.dep);
    std::cout << "# punctuation (`` '' : , .) excluded\n"
              << "uas\t" << s.uas() << "\nlas\t" << s.las() << "\ntokens\t" << s.tokens << '\n';
    if (!breakdowns.empty()) {
      dump("length.tsv", FormatBreakdown("length_bin", "uas", DepBreakdownByLength(pred.dep, gold.dep)));
      dump("arc_length.tsv", FormatBreakdown("arc_length", "precision", BreakdownByArcLength(pred.dep, gold.dep)));
      dump("pos.tsv", FormatBreakdown("pos", "recall", BreakdownByPos(pred.dep, gold.dep)));
    }
  }
  return 0;
}

int RunGenerate(std::size_t sentences, std::uint64_t seed, int min_length, int max_length,
                const std::string& dep_out, const std::string& const_out) {
  SyntheticOptions opt;
  opt.sentences = sentences;
  opt.seed = seed;
  opt.min_length = min_length;
  opt.max_length = max_length;
  const SyntheticCorpus c = GenerateCorpus(opt);
  if (!dep_out.empty()) WriteFile(dep_out, WriteConll(c.dep));
  if (!const_out.empty()) WriteFile(const_out, WriteBrackets(c.cons));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Encoder-decoder shift-reduce parser"};
  app.require_subcommand(1);

  std::string input, output, formalism = "dep";
  auto* oracle = app.add_subcommand("oracle", "Write gold action sequences");
  oracle->add_option("--input", input, "Treebank (CoNLL or brackets)")->required();
  oracle->add_option("--formalism", formalism, "dep or const")->check(CLI::IsMember({"dep", "const", "dependency", "constituent"}));
  oracle->add_option("--output", output, "Output file (default stdout)");

  std::string config, train, dev, out;
  auto* tr = app.add_subcommand("train", "Train a model");
  tr->add_option("--config", config, "key = value config file")->required();
  tr->add_option("--train", train, "Training treebank")->required();
  tr->add_option("--dev", dev, "Development treebank");
  tr->add_option("--out", out, "Checkpoint to write")->required();

  std::string model, format, trace;
  auto* parse = app.add_subcommand("parse", "Parse with a trained model");
  parse->add_option("--model", model, "Checkpoint")->required();
  parse->add_option("--input", input, "Sentences in CoNLL or bracket form")->required();
  parse->add_option("--format", format, "conll or brackets")->required()->check(CLI::IsMember({"conll", "brackets"}));
  parse->add_option("--trace", trace, "Directory for per-sentence attention traces");
  parse->add_option("--output", output, "Output file (default stdout)");

  std::string gold, pred, mode, breakdowns;
  bool keep_root = false;
  auto* ev = app.add_subcommand("eval", "Score predictions against gold");
  ev->add_option("--gold", gold, "Gold treebank")->required();
  ev->add_option("--pred", pred, "Predicted treebank")->required();
  ev->add_option("--mode", mode, "dep or const")->required()->check(CLI::IsMember({"dep", "const"}));
  ev->add_option("--breakdowns", breakdowns, "Directory for breakdown tables");
  ev->add_flag("--keep-root", keep_root, "Score the root bracket too (const)");

  std::size_t sentences = 100;
  std::uint64_t seed = 1;
  int min_length = 6, max_length = 30;
  std::string dep_out, const_out;
  auto* gen = app.add_subcommand("generate", "Write a synthetic treebank");
  gen->add_option("--sentences", sentences);
  gen->add_option("--seed", seed);
  gen->add_option("--min-length", min_length);
  gen->add_option("--max-length", max_length);
  gen->add_option("--dep", dep_out, "CoNLL output");
  gen->add_option("--const", const_out, "Bracket output");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*oracle) return RunOracle(input, formalism, output);
    if (*tr) return RunTrain(config, train, dev, out);
    if (*parse) return RunParse(model, input, format, trace, output);
    if (*ev) return RunEval(gold, pred, mode, breakdowns, keep_root);
    if (*gen) return RunGenerate(sentences, seed, min_length, max_length, dep_out, const_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
