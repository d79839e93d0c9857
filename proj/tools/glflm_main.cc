// Copyright 2026 The glflm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// glflm: preprocess -> count -> train -> eval from the command line.

#include <algorithm>
#include <array>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "fmt/format.h"
#include "glflm/arpa.h"
#include "glflm/class_model.h"
#include "glflm/corpus.h"
#include "glflm/count_io.h"
#include "glflm/errors.h"
#include "glflm/evaluation.h"
#include "glflm/kn_model.h"
#include "glflm/ngram_counts.h"
#include "glflm/preprocess.h"
#include "glflm/report.h"
#include "glflm/vocabulary.h"
#include "run_manifest.h"
#include "spdlog/sinks/stdout_color_sinks.h"
#include "spdlog/spdlog.h"

namespace glflm::tools {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitMalformed = 2;
constexpr int kExitIo = 3;

// Usage problems found after parsing.
class UsageError : public Error {
 public:
  using Error::Error;
};

std::ifstream OpenIn(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  return in;
}

std::ofstream OpenOut(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void Flush(std::ofstream& out, const fs::path& path) {
  if (!out.flush()) throw IoError("write failed: " + path.string());
}

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<uint64_t> ParseCountList(const std::string& text) {
  std::vector<uint64_t> out;
  for (const std::string& item : SplitList(text)) {
    try {
      size_t used = 0;
      const unsigned long long value = std::stoull(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(value);
    } catch (const std::exception&) {
      throw UsageError("not a count list: " + text);
    }
  }
  return out;
}

std::array<double, 3> ParseSplits(const std::string& text) {
  const auto items = SplitList(text);
  if (items.size() != 3) throw UsageError("--splits needs three ratios");
  std::array<double, 3> ratios;
  for (int i = 0; i < 3; ++i) {
    try {
      size_t used = 0;
      ratios[i] = std::stod(items[i], &used);
      if (used != items[i].size()) throw std::invalid_argument(items[i]);
    } catch (const std::exception&) {
      throw UsageError("bad ratio in --splits: " + items[i]);
    }
  }
  return ratios;
}

std::string JoinSet(const std::set<std::string>& items) {
  std::string out;
  for (const auto& item : items) {
    if (!out.empty()) out += ',';
    out += item;
  }
  return out;
}

Vocabulary LoadVocabulary(const fs::path& path) {
  auto in = OpenIn(path);
  return Vocabulary::Read(in);
}

std::vector<TokenSentence> LoadPlain(const fs::path& path) {
  auto in = OpenIn(path);
  PlainCorpusReader reader(in);
  std::vector<TokenSentence> out;
  TokenSentence s;
  while (reader.Next(&s)) out.push_back(s);
  return out;
}

std::vector<std::vector<WordId>> LoadEncoded(const fs::path& path,
                                             const Vocabulary& vocab,
                                             bool map_unknown) {
  std::vector<std::vector<WordId>> out;
  for (const TokenSentence& s : LoadPlain(path)) {
    out.push_back(map_unknown ? vocab.EncodeOrUnk(s) : vocab.Encode(s));
  }
  return out;
}

NGramModel LoadModel(const fs::path& path) {
  auto in = OpenIn(path);
  char magic[8] = {};
  in.read(magic, sizeof(magic));
  in.clear();
  in.seekg(0);
  if (std::string_view(magic, sizeof(magic)) == "GLFMODEL") {
    return ReadBinaryModel(in);
  }
  return ReadArpa(in);
}

// Options shared by every training command.
struct TrainOptions {
  int order = 5;
  std::string preset = "unpruned-interpolated";
  std::string flavor;      // empty: from the preset
  std::string min_counts;  // empty: from the preset

  void Bind(CLI::App* cmd) {
    cmd->add_option("--order", order, "Model order")
        ->check(CLI::Range(1, kMaxOrder))
        ->capture_default_str();
    cmd->add_option("--preset", preset, "Training preset")
        ->check(CLI::IsMember({"srilm-default", "unpruned-interpolated"}))
        ->capture_default_str();
    cmd->add_option("--flavor", flavor, "Override the preset flavor")
        ->check(CLI::IsMember({"backoff", "interpolated"}));
    cmd->add_option("--min-counts", min_counts,
                    "Override per-order minimum counts, e.g. 1,1,2,2,2");
  }

  TrainConfig Resolve() const {
    TrainConfig config = preset == "srilm-default"
                             ? TrainConfig::SrilmDefault(order)
                             : TrainConfig::UnprunedInterpolated(order);
    if (!flavor.empty()) config.flavor = ParseFlavor(flavor);
    if (!min_counts.empty()) config.min_counts = ParseCountList(min_counts);
    config.Validate();
    return config;
  }

  static Json ToJson(const TrainConfig& config) {
    return {{"order", config.order},
            {"flavor", FlavorName(config.flavor)},
            {"min_counts", config.min_counts}};
  }
};

struct Common {
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::string manifest;
  bool print_config = false;
  std::string log_level = "info";
};

// Writes the manifest to --manifest or the command's default location.
void Finish(RunManifest& manifest, const Common& common,
            const fs::path& default_path) {
  const fs::path path = common.manifest.empty() ? default_path
                                                : fs::path(common.manifest);
  manifest.Write(path);
  spdlog::info("manifest: {}", path.string());
}

struct PreprocessCmd {
  std::string input;
  std::string format = "annotated";
  std::string mode = "glf";
  bool word = false, glf = false, full_pos = false, pos_glf = false;
  uint64_t threshold = 3;
  uint64_t seed = 0;
  std::string splits = "0.9,0.05,0.05";
  bool dedup = false;
  std::string out_dir;
  std::string filter;
  std::string derivational = "COMPAR,SUPERLAT";
  std::string inflectional = JoinSet(DefaultInflectionalTags());

  void Bind(CLI::App* cmd) {
    cmd->add_option("input,--input", input, "Corpus file")->required();
    cmd->add_option("--format", format, "Input format")
        ->check(CLI::IsMember({"annotated", "plain"}))
        ->capture_default_str();
    cmd->add_option("--mode", mode, "Token mode")
        ->check(CLI::IsMember({"word", "glf", "full-pos", "pos-glf"}))
        ->capture_default_str();
    auto* g = cmd->add_option_group("mode flags");
    g->add_flag("--word", word, "Lowercased surface forms");
    g->add_flag("--glf", glf, "Lemma plus split affixes");
    g->add_flag("--full-pos", full_pos, "Whole morph code per word");
    g->add_flag("--pos-glf", pos_glf, "Morph head plus split affixes");
    g->require_option(0, 1);
    cmd->add_option("--threshold", threshold, "Frequency cut to <unk>")
        ->capture_default_str();
    cmd->add_option("--seed", seed, "Shuffle seed")->capture_default_str();
    cmd->add_option("--splits", splits, "train,dev,test ratios")
        ->capture_default_str();
    cmd->add_flag("--dedup", dedup, "Drop repeated sentences");
    cmd->add_option("--out-dir", out_dir, "Output directory")->required();
    cmd->add_option("--filter", filter, "Affix tags to drop, comma separated");
    cmd->add_option("--derivational", derivational,
                    "Derivational affix names to split")
        ->capture_default_str();
    cmd->add_option("--inflectional", inflectional,
                    "Inflectional affix names to split")
        ->capture_default_str();
  }

  int Run(const Common& common, RunManifest& manifest) const {
    PipelineOptions options;
    options.format = format == "plain" ? CorpusFormat::kPlainTokens
                                       : CorpusFormat::kAnnotatedTsv;
    std::string chosen = mode;
    if (word) chosen = "word";
    if (glf) chosen = "glf";
    if (full_pos) chosen = "full-pos";
    if (pos_glf) chosen = "pos-glf";
    options.mode = ParseTokenMode(chosen);
    options.dedup = dedup;
    PreprocessConfig& config = options.config;
    config.threshold = threshold;
    config.shuffle_seed = seed;
    config.split_ratios = ParseSplits(splits);
    for (const auto& tag : SplitList(filter)) {
      config.zero_morpheme_filter.insert(tag);
    }
    const auto derivational_tags = SplitList(derivational);
    config.included_derivational_tags = {derivational_tags.begin(),
                                         derivational_tags.end()};
    const auto inflectional_tags = SplitList(inflectional);
    config.inflectional_tags = {inflectional_tags.begin(),
                                inflectional_tags.end()};
    try {
      config.Validate();
    } catch (const InvalidConfig& e) {
      throw UsageError(e.what());
    }

    manifest.config() = {{"input", input},
                         {"format", format},
                         {"mode", TokenModeName(options.mode)},
                         {"threshold", threshold},
                         {"seed", seed},
                         {"splits", config.split_ratios},
                         {"dedup", dedup},
                         {"out_dir", out_dir},
                         {"filter", JoinSet(config.zero_morpheme_filter)},
                         {"derivational",
                          JoinSet(config.included_derivational_tags)},
                         {"inflectional", JoinSet(config.inflectional_tags)},
                         {"threads", common.threads}};
    manifest.AddInput(input);
    auto in = OpenIn(input);
    const PipelineStats stats = RunPreprocessPipeline(in, options, out_dir);
    spdlog::info(
        "{} sentences read, {} kept ({:.4f} removed), vocabulary {} types, "
        "split {}/{}/{}",
        stats.input_sentences, stats.kept_sentences, stats.removed_fraction,
        stats.vocab_size, stats.split.train, stats.split.dev, stats.split.test);
    if (stats.uncovered_class_tokens > 0) {
      spdlog::warn("{} vocabulary tokens have no class observation",
                   stats.uncovered_class_tokens);
    }
    for (const auto& path : stats.outputs) manifest.AddOutput(path);
    Finish(manifest, common, fs::path(out_dir) / "run_manifest.json");
    return kExitOk;
  }
};

struct CountCmd {
  std::vector<std::string> inputs;
  std::string vocab;
  int order = 5;
  std::string out;
  bool merge = false;
  bool map_unknown = false;

  void Bind(CLI::App* cmd) {
    cmd->add_option("inputs", inputs,
                    "Corpus shards (or count files with --merge)")
        ->required();
    cmd->add_option("--vocab", vocab, "Vocabulary file");
    cmd->add_option("--order", order, "Maximum gram order")
        ->check(CLI::Range(1, kMaxOrder))
        ->capture_default_str();
    cmd->add_option("--out", out, "Binary count file")->required();
    cmd->add_flag("--merge", merge, "Merge existing count files");
    cmd->add_flag("--map-unknown", map_unknown,
                  "Map tokens missing from the vocabulary to <unk>");
  }

  int Run(const Common& common, RunManifest& manifest) const {
    manifest.config() = {{"inputs", inputs}, {"vocab", vocab},
                         {"order", order},   {"out", out},
                         {"merge", merge},   {"map_unknown", map_unknown},
                         {"threads", common.threads}};
    for (const auto& path : inputs) manifest.AddInput(path);
    if (merge) {
      std::vector<fs::path> paths(inputs.begin(), inputs.end());
      MergeCountFiles(paths, out);
    } else {
      if (vocab.empty()) throw UsageError("--vocab is required");
      manifest.AddInput(vocab);
      const Vocabulary v = LoadVocabulary(vocab);
      std::optional<NGramTable> total;
      uint64_t sentences = 0;
      for (const auto& path : inputs) {
        const auto corpus = LoadEncoded(path, v, map_unknown);
        sentences += corpus.size();
        NGramTable shard = CountNGramsSharded(corpus, order, v, common.threads);
        total = total ? MergeTables(*total, shard) : std::move(shard);
      }
      if (sentences == 0) throw EmptyCorpus("no sentences in the input");
      auto stream = OpenOut(out);
      WriteCountFile(*total, stream);
      Flush(stream, out);
      for (int k = 1; k <= order; ++k) {
        spdlog::info("{}-grams: {}", k, total->NumGrams(k));
      }
    }
    manifest.AddOutput(out);
    Finish(manifest, common, out + ".manifest.json");
    return kExitOk;
  }
};

struct TrainCmd {
  std::string counts;
  std::string corpus;
  std::string vocab;
  TrainOptions train;
  std::string arpa_out;
  std::string binary_out;

  void Bind(CLI::App* cmd) {
    cmd->add_option("--counts", counts, "Binary count file");
    cmd->add_option("--corpus", corpus, "Token corpus (instead of --counts)");
    cmd->add_option("--vocab", vocab, "Vocabulary file")->required();
    train.Bind(cmd);
    cmd->add_option("--arpa-out", arpa_out, "ARPA output");
    cmd->add_option("--binary-out", binary_out, "Binary model output");
  }

  int Run(const Common& common, RunManifest& manifest) const {
    if (counts.empty() == corpus.empty()) {
      throw UsageError("give exactly one of --counts and --corpus");
    }
    if (arpa_out.empty() && binary_out.empty()) {
      throw UsageError("give --arpa-out and/or --binary-out");
    }
    TrainConfig config;
    try {
      config = train.Resolve();
    } catch (const InvalidConfig& e) {
      throw UsageError(e.what());
    }
    manifest.config() = {{"counts", counts},
                         {"corpus", corpus},
                         {"vocab", vocab},
                         {"preset", train.preset},
                         {"train", TrainOptions::ToJson(config)},
                         {"arpa_out", arpa_out},
                         {"binary_out", binary_out},
                         {"threads", common.threads}};
    manifest.AddInput(vocab);
    const Vocabulary v = LoadVocabulary(vocab);
    std::optional<NGramTable> table;
    if (!counts.empty()) {
      manifest.AddInput(counts);
      auto in = OpenIn(counts);
      table = ReadCountFile(in);
    } else {
      manifest.AddInput(corpus);
      table = CountNGramsSharded(LoadEncoded(corpus, v, false), config.order, v,
                                 common.threads);
    }
    const NGramModel model = TrainKneserNey(*table, v, config);
    for (int k = 1; k <= config.order; ++k) {
      spdlog::info("stored {}-grams: {}", k, model.NumGrams(k));
    }
    fs::path first;
    if (!arpa_out.empty()) {
      auto out = OpenOut(arpa_out);
      WriteArpa(model, out);
      Flush(out, arpa_out);
      manifest.AddOutput(arpa_out);
      first = arpa_out;
    }
    if (!binary_out.empty()) {
      auto out = OpenOut(binary_out);
      WriteBinaryModel(model, out);
      Flush(out, binary_out);
      manifest.AddOutput(binary_out);
      if (first.empty()) first = binary_out;
    }
    Finish(manifest, common, first.string() + ".manifest.json");
    return kExitOk;
  }
};

struct TrainClassCmd {
  std::string corpus;
  std::string vocab;
  std::string classes;
  bool identity = false;
  TrainOptions train;
  double alpha = kDefaultEmissionAlpha;
  std::string out_dir;

  void Bind(CLI::App* cmd) {
    cmd->add_option("--corpus", corpus, "Token corpus")->required();
    cmd->add_option("--vocab", vocab, "Vocabulary file")->required();
    cmd->add_option("--classes", classes, "token<TAB>class file");
    cmd->add_flag("--identity", identity, "One class per word");
    train.Bind(cmd);
    cmd->add_option("--alpha", alpha, "Emission add-alpha")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--out-dir", out_dir, "Bundle directory")->required();
  }

  int Run(const Common& common, RunManifest& manifest) const {
    if (classes.empty() == !identity) {
      throw UsageError("give exactly one of --classes and --identity");
    }
    TrainConfig config;
    try {
      config = train.Resolve();
    } catch (const InvalidConfig& e) {
      throw UsageError(e.what());
    }
    manifest.config() = {{"corpus", corpus},
                         {"vocab", vocab},
                         {"classes", classes},
                         {"identity", identity},
                         {"preset", train.preset},
                         {"train", TrainOptions::ToJson(config)},
                         {"alpha", alpha},
                         {"out_dir", out_dir},
                         {"threads", common.threads}};
    manifest.AddInput(corpus);
    manifest.AddInput(vocab);
    const Vocabulary v = LoadVocabulary(vocab);
    ClassAssignment assignment;
    if (identity) {
      assignment = ClassAssignment::Identity(v);
    } else {
      manifest.AddInput(classes);
      auto in = OpenIn(classes);
      assignment = ClassAssignment::Read(in, v);
    }
    if (assignment.uncovered > 0) {
      spdlog::warn("{} tokens have no class and fall into <unk>",
                   assignment.uncovered);
    }
    const ClassLM lm = ClassLM::Train(v, std::move(assignment),
                                      LoadEncoded(corpus, v, false), config,
                                      alpha);
    spdlog::info("{} classes", lm.assignment().classes.size());
    lm.WriteBundle(out_dir);
    manifest.AddOutput(out_dir);
    fs::path dir(out_dir);
    if (!dir.has_filename()) dir = dir.parent_path();
    Finish(manifest, common, dir.string() + ".manifest.json");
    return kExitOk;
  }
};

struct EvalCmd {
  std::string model;
  std::string class_model;
  std::vector<std::string> corpora;
  bool cross = false;
  std::optional<double> lambda;
  std::string tune_dev;
  std::string report;
  std::string layout = "by-model";
  std::string model_name;
  std::vector<std::string> corpus_names;
  std::optional<uint64_t> threshold;

  void Bind(CLI::App* cmd) {
    cmd->add_option("--model", model, "Word model (ARPA or binary)");
    cmd->add_option("--class-model", class_model, "Class model bundle");
    cmd->add_option("--corpus", corpora, "Evaluation corpus (repeatable)")
        ->required();
    cmd->add_flag("--cross", cross, "Foreign corpus: map OOVs to <unk>");
    cmd->add_option("--lambda", lambda, "Word model weight when interpolating")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--tune-dev", tune_dev, "Pick lambda on this dev corpus");
    cmd->add_option("--report", report, "Machine-readable records output");
    cmd->add_option("--layout", layout, "Text table layout")
        ->check(CLI::IsMember({"by-model", "by-corpus", "cross-matrix"}))
        ->capture_default_str();
    cmd->add_option("--model-name", model_name, "Name used in reports");
    cmd->add_option("--corpus-name", corpus_names,
                    "Names used in reports, one per --corpus");
    cmd->add_option("--threshold", threshold, "Threshold label for reports");
  }

  int Run(const Common& common, RunManifest& manifest) const {
    if (model.empty() && class_model.empty()) {
      throw UsageError("give --model and/or --class-model");
    }
    if (!corpus_names.empty() && corpus_names.size() != corpora.size()) {
      throw UsageError("--corpus-name must match --corpus one to one");
    }
    if (lambda && !tune_dev.empty()) {
      throw UsageError("--lambda and --tune-dev are exclusive");
    }
    if ((lambda || !tune_dev.empty()) &&
        (model.empty() || class_model.empty())) {
      throw UsageError("interpolation needs both --model and --class-model");
    }
    std::optional<NGramModel> word;
    std::optional<ClassLM> cls;
    if (!model.empty()) {
      manifest.AddInput(model);
      word = LoadModel(model);
    }
    if (!class_model.empty()) {
      manifest.AddInput(class_model);
      cls = ClassLM::ReadBundle(class_model);
    }
    double weight = lambda.value_or(0.5);
    std::unique_ptr<InterpolatedModel> mixed;
    const LanguageModel* scorer = word ? static_cast<const LanguageModel*>(&*word)
                                       : &*cls;
    if (word && cls) {
      if (!tune_dev.empty()) {
        manifest.AddInput(tune_dev);
        const auto dev = LoadEncoded(tune_dev, word->vocab(), true);
        weight = TuneLambda(*word, *cls, dev, {}, common.threads);
        spdlog::info("tuned lambda = {:.2f}", weight);
      }
      mixed = std::make_unique<InterpolatedModel>(*word, *cls, weight);
      scorer = mixed.get();
    }
    std::string name = model_name;
    if (name.empty()) {
      name = word ? fs::path(model).stem().string()
                  : fs::path(class_model).filename().string();
      if (mixed) name += fmt::format("+{}@{:.2f}",
                                     fs::path(class_model).filename().string(),
                                     weight);
    }

    std::vector<EvalReport> reports;
    for (size_t i = 0; i < corpora.size(); ++i) {
      manifest.AddInput(corpora[i]);
      EvalOptions options;
      options.model_name = name;
      options.corpus_name = corpus_names.empty()
                                ? fs::path(corpora[i]).stem().string()
                                : corpus_names[i];
      options.threshold = threshold;
      options.threads = common.threads;
      options.cross = cross;
      auto in = OpenIn(corpora[i]);
      PlainCorpusReader reader(in);
      reports.push_back(EvaluateStream(*scorer, reader, options));
      const EvalReport& r = reports.back();
      spdlog::info("{} on {}: N={} oov={} H={:.6f} ppl={:.6f}", r.model,
                   r.corpus, r.tokens, r.oov, r.entropy, r.perplexity);
    }
    std::cout << FormatTextReport(reports, ParseReportLayout(layout));

    Json config = {{"model", model},
                   {"class_model", class_model},
                   {"corpora", corpora},
                   {"cross", cross},
                   {"lambda", mixed ? Json(weight) : Json(nullptr)},
                   {"tune_dev", tune_dev},
                   {"report", report},
                   {"layout", layout},
                   {"model_name", name},
                   {"threshold", threshold ? Json(*threshold) : Json(nullptr)},
                   {"threads", common.threads}};
    Json names = Json::array();
    for (const auto& r : reports) names.push_back(r.corpus);
    config["corpus_names"] = names;
    manifest.config() = config;
    fs::path manifest_path = "glflm-eval.manifest.json";
    if (!report.empty()) {
      auto out = OpenOut(report);
      out << FormatRecords(reports);
      Flush(out, report);
      manifest.AddOutput(report);
      manifest_path = report + ".manifest.json";
    }
    Finish(manifest, common, manifest_path);
    return kExitOk;
  }
};

struct ReportCmd {
  std::vector<std::string> inputs;
  std::string layout = "cross-matrix";
  std::string out;

  void Bind(CLI::App* cmd) {
    cmd->add_option("inputs", inputs, "Record files from eval --report")
        ->required();
    cmd->add_option("--layout", layout, "Table layout")
        ->check(CLI::IsMember({"by-model", "by-corpus", "cross-matrix"}))
        ->capture_default_str();
    cmd->add_option("--out", out, "Write the table here instead of stdout");
  }

  int Run(const Common& common, RunManifest& manifest) const {
    manifest.config() = {{"inputs", inputs}, {"layout", layout}, {"out", out}};
    std::vector<EvalReport> reports;
    for (const auto& path : inputs) {
      manifest.AddInput(path);
      auto in = OpenIn(path);
      for (auto& r : ParseRecords(in)) reports.push_back(std::move(r));
    }
    const std::string table =
        FormatTextReport(reports, ParseReportLayout(layout));
    fs::path manifest_path = "glflm-report.manifest.json";
    if (out.empty()) {
      std::cout << table;
    } else {
      auto stream = OpenOut(out);
      stream << table;
      Flush(stream, out);
      manifest.AddOutput(out);
      manifest_path = out + ".manifest.json";
    }
    Finish(manifest, common, manifest_path);
    return kExitOk;
  }
};

int Run(std::vector<std::string> args);

int Rerun(const std::string& path) {
  auto in = OpenIn(path);
  Json manifest;
  try {
    manifest = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw MalformedLine(std::string("manifest is not JSON: ") + e.what(), 0);
  }
  if (!manifest.contains("argv") || !manifest["argv"].is_array()) {
    throw MalformedLine("manifest has no argv", 0);
  }
  std::vector<std::string> args = manifest["argv"].get<std::vector<std::string>>();
  if (!args.empty() && args[0] == "rerun") {
    throw UsageError("refusing to rerun a rerun");
  }
  spdlog::info("re-running '{}'", fmt::join(args, " "));
  return Run(std::move(args));
}

void ConfigureLogging(const std::string& level) {
  static bool configured = false;
  if (!configured) {
    auto logger = spdlog::stderr_color_mt("glflm");
    logger->set_pattern("[%H:%M:%S.%e] [%^%l%$] %v");
    spdlog::set_default_logger(logger);
    configured = true;
  }
  spdlog::set_level(spdlog::level::from_str(level));
}

// `args` excludes the program name.
int Run(std::vector<std::string> args) {
  CLI::App app{"glflm: n-gram language models for agglutinative text",
               "glflm"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "INI/TOML file with option defaults")
      ->envname("GLFLM_CONFIG");
  Common common;
  app.add_option("--threads", common.threads, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--manifest", common.manifest,
                 "Run manifest path (default: next to the outputs)");
  app.add_flag("--print-config", common.print_config,
               "Print the resolved configuration and exit");
  app.add_option("--log-level", common.log_level, "Log level")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}))
      ->capture_default_str();

  PreprocessCmd preprocess;
  CountCmd count;
  TrainCmd train;
  TrainClassCmd train_class;
  EvalCmd eval;
  ReportCmd report;
  std::string rerun_path;
  preprocess.Bind(app.add_subcommand("preprocess", "Corpus to train/dev/test"));
  count.Bind(app.add_subcommand("count", "Count n-grams into a binary file"));
  train.Bind(app.add_subcommand("train", "Estimate a Kneser-Ney model"));
  train_class.Bind(
      app.add_subcommand("train-class", "Estimate a class-based model"));
  eval.Bind(app.add_subcommand("eval", "Perplexity of models on corpora"));
  report.Bind(app.add_subcommand("report", "Tabulate eval records"));
  app.add_subcommand("rerun", "Repeat the command recorded in a manifest")
      ->add_option("manifest", rerun_path, "Manifest file")
      ->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  ConfigureLogging(common.log_level);
  CLI::App* cmd = app.get_subcommands().front();
  const std::string name = cmd->get_name();
  if (common.print_config) {
    // Global keys and the chosen command's section only.
    std::istringstream all(app.config_to_str(true, false));
    for (std::string line; std::getline(all, line);) {
      const size_t eq = line.find('=');
      const size_t dot = line.find('.');
      if (dot == std::string::npos || dot > eq ||
          line.compare(0, name.size() + 1, name + ".") == 0) {
        std::cout << line << '\n';
      }
    }
    return kExitOk;
  }
  if (name == "rerun") return Rerun(rerun_path);
  RunManifest manifest(name, args);
  if (name == "preprocess") return preprocess.Run(common, manifest);
  if (name == "count") return count.Run(common, manifest);
  if (name == "train") return train.Run(common, manifest);
  if (name == "train-class") return train_class.Run(common, manifest);
  if (name == "eval") return eval.Run(common, manifest);
  return report.Run(common, manifest);
}

int Main(int argc, char** argv) {
  ConfigureLogging("info");
  try {
    return Run(std::vector<std::string>(argv + 1, argv + argc));
  } catch (const UsageError& e) {
    spdlog::error("{}", e.what());
    return kExitUsage;
  } catch (const InvalidConfig& e) {
    spdlog::error("{}", e.what());
    return kExitUsage;
  } catch (const IoError& e) {
    spdlog::error("{}", e.what());
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    spdlog::error("{}", e.what());
    return kExitIo;
  } catch (const Error& e) {
    // Malformed or inconsistent input data.
    spdlog::error("{}", e.what());
    return kExitMalformed;
  }
}

}  // namespace
}  // namespace glflm::tools

int main(int argc, char** argv) { return glflm::tools::Main(argc, argv); }
