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

#include "glflm/preprocess.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "fmt/format.h"
#include "glflm/class_model.h"
#include "glflm/errors.h"
#include "glflm/unicode.h"

namespace glflm {
namespace {

// Tokens are written space-separated, so embedded spaces would split them.
std::string Normalize(std::string_view text) {
  std::string folded = FoldCase(text);
  std::replace(folded.begin(), folded.end(), ' ', '_');
  return folded;
}

std::string JoinSet(const std::set<std::string>& items) {
  return fmt::format("{}", fmt::join(items, ","));
}

}  // namespace

std::string_view TokenModeName(TokenMode mode) {
  switch (mode) {
    case TokenMode::kWord:
      return "word";
    case TokenMode::kGlf:
      return "glf";
    case TokenMode::kFullPos:
      return "full-pos";
    case TokenMode::kPosGlf:
      return "pos-glf";
  }
  return "glf";
}

TokenMode ParseTokenMode(std::string_view name) {
  if (name == "word") return TokenMode::kWord;
  if (name == "glf") return TokenMode::kGlf;
  if (name == "full-pos") return TokenMode::kFullPos;
  if (name == "pos-glf") return TokenMode::kPosGlf;
  throw InvalidConfig("unknown token mode '" + std::string(name) + "'");
}

std::set<std::string> DefaultInflectionalTags() {
  return {"ANP",  "CAS", "COND", "DEF",  "FAM",         "IMPER",
          "INF",  "PAST", "PERS", "PLUR", "POSS", "SUBJUNC-IMP"};
}

void PreprocessConfig::Validate() const {
  double sum = 0.0;
  for (double r : split_ratios) {
    if (!(r >= 0.0) || !std::isfinite(r)) {
      throw InvalidConfig("split ratios must be non-negative");
    }
    sum += r;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw InvalidConfig(
        fmt::format("split ratios must sum to 1 (got {})", sum));
  }
}

std::string PreprocessConfig::Render() const {
  std::string out;
  out += fmt::format("threshold = {}\n", threshold);
  out += fmt::format("shuffle_seed = {}\n", shuffle_seed);
  out += fmt::format("split_ratios = {},{},{}\n", split_ratios[0],
                     split_ratios[1], split_ratios[2]);
  out += fmt::format("zero_morpheme_filter = {}\n",
                     JoinSet(zero_morpheme_filter));
  out += fmt::format("inflectional_tags = {}\n", JoinSet(inflectional_tags));
  out += fmt::format("included_derivational_tags = {}\n",
                     JoinSet(included_derivational_tags));
  return out;
}

std::vector<std::string> SplitAffixes(const MorphCode& morph,
                                      const PreprocessConfig& config) {
  std::vector<std::string> out;
  for (const std::string& affix : morph.affixes) {
    if (config.zero_morpheme_filter.contains(affix)) continue;
    const std::string name(AffixName(affix));
    if (config.inflectional_tags.contains(name) ||
        config.included_derivational_tags.contains(name)) {
      out.push_back(affix);
    }
  }
  return out;
}

std::vector<std::string> DeglutinizeToken(const AnnotatedToken& token,
                                          const PreprocessConfig& config) {
  std::vector<std::string> out;
  out.push_back(Normalize(token.lemma));
  for (std::string& affix : SplitAffixes(token.morph, config)) {
    out.push_back(std::move(affix));
  }
  return out;
}

TokenSentence ToPosStream(const AnnotatedSentence& sentence, TokenMode mode,
                          const PreprocessConfig& config) {
  if (mode != TokenMode::kFullPos && mode != TokenMode::kPosGlf) {
    throw InvalidConfig("ToPosStream needs full-pos or pos-glf");
  }
  TokenSentence out;
  for (const AnnotatedToken& token : sentence) {
    if (mode == TokenMode::kFullPos) {
      out.push_back(token.morph.Render());
      continue;
    }
    out.push_back(token.morph.head);
    for (std::string& affix : SplitAffixes(token.morph, config)) {
      out.push_back(std::move(affix));
    }
  }
  return out;
}

TokenSentence ToTokenStream(const AnnotatedSentence& sentence, TokenMode mode,
                            const PreprocessConfig& config) {
  switch (mode) {
    case TokenMode::kWord: {
      TokenSentence out;
      out.reserve(sentence.size());
      for (const AnnotatedToken& token : sentence) {
        out.push_back(Normalize(token.surface));
      }
      return out;
    }
    case TokenMode::kGlf: {
      TokenSentence out;
      for (const AnnotatedToken& token : sentence) {
        for (std::string& piece : DeglutinizeToken(token, config)) {
          out.push_back(std::move(piece));
        }
      }
      return out;
    }
    case TokenMode::kFullPos:
    case TokenMode::kPosGlf:
      return ToPosStream(sentence, mode, config);
  }
  return {};
}

void AddClassObservations(const AnnotatedSentence& sentence, TokenMode mode,
                          const PreprocessConfig& config,
                          ClassObservations* observations) {
  for (const AnnotatedToken& token : sentence) {
    const std::string& head = token.morph.head;
    switch (mode) {
      case TokenMode::kWord:
        observations->Add(Normalize(token.surface), head);
        break;
      case TokenMode::kFullPos:
        observations->Add(token.morph.Render(), head);
        break;
      case TokenMode::kGlf:
      case TokenMode::kPosGlf: {
        observations->Add(
            mode == TokenMode::kGlf ? Normalize(token.lemma) : head, head);
        for (const std::string& affix : SplitAffixes(token.morph, config)) {
          observations->Add(affix, affix);
        }
        break;
      }
    }
  }
}

bool SentenceDeduplicator::Admit(const TokenSentence& sentence) {
  ++seen_;
  // '\n' cannot occur inside a token, so the joined key is unambiguous.
  std::string key;
  for (const std::string& token : sentence) {
    key += token;
    key += '\n';
  }
  if (keys_.insert(std::move(key)).second) return true;
  ++removed_;
  return false;
}

std::vector<TokenSentence> DedupSentences(std::vector<TokenSentence> corpus,
                                          double* removed_fraction) {
  SentenceDeduplicator dedup;
  std::vector<TokenSentence> out;
  for (TokenSentence& sentence : corpus) {
    if (dedup.Admit(sentence)) out.push_back(std::move(sentence));
  }
  if (removed_fraction != nullptr) *removed_fraction = dedup.removed_fraction();
  return out;
}

Vocabulary BuildThresholdVocabulary(const FrequencyDictionary& counts,
                                    uint64_t threshold) {
  Vocabulary vocab;
  for (const auto& [token, count] : counts.Sorted()) {
    if (count < threshold) break;
    if (IsReservedToken(token)) continue;
    vocab.Add(token);
  }
  return vocab;
}

TokenSentence ApplyVocabulary(const TokenSentence& sentence,
                              const Vocabulary& vocab) {
  TokenSentence out;
  out.reserve(sentence.size());
  for (const std::string& token : sentence) {
    out.push_back(vocab.Find(token) ? token : std::string(kUnkToken));
  }
  return out;
}

ThresholdResult ApplyThreshold(const std::vector<TokenSentence>& corpus,
                               uint64_t threshold) {
  FrequencyDictionary counts;
  for (const TokenSentence& sentence : corpus) {
    for (const std::string& token : sentence) counts.Add(token);
  }
  ThresholdResult result{{}, BuildThresholdVocabulary(counts, threshold)};
  result.corpus.reserve(corpus.size());
  for (const TokenSentence& sentence : corpus) {
    result.corpus.push_back(ApplyVocabulary(sentence, result.vocab));
  }
  return result;
}

SplitSizes ComputeSplitSizes(size_t n, const std::array<double, 3>& ratios) {
  // The epsilon keeps products like 100 * 0.07 from flooring to 6.
  const auto part = [n](double r) {
    return static_cast<size_t>(std::floor(static_cast<double>(n) * r + 1e-9));
  };
  SplitSizes sizes;
  sizes.dev = std::min(n, part(ratios[1]));
  sizes.test = std::min(n - sizes.dev, part(ratios[2]));
  sizes.train = n - sizes.dev - sizes.test;
  return sizes;
}

PipelineStats RunPreprocessPipeline(std::istream& in,
                                    const PipelineOptions& options,
                                    const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  const PreprocessConfig& config = options.config;
  config.Validate();
  const bool annotated = options.format == CorpusFormat::kAnnotatedTsv;

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  const fs::path spool_path = out_dir / ".spool.txt";
  std::vector<uint64_t> offsets;
  FrequencyDictionary token_counts;
  FrequencyDictionaries word_counts;
  ClassObservations observations;
  SentenceDeduplicator dedup;
  PipelineStats stats;

  {
    std::ofstream spool(spool_path, std::ios::binary | std::ios::trunc);
    if (!spool) throw IoError("cannot write " + spool_path.string());
    const auto keep = [&](const TokenSentence& tokens) {
      offsets.push_back(static_cast<uint64_t>(spool.tellp()));
      WritePlainSentence(spool, tokens);
      for (const std::string& token : tokens) token_counts.Add(token);
    };
    if (annotated) {
      AnnotatedCorpusReader reader(in);
      AnnotatedSentence sentence;
      while (reader.Next(&sentence)) {
        ++stats.input_sentences;
        TokenSentence tokens = ToTokenStream(sentence, options.mode, config);
        if (options.dedup && !dedup.Admit(tokens)) continue;
        word_counts.Add(sentence);
        AddClassObservations(sentence, options.mode, config, &observations);
        keep(tokens);
      }
    } else {
      PlainCorpusReader reader(in);
      TokenSentence tokens;
      while (reader.Next(&tokens)) {
        ++stats.input_sentences;
        if (options.dedup && !dedup.Admit(tokens)) continue;
        keep(tokens);
      }
    }
    if (!spool.flush()) throw IoError("write failed: " + spool_path.string());
  }

  stats.kept_sentences = offsets.size();
  stats.removed_fraction = dedup.removed_fraction();
  const Vocabulary vocab =
      BuildThresholdVocabulary(token_counts, config.threshold);
  stats.vocab_size = vocab.size();

  std::vector<uint64_t> order(offsets.size());
  std::iota(order.begin(), order.end(), uint64_t{0});
  ShuffleInPlace(order, config.shuffle_seed);
  stats.split = ComputeSplitSizes(order.size(), config.split_ratios);

  const auto open_out = [&](const std::string& name) {
    const fs::path path = out_dir / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    stats.outputs.push_back(path);
    return out;
  };

  {
    std::ifstream spool(spool_path, std::ios::binary);
    if (!spool) throw IoError("cannot read " + spool_path.string());
    const size_t bounds[4] = {0, stats.split.train,
                              stats.split.train + stats.split.dev,
                              order.size()};
    const char* names[3] = {"train.txt", "dev.txt", "test.txt"};
    std::string line;
    for (int part = 0; part < 3; ++part) {
      std::ofstream out = open_out(names[part]);
      for (size_t i = bounds[part]; i < bounds[part + 1]; ++i) {
        spool.clear();
        spool.seekg(static_cast<std::streamoff>(offsets[order[i]]));
        std::getline(spool, line);
        TokenSentence mapped = ApplyVocabulary(SplitTokens(line), vocab);
        stats.unk_tokens += static_cast<uint64_t>(
            std::count(mapped.begin(), mapped.end(), std::string(kUnkToken)));
        WritePlainSentence(out, mapped);
      }
      if (!out.flush()) throw IoError(std::string("write failed: ") + names[part]);
    }
  }
  fs::remove(spool_path, ec);

  {
    std::ofstream out = open_out("vocab.txt");
    vocab.Write(out);
  }
  if (annotated) {
    std::ofstream surface = open_out("freq.surface.tsv");
    word_counts.surface.Write(surface);
    std::ofstream lemma = open_out("freq.lemma.tsv");
    word_counts.lemma.Write(lemma);
    const ClassAssignment classes = AssignClasses(vocab, observations);
    stats.uncovered_class_tokens = classes.uncovered;
    std::ofstream class_out = open_out("classes.tsv");
    classes.Write(class_out, vocab);
  } else {
    std::ofstream tokens = open_out("freq.tokens.tsv");
    token_counts.Write(tokens);
  }
  {
    std::ofstream out = open_out("preprocess.conf");
    out << "format = " << (annotated ? "annotated-tsv" : "plain-tokens")
        << '\n';
    out << "mode = " << TokenModeName(options.mode) << '\n';
    out << "dedup = " << (options.dedup ? "true" : "false") << '\n';
    out << config.Render();
    out << "input_sentences = " << stats.input_sentences << '\n';
    out << "kept_sentences = " << stats.kept_sentences << '\n';
    out << "vocab_size = " << stats.vocab_size << '\n';
    out << fmt::format("split = {},{},{}\n", stats.split.train,
                       stats.split.dev, stats.split.test);
  }
  return stats;
}

}  // namespace glflm
