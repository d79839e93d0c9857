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

#include "glflm/class_model.h"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>

#include "fmt/format.h"
#include "glflm/arpa.h"
#include "glflm/errors.h"
#include "string_key.h"
#include "glflm/evaluation.h"
#include "glflm/morph_code.h"

namespace glflm {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::ifstream OpenIn(const std::filesystem::path& path,
                     std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  if (!in) throw IoError("cannot read " + path.string());
  return in;
}

std::ofstream OpenOut(const std::filesystem::path& path,
                      std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

std::map<std::string, std::string> ReadKeyValues(std::istream& in) {
  std::map<std::string, std::string> values;
  std::string line;
  while (std::getline(in, line)) {
    const size_t eq = line.find(" = ");
    if (eq == std::string::npos) continue;
    values[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return values;
}

}  // namespace

void ClassObservations::Add(std::string_view token, std::string_view label,
                            uint64_t count) {
  labels_[AsKey(token)][AsKey(label)] += count;
}

std::optional<std::string> ClassObservations::MajorityClass(
    std::string_view token) const {
  auto it = labels_.find(AsKey(token));
  if (it == labels_.end() || it->second.empty()) return std::nullopt;
  const std::string* best = nullptr;
  uint64_t best_count = 0;
  for (const auto& [label, count] : it->second) {
    if (best == nullptr || count > best_count ||
        (count == best_count && label < *best)) {
      best = &label;
      best_count = count;
    }
  }
  return *best;
}

ClassAssignment ClassAssignment::Identity(const Vocabulary& vocab) {
  ClassAssignment assignment;
  assignment.class_of.resize(vocab.size());
  for (WordId w = 0; w < vocab.size(); ++w) {
    assignment.class_of[w] = assignment.classes.Add(vocab.Token(w));
  }
  return assignment;
}

void ClassAssignment::Write(std::ostream& out, const Vocabulary& vocab) const {
  for (WordId w = 0; w < vocab.size(); ++w) {
    out << vocab.Token(w) << '\t' << classes.Token(ClassOf(w)) << '\n';
  }
}

ClassAssignment ClassAssignment::Read(std::istream& in,
                                      const Vocabulary& vocab) {
  ClassAssignment assignment;
  assignment.class_of.assign(vocab.size(), kUnkId);
  std::vector<char> seen(vocab.size(), 0);
  std::string line;
  uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size() ||
        line.find('\t', tab + 1) != std::string::npos) {
      throw MalformedLine("expected token<TAB>class", line_no);
    }
    const std::string_view token = std::string_view(line).substr(0, tab);
    auto id = vocab.Find(token);
    if (!id) {
      throw MalformedLine("class file token '" + std::string(token) +
                              "' is not in the vocabulary",
                          line_no);
    }
    assignment.class_of[*id] =
        assignment.classes.Add(std::string_view(line).substr(tab + 1));
    seen[*id] = 1;
  }
  for (WordId w = 0; w < vocab.size(); ++w) {
    if (!seen[w]) {
      assignment.class_of[w] = IsReservedToken(vocab.Token(w))
                                   ? *assignment.classes.Find(vocab.Token(w))
                                   : kUnkId;
      if (!IsReservedToken(vocab.Token(w))) ++assignment.uncovered;
    }
  }
  return assignment;
}

ClassAssignment AssignClasses(const Vocabulary& vocab,
                              const ClassObservations& observations) {
  ClassAssignment assignment;
  assignment.class_of.resize(vocab.size());
  for (WordId w = 0; w < vocab.size(); ++w) {
    const std::string& token = vocab.Token(w);
    if (IsReservedToken(token)) {
      assignment.class_of[w] = *assignment.classes.Find(token);
      continue;
    }
    if (auto label = observations.MajorityClass(token)) {
      assignment.class_of[w] = assignment.classes.Add(*label);
    } else if (LooksLikeAffix(token)) {
      assignment.class_of[w] = assignment.classes.Add(token);
    } else {
      assignment.class_of[w] = kUnkId;
      ++assignment.uncovered;
    }
  }
  return assignment;
}

ClassLM::ClassLM(Vocabulary vocab, ClassAssignment assignment,
                 std::vector<uint64_t> emission_counts, double alpha,
                 NGramModel transitions)
    : vocab_(std::move(vocab)),
      assignment_(std::move(assignment)),
      emission_counts_(std::move(emission_counts)),
      alpha_(alpha),
      transitions_(std::move(transitions)) {
  if (!(alpha_ > 0.0) || !std::isfinite(alpha_)) {
    throw InvalidConfig("emission alpha must be positive");
  }
  if (assignment_.class_of.size() != vocab_.size() ||
      emission_counts_.size() != vocab_.size()) {
    throw VocabMismatch("class assignment does not cover the vocabulary");
  }
  if (!(transitions_.vocab() == assignment_.classes)) {
    throw VocabMismatch("transition model is not over the class vocabulary");
  }
  std::vector<double> class_total(assignment_.classes.size(), 0.0);
  for (WordId w = 0; w < vocab_.size(); ++w) {
    if (w == kBosId) continue;
    class_total[assignment_.class_of[w]] +=
        static_cast<double>(emission_counts_[w]) + alpha_;
  }
  emission_log10_.assign(vocab_.size(), 0.0);
  for (WordId w = 0; w < vocab_.size(); ++w) {
    if (w == kBosId) continue;
    emission_log10_[w] =
        std::log10((static_cast<double>(emission_counts_[w]) + alpha_) /
                   class_total[assignment_.class_of[w]]);
  }
}

ClassLM ClassLM::Train(const Vocabulary& vocab, ClassAssignment assignment,
                       std::span<const std::vector<WordId>> sentences,
                       const TrainConfig& config, double alpha) {
  if (assignment.class_of.size() != vocab.size()) {
    throw VocabMismatch("class assignment does not cover the vocabulary");
  }
  std::vector<uint64_t> counts(vocab.size(), 0);
  std::vector<std::vector<WordId>> class_sentences;
  class_sentences.reserve(sentences.size());
  for (const auto& sentence : sentences) {
    std::vector<WordId> classes;
    classes.reserve(sentence.size());
    for (WordId w : sentence) {
      if (w >= vocab.size()) throw UnknownToken("<id " + std::to_string(w) + ">");
      ++counts[w];
      classes.push_back(assignment.ClassOf(w));
    }
    ++counts[kEosId];
    class_sentences.push_back(std::move(classes));
  }
  const NGramTable table =
      CountNGrams(class_sentences, config.order, assignment.classes);
  NGramModel transitions =
      TrainKneserNey(table, assignment.classes, config);
  return ClassLM(vocab, std::move(assignment), std::move(counts), alpha,
                 std::move(transitions));
}

double ClassLM::EmissionLogProb(WordId word) const {
  if (word >= vocab_.size()) word = kUnkId;
  if (word == kBosId) return kNegInf;
  return emission_log10_[word];
}

double ClassLM::LogProb(WordId word, std::span<const WordId> context) const {
  if (word >= vocab_.size()) word = kUnkId;
  std::array<WordId, kMaxOrder> classes;
  const size_t usable =
      std::min(context.size(), static_cast<size_t>(transitions_.order() - 1));
  const auto recent = context.last(usable);
  for (size_t i = 0; i < usable; ++i) classes[i] = assignment_.ClassOf(recent[i]);
  return EmissionLogProb(word) +
         transitions_.LogProb(assignment_.ClassOf(word),
                              std::span<const WordId>(classes.data(), usable));
}

void ClassLM::WriteBundle(const std::filesystem::path& dir) const {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  {
    auto out = OpenOut(dir / "manifest.conf");
    out << "format = glflm-class-bundle\n";
    out << "version = 1\n";
    out << fmt::format("alpha = {}\n", alpha_);
    out << "order = " << transitions_.order() << '\n';
    if (transitions_.flavor()) {
      out << "flavor = " << FlavorName(*transitions_.flavor()) << '\n';
    }
    out << "vocab_size = " << vocab_.size() << '\n';
    out << "classes = " << assignment_.classes.size() << '\n';
  }
  {
    auto out = OpenOut(dir / "vocab.txt");
    vocab_.Write(out);
  }
  {
    auto out = OpenOut(dir / "classes.tsv");
    assignment_.Write(out, vocab_);
  }
  {
    auto out = OpenOut(dir / "emission.tsv");
    for (WordId w = 0; w < vocab_.size(); ++w) {
      if (w == kBosId) continue;
      out << vocab_.Token(w) << '\t'
          << assignment_.classes.Token(assignment_.class_of[w]) << '\t'
          << emission_counts_[w] << '\t'
          << fmt::format("{:.6f}", emission_log10_[w]) << '\n';
    }
  }
  {
    auto out = OpenOut(dir / "transitions.arpa");
    WriteArpa(transitions_, out);
  }
  {
    auto out = OpenOut(dir / "transitions.bin", std::ios::binary);
    WriteBinaryModel(transitions_, out);
  }
}

ClassLM ClassLM::ReadBundle(const std::filesystem::path& dir) {
  std::map<std::string, std::string> manifest;
  {
    auto in = OpenIn(dir / "manifest.conf");
    manifest = ReadKeyValues(in);
  }
  if (manifest["format"] != "glflm-class-bundle") {
    throw MalformedLine("not a class model bundle: " + dir.string(), 0);
  }
  double alpha = 0;
  const std::string& alpha_text = manifest["alpha"];
  auto [ptr, parse_ec] = std::from_chars(
      alpha_text.data(), alpha_text.data() + alpha_text.size(), alpha);
  if (parse_ec != std::errc() || ptr != alpha_text.data() + alpha_text.size()) {
    throw MalformedLine("bad alpha in bundle manifest", 0);
  }
  Vocabulary vocab;
  {
    auto in = OpenIn(dir / "vocab.txt");
    vocab = Vocabulary::Read(in);
  }
  ClassAssignment assignment;
  {
    auto in = OpenIn(dir / "classes.tsv");
    assignment = ClassAssignment::Read(in, vocab);
  }
  std::vector<uint64_t> counts(vocab.size(), 0);
  {
    auto in = OpenIn(dir / "emission.tsv");
    std::string line;
    uint64_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      const size_t t1 = line.find('\t');
      const size_t t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
      const size_t t3 = t2 == std::string::npos ? t2 : line.find('\t', t2 + 1);
      if (t3 == std::string::npos) {
        throw MalformedLine("expected token<TAB>class<TAB>count<TAB>logprob",
                            line_no);
      }
      auto id = vocab.Find(std::string_view(line).substr(0, t1));
      uint64_t count = 0;
      auto r = std::from_chars(line.data() + t2 + 1, line.data() + t3, count);
      if (!id || r.ec != std::errc() || r.ptr != line.data() + t3) {
        throw MalformedLine("bad emission entry", line_no);
      }
      counts[*id] = count;
    }
  }
  NGramModel transitions(Vocabulary(), 1);
  if (std::filesystem::exists(dir / "transitions.bin")) {
    auto in = OpenIn(dir / "transitions.bin", std::ios::binary);
    transitions = ReadBinaryModel(in);
  } else {
    auto in = OpenIn(dir / "transitions.arpa");
    transitions = ReadArpa(in);
  }
  if (auto flavor = manifest.find("flavor"); flavor != manifest.end()) {
    transitions.set_flavor(ParseFlavor(flavor->second));
  }
  return ClassLM(std::move(vocab), std::move(assignment), std::move(counts),
                 alpha, std::move(transitions));
}

double InterpolateLogProb(double word_lp, double class_lp, double lambda) {
  if (lambda >= 1.0) return word_lp;
  if (lambda <= 0.0) return class_lp;
  const double a = word_lp + std::log10(lambda);
  const double b = class_lp + std::log10(1.0 - lambda);
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  if (hi == kNegInf) return kNegInf;
  return hi + std::log1p(std::pow(10.0, lo - hi)) / std::log(10.0);
}

InterpolatedModel::InterpolatedModel(const LanguageModel& word,
                                     const LanguageModel& cls, double lambda)
    : word_(word), class_(cls), lambda_(lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw InvalidConfig("interpolation weight must be in [0, 1]");
  }
  if (!(word.vocab() == cls.vocab())) {
    throw VocabMismatch("interpolated models must share a vocabulary");
  }
}

int InterpolatedModel::order() const {
  return std::max(word_.order(), class_.order());
}

double InterpolatedModel::LogProb(WordId word,
                                  std::span<const WordId> context) const {
  if (lambda_ >= 1.0) return word_.LogProb(word, context);
  if (lambda_ <= 0.0) return class_.LogProb(word, context);
  return InterpolateLogProb(word_.LogProb(word, context),
                            class_.LogProb(word, context), lambda_);
}

std::vector<double> DefaultLambdaGrid() {
  std::vector<double> grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(i / 20.0);
  return grid;
}

double TuneLambda(const LanguageModel& word, const LanguageModel& cls,
                  std::span<const std::vector<WordId>> dev,
                  std::span<const double> grid, int threads) {
  if (dev.empty()) throw EmptyCorpus("empty development corpus");
  std::vector<double> points = grid.empty()
                                   ? DefaultLambdaGrid()
                                   : std::vector<double>(grid.begin(), grid.end());
  std::sort(points.begin(), points.end(), std::greater<>());
  EvalOptions options;
  options.threads = threads;
  double best_lambda = points.front();
  double best_ppl = std::numeric_limits<double>::infinity();
  for (double lambda : points) {
    const InterpolatedModel mixed(word, cls, lambda);
    const double ppl = EvaluateEncoded(mixed, dev, options).perplexity;
    // Larger lambdas come first, so only a clear improvement moves us.
    if (ppl < best_ppl * (1.0 - 1e-12)) {
      best_ppl = ppl;
      best_lambda = lambda;
    }
  }
  return best_lambda;
}

}  // namespace glflm
