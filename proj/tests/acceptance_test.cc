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

// Release gate: one PASS/FAIL line per acceptance criterion. Exits non-zero
// if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "fmt/format.h"
#include "glflm/arpa.h"
#include "glflm/class_model.h"
#include "glflm/evaluation.h"
#include "glflm/kn_model.h"
#include "glflm/morph_code.h"
#include "glflm/ngram_counts.h"
#include "glflm/preprocess.h"
#include "glflm/prng.h"
#include "json.hpp"
#include "oracles/kn_oracle.h"
#include "oracles/naive_counts.h"
#include "test_util.h"

namespace glflm {
namespace {

namespace fs = std::filesystem;
using testing_util::Encode;
using testing_util::ReadFile;
using testing_util::TableModel;
using testing_util::TempDir;
using testing_util::UniformModel;
using testing_util::VocabularyOf;
using testing_util::WriteFile;
using testing_util::ZipfCorpus;

// Collects failed checks for one criterion.
class Checker {
 public:
  void Expect(bool ok, const std::string& what) {
    ++checks_;
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    if (!ok) ++failed_;
  }
  void Near(double got, double want, double tol, const std::string& what) {
    Expect(std::abs(got - want) <= tol,
           fmt::format("{}: got {:.17g}, want {:.17g} (tol {:g})", what, got,
                       want, tol));
  }
  bool ok() const { return failed_ == 0; }
  uint64_t checks() const { return checks_; }
  std::string Summary() const {
    std::string out = fmt::format("{} of {} checks failed", failed_, checks_);
    for (const auto& f : failures_) out += "\n    " + f;
    return out;
  }

 private:
  uint64_t checks_ = 0;
  uint64_t failed_ = 0;
  std::vector<std::string> failures_;
};

double Prob(const LanguageModel& model, WordId w,
            const std::vector<WordId>& h) {
  return std::pow(10.0, model.LogProb(w, h));
}

TrainConfig ConfigFor(Flavor flavor, int order) {
  return flavor == Flavor::kBackoff ? TrainConfig::SrilmDefault(order)
                                    : TrainConfig::UnprunedInterpolated(order);
}

void Deglutinization(Checker& c) {
  const PreprocessConfig config;
  struct Case {
    const char* surface;
    const char* lemma;
    const char* code;
    std::string want;
  };
  const Case cases[] = {
      {"jelmondatával", "jelmondat", "NOUN<POSS><CAS<INS>>",
       "jelmondat <POSS> <CAS<INS>>"},
      {"akartak", "akar", "VERB<PAST><PLUR>", "akar <PAST> <PLUR>"},
  };
  for (const Case& k : cases) {
    const AnnotatedToken token{k.surface, k.lemma, ParseMorphCode(k.code)};
    std::string got;
    for (const auto& t : DeglutinizeToken(token, config)) {
      if (!got.empty()) got += ' ';
      got += t;
    }
    c.Expect(got == k.want, fmt::format("{} -> '{}'", k.surface, got));
  }
}

void PerplexityIdentities(Checker& c) {
  for (size_t v : {2, 100, 1000}) {
    const UniformModel model(v);
    std::vector<std::vector<WordId>> corpus;
    SplitMix64 rng(v);
    for (int i = 0; i < 500; ++i) {
      std::vector<WordId> s(rng.Uniform(8));
      for (auto& w : s) {
        w = static_cast<WordId>(rng.Uniform(v));
        if (w == kBosId) w = kEosId;
      }
      corpus.push_back(s);
    }
    const double ppl = EvaluateEncoded(model, corpus, {}).perplexity;
    c.Expect(ppl == static_cast<double>(v),
             fmt::format("uniform |V|={}: PPL {:.17g}", v, ppl));
  }
  Vocabulary vocab;
  vocab.Add("a");
  const TableModel model(vocab, {-INFINITY, -INFINITY, std::log10(0.25),
                                 std::log10(0.5)});
  const std::vector<std::vector<WordId>> corpus = {{3}, {3}, {3}};
  c.Near(EvaluateEncoded(model, corpus, {}).perplexity, std::pow(2.0, 1.5),
         1e-12, "{1/2, 1/4}");
}

void KnNormalization(Checker& c) {
  // 500 sentences over at most 200 types.
  auto text = ZipfCorpus(501, 6000, 180, 1.0, 15);
  text.resize(std::min<size_t>(text.size(), 500));
  c.Expect(text.size() == 500, "corpus has 500 sentences");
  const Vocabulary vocab = VocabularyOf(text);
  c.Expect(vocab.size() <= 200, fmt::format("|V| = {}", vocab.size()));
  const auto corpus = Encode(vocab, text);
  for (Flavor flavor : {Flavor::kBackoff, Flavor::kInterpolated}) {
    for (int order = 2; order <= 5; ++order) {
      const NGramModel model = TrainKneserNey(CountNGrams(corpus, order, vocab),
                                              vocab, ConfigFor(flavor, order));
      auto mass = [&](const std::vector<WordId>& h) {
        double sum = 0;
        for (WordId w = 0; w < vocab.size(); ++w) sum += Prob(model, w, h);
        return sum;
      };
      c.Near(mass({}), 1.0, 1e-6, "empty context");
      for (int k = 1; k < order; ++k) {
        for (const auto& entry : model.SortedEntries(k)) {
          if (entry.gram.back() == kEosId) continue;  // never a context
          c.Near(mass(entry.gram), 1.0, 1e-6,
                 fmt::format("{} order {} context of length {}",
                             FlavorName(flavor), order, k));
        }
      }
    }
  }
}

void OracleEquivalence(Checker& c) {
  for (uint64_t seed : {1, 2, 3}) {
    const auto text = ZipfCorpus(400 + seed, 1000, 45);
    const Vocabulary vocab = VocabularyOf(text);
    const auto corpus = Encode(vocab, text);
    for (Flavor flavor : {Flavor::kBackoff, Flavor::kInterpolated}) {
      for (int order : {2, 3, 4}) {
        const TrainConfig config = ConfigFor(flavor, order);
        const NGramModel model =
            TrainKneserNey(CountNGrams(corpus, order, vocab), vocab, config);
        const oracle::KnOracle kn(oracle::NaiveCounts::Build(corpus, order),
                                  vocab.size(), order,
                                  flavor == Flavor::kInterpolated,
                                  config.min_counts);
        for (const auto& [gram, p] : kn.probs()) {
          const std::vector<WordId> h(gram.begin(), gram.end() - 1);
          c.Near(Prob(model, gram.back(), h), p, 1e-10 * p, "stored gram");
        }
        // Unseen events exercise the backoff weights.
        for (size_t i = 0; i + 1 < corpus.size() && i < 60; ++i) {
          std::vector<WordId> h = {kBosId};
          h.insert(h.end(), corpus[i].begin(), corpus[i].end());
          for (WordId w = 0; w < vocab.size(); w += 3) {
            const double want = kn.Prob(w, h);
            c.Near(Prob(model, w, h), want, 1e-10 * want, "backed-off query");
          }
        }
      }
    }
  }
}

void CountingOracle(Checker& c) {
  for (uint64_t seed : {7, 8}) {
    const auto text = ZipfCorpus(seed, 10000, 300);
    const Vocabulary vocab = VocabularyOf(text);
    const auto corpus = Encode(vocab, text);
    const int order = 4;
    const oracle::NaiveCounts naive = oracle::NaiveCounts::Build(corpus, order);
    for (int shards : {1, 2, 4}) {
      const NGramTable table = CountNGramsSharded(corpus, order, vocab, shards);
      size_t seen = 0;
      for (int k = 1; k <= order; ++k) {
        for (const auto& [gram, count] : table.SortedGrams(k)) {
          ++seen;
          const auto stats = table.Find(gram);
          c.Expect(stats.has_value() && count == naive.Count(gram) &&
                       stats->predecessors == naive.Predecessors(gram) &&
                       stats->successors == naive.Successors(gram),
                   fmt::format("{} shards: gram stats differ", shards));
        }
      }
      c.Expect(seen == naive.counts.size(),
               fmt::format("{} shards: {} grams, naive {}", shards, seen,
                           naive.counts.size()));
      const CountOfCounts raw = ComputeCountOfCounts(table, CountKind::kRaw);
      const CountOfCounts adj =
          ComputeCountOfCounts(table, CountKind::kAdjusted);
      for (int k = 1; k <= order; ++k) {
        c.Expect(raw.at(k) == naive.CountOfCounts(k, false, order),
                 fmt::format("raw count-of-counts order {}", k));
        c.Expect(adj.at(k) == naive.CountOfCounts(k, true, order),
                 fmt::format("KN count-of-counts order {}", k));
      }
    }
  }
}

void ArpaRoundTrip(Checker& c) {
  const auto text = ZipfCorpus(61, 20000, 400);
  const Vocabulary vocab = VocabularyOf(text);
  const auto corpus = Encode(vocab, text);
  for (Flavor flavor : {Flavor::kBackoff, Flavor::kInterpolated}) {
    const NGramModel model = TrainKneserNey(CountNGrams(corpus, 5, vocab),
                                            vocab, ConfigFor(flavor, 5));
    const std::string first = ArpaString(model);
    std::istringstream in(first);
    const NGramModel back = ReadArpa(in);
    c.Expect(ArpaString(back) == first, "write -> read -> write differs");
    // Every stored value survives to its printed precision.
    for (int k = 1; k <= 5; ++k) {
      for (const auto& e : model.SortedEntries(k)) {
        const auto lp = back.StoredLogProb(e.gram);
        c.Expect(lp.has_value(), "gram lost");
        if (!lp) continue;
        if (std::isinf(e.log_prob)) {
          c.Expect(std::isinf(*lp), "-inf lost");
        } else {
          c.Near(*lp, e.log_prob, 5e-7, "stored log10 prob");
        }
        c.Near(back.StoredBackoff(e.gram).value_or(0.0), e.backoff, 5e-7,
               "stored backoff");
      }
    }
    // Queries from the re-read model equal a second re-read exactly.
    std::istringstream again(ArpaString(back));
    const NGramModel twice = ReadArpa(again);
    for (size_t i = 0; i < 300 && i < corpus.size(); ++i) {
      std::vector<WordId> h = {kBosId};
      for (WordId w : corpus[i]) {
        c.Expect(twice.LogProb(w, h) == back.LogProb(w, h), "query drifted");
        c.Near(back.LogProb(w, h), model.LogProb(w, h), 5 * 5e-7,
               "query vs trained model");
        h.push_back(w);
      }
    }
  }
}

void TrendCheck(Checker& c) {
  const auto text = ZipfCorpus(2026, 100000, 5000, 1.05, 20);
  const auto threshold = ApplyThreshold(text, 2);
  const auto shuffled = ShuffleSentences(threshold.corpus, 11);
  const auto split = SplitCorpus(shuffled, {0.9, 0.05, 0.05});
  const Vocabulary& vocab = threshold.vocab;
  const auto train = Encode(vocab, split.train);
  const auto dev = Encode(vocab, split.dev);
  const NGramTable counts = CountNGrams(train, 5, vocab);
  EvalOptions options;
  options.threads = 4;
  const double interpolated =
      EvaluateEncoded(TrainKneserNey(counts, vocab,
                                     TrainConfig::UnprunedInterpolated(5)),
                      dev, options)
          .perplexity;
  const double backoff =
      EvaluateEncoded(
          TrainKneserNey(counts, vocab, TrainConfig::SrilmDefault(5)), dev,
          options)
          .perplexity;
  std::cout << fmt::format("    dev PPL: unpruned interpolated {:.3f}, "
                           "pruned backoff {:.3f}\n",
                           interpolated, backoff);
  c.Expect(interpolated <= backoff,
           fmt::format("interpolated {} > backoff {}", interpolated, backoff));
}

void ClassIdentity(Checker& c) {
  const auto text = ZipfCorpus(81, 8000, 150);
  const Vocabulary vocab = VocabularyOf(text);
  const auto corpus = Encode(vocab, text);
  const std::vector<std::vector<WordId>> train(corpus.begin(),
                                               corpus.end() - 100);
  const std::vector<std::vector<WordId>> test(corpus.end() - 100,
                                              corpus.end());
  const TrainConfig config = TrainConfig::UnprunedInterpolated(3);
  const ClassLM cls =
      ClassLM::Train(vocab, ClassAssignment::Identity(vocab), train, config);
  const double class_ppl = EvaluateEncoded(cls, test, {}).perplexity;
  const double seq_ppl =
      EvaluateEncoded(cls.transitions(), test, {}).perplexity;
  c.Near(class_ppl, seq_ppl, 1e-9 * seq_ppl, "identity class PPL");

  const NGramModel word =
      TrainKneserNey(CountNGrams(train, 3, vocab), vocab, config);
  const InterpolatedModel mixed(word, cls, 1.0);
  for (const auto& s : test) {
    std::vector<WordId> h = {kBosId};
    for (WordId w : s) {
      c.Expect(mixed.LogProb(w, h) == word.LogProb(w, h), "lambda = 1 differs");
      h.push_back(w);
    }
  }
  c.Expect(EvaluateEncoded(mixed, test, {}).perplexity ==
               EvaluateEncoded(word, test, {}).perplexity,
           "lambda = 1 PPL differs");
}

// Writes a synthetic annotated corpus with agglutinated word forms.
void WriteAnnotatedCorpus(const fs::path& path) {
  const char* lemmas[] = {"ház", "kert", "alma", "fa", "kutya", "macska",
                          "város", "út", "nap", "víz", "könyv", "asztal"};
  const char* verbs[] = {"akar", "lát", "megy", "tud", "ír", "olvas"};
  const char* noun_tags[] = {"", "<PLUR>", "<CAS<ACC>>", "<POSS><CAS<INS>>",
                             "<PLUR><CAS<INE>>"};
  const char* verb_tags[] = {"", "<PAST>", "<PAST><PLUR>", "<PLUR>"};
  SplitMix64 rng(5);
  std::ofstream out(path, std::ios::binary);
  for (int s = 0; s < 1500; ++s) {
    const size_t len = 2 + rng.Uniform(7);
    for (size_t i = 0; i < len; ++i) {
      if (rng.Uniform(3) == 0) {
        const char* lemma = verbs[rng.Uniform(std::size(verbs))];
        const char* tags = verb_tags[rng.Uniform(std::size(verb_tags))];
        out << lemma << "x" << i << '\t' << lemma << "\tVERB" << tags << '\n';
      } else {
        const size_t r = std::min(rng.Uniform(std::size(lemmas)),
                                  rng.Uniform(std::size(lemmas)));
        const char* lemma = lemmas[r];
        const char* tags = noun_tags[rng.Uniform(std::size(noun_tags))];
        out << (i == 0 ? "A" : "") << lemma << "y\t" << lemma << "\tNOUN"
            << tags << '\n';
      }
    }
    out << '\n';
    // Occasional exact repeats for --dedup.
    if (s % 50 == 0) out << "ház\tház\tNOUN\n\n";
  }
}

// Every file under `dir`, keyed by relative path. Manifests lose their
// wall-clock duration.
std::map<std::string, std::string> Snapshot(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    const std::string rel = fs::relative(e.path(), dir).generic_string();
    std::string bytes = ReadFile(e.path());
    if (rel.ends_with("manifest.json")) {
      auto json = nlohmann::ordered_json::parse(bytes);
      json.erase("duration_seconds");
      bytes = json.dump(2);
    }
    out[rel] = std::move(bytes);
  }
  return out;
}

void PipelineDeterminism(Checker& c) {
  TempDir tmp("acceptance");
  const fs::path run = tmp.path() / "run";
  fs::create_directories(run);
  WriteAnnotatedCorpus(tmp.path() / "corpus.tsv");

  const std::string cli = GLFLM_CLI_PATH;
  const std::vector<std::string> steps = {
      "preprocess ../corpus.tsv --glf --seed 7 --threshold 2 --dedup "
      "--splits 0.8,0.1,0.1 --out-dir prep",
      "count prep/train.txt --vocab prep/vocab.txt --order 3 --out "
      "counts.bin",
      "train --counts counts.bin --vocab prep/vocab.txt --order 3 "
      "--preset unpruned-interpolated --arpa-out model.arpa "
      "--binary-out model.bin",
      "train-class --corpus prep/train.txt --vocab prep/vocab.txt "
      "--classes prep/classes.tsv --order 3 --out-dir classes",
      "eval --model model.bin --class-model classes --tune-dev prep/dev.txt "
      "--corpus prep/test.txt --corpus prep/dev.txt --report eval.tsv "
      "> table.txt",
      "report eval.tsv --layout by-corpus --out report.txt",
  };
  auto run_all = [&]() {
    for (const auto& entry : fs::directory_iterator(run)) {
      fs::remove_all(entry.path());
    }
    for (const std::string& step : steps) {
      const std::string command =
          fmt::format("cd '{}' && '{}' --threads 3 --log-level warn {}",
                      run.string(), cli, step);
      const int status = std::system(command.c_str());
      c.Expect(status == 0, fmt::format("'{}' exited {}", step, status));
      if (status != 0) return false;
    }
    return true;
  };
  if (!run_all()) return;
  const auto first = Snapshot(run);
  if (!run_all()) return;
  const auto second = Snapshot(run);

  c.Expect(first.size() >= 20,
           fmt::format("only {} artifacts", first.size()));
  for (const char* required :
       {"prep/train.txt", "model.arpa", "eval.tsv", "table.txt",
        "classes/transitions.arpa", "model.arpa.manifest.json"}) {
    c.Expect(first.count(required) == 1, std::string("missing ") + required);
  }
  c.Expect(!first.at("eval.tsv").empty(), "empty eval records");
  for (const auto& [name, bytes] : first) {
    auto it = second.find(name);
    c.Expect(it != second.end() && it->second == bytes,
             "artifact differs: " + name);
  }
  c.Expect(first.size() == second.size(), "artifact sets differ");
}

void ReorderingInvariance(Checker& c) {
  const auto text = ZipfCorpus(91, 30000, 300);
  const Vocabulary vocab = VocabularyOf(text);
  auto corpus = Encode(vocab, text);
  const NGramModel model = TrainKneserNey(CountNGrams(corpus, 3, vocab), vocab,
                                          TrainConfig::UnprunedInterpolated(3));
  const double base = EvaluateEncoded(model, corpus, {}).perplexity;
  for (uint64_t seed : {1, 2, 3}) {
    ShuffleInPlace(corpus, seed);
    for (int threads : {1, 3, 8}) {
      EvalOptions options;
      options.threads = threads;
      const double ppl = EvaluateEncoded(model, corpus, options).perplexity;
      c.Near(ppl, base, 1e-12 * base,
             fmt::format("seed {} threads {}", seed, threads));
    }
  }
  std::reverse(corpus.begin(), corpus.end());
  c.Near(EvaluateEncoded(model, corpus, {}).perplexity, base, 1e-12 * base,
         "reversed");
}

struct Criterion {
  const char* name;
  double budget_seconds;
  std::function<void(Checker&)> run;
};

int Main() {
  const Criterion criteria[] = {
      {"deglutinization exactness", 1, Deglutinization},
      {"perplexity identities", 1, PerplexityIdentities},
      {"KN normalization", 30, KnNormalization},
      {"oracle equivalence", 10, OracleEquivalence},
      {"counting oracle", 10, CountingOracle},
      {"ARPA round trip", 5, ArpaRoundTrip},
      {"trend: interpolated <= pruned backoff", 120, TrendCheck},
      {"class-model identity", 5, ClassIdentity},
      {"pipeline determinism", 60, PipelineDeterminism},
      {"reordering invariance", 5, ReorderingInvariance},
  };
  int failed = 0;
  int index = 0;
  for (const Criterion& criterion : criteria) {
    ++index;
    Checker checker;
    const auto start = std::chrono::steady_clock::now();
    try {
      criterion.run(checker);
    } catch (const std::exception& e) {
      checker.Expect(false, std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start)
                               .count();
    const bool in_time = seconds <= criterion.budget_seconds;
    const bool pass = checker.ok() && in_time;
    failed += !pass;
    std::cout << fmt::format("{} {:2d} {} ({} checks, {:.2f}s of {:.0f}s)\n",
                             pass ? "PASS" : "FAIL", index, criterion.name,
                             checker.checks(), seconds,
                             criterion.budget_seconds);
    if (!checker.ok()) std::cout << "    " << checker.Summary() << '\n';
    if (!in_time) std::cout << "    over time budget\n";
    std::cout.flush();
  }
  std::cout << fmt::format("{} of {} criteria passed\n",
                           std::size(criteria) - failed, std::size(criteria));
  return failed == 0 ? 0 : 1;
}

}  // namespace
}  // namespace glflm

int main() { return glflm::Main(); }
