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

#ifndef GLFLM_EVALUATION_H_
#define GLFLM_EVALUATION_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "glflm/corpus.h"
#include "glflm/language_model.h"

namespace glflm {

// Score of one sentence: every token plus the closing </s>, each conditioned
// on the full left history starting with <s>.
// log2(10), for converting model scores to bits.
inline constexpr double kLog2Of10 = 3.321928094887362347870319429489390175864;

struct SentenceScore {
  double log10_prob = 0.0;
  uint64_t events = 0;      // tokens + 1 for </s>
  uint64_t unk_events = 0;  // events whose word is <unk>
  double unk_log10_prob = 0.0;

  double log2_prob() const { return log10_prob * kLog2Of10; }
};

SentenceScore ScoreSentence(const LanguageModel& model,
                            std::span<const WordId> sentence);

struct EvalReport {
  std::string model;
  std::string corpus;
  std::optional<uint64_t> threshold;
  bool cross = false;
  uint64_t sentences = 0;
  uint64_t tokens = 0;      // N: predicted events, </s> included
  uint64_t oov = 0;         // tokens mapped to <unk> at evaluation time
  uint64_t unk_events = 0;  // all events scored as <unk>, oov included
  double log2_prob = 0.0;
  double entropy = 0.0;     // H in bits per event
  double perplexity = 0.0;  // 2^H
  // Same accounting with <unk> events left out; NaN if nothing remains.
  double perplexity_excl_unk = 0.0;

  // oov over word tokens (events minus the </s> of each sentence).
  double oov_rate() const;
};

// Adds sentence scores in fixed blocks and combines block subtotals in
// block order with compensated summation, so the result does not depend
// on how blocks are scheduled across threads.
class PerplexityAccumulator {
 public:
  void Add(const SentenceScore& score);
  void AddOov(uint64_t oov) { oov_ += oov; }
  void Merge(const PerplexityAccumulator& other);

  // Throws EmptyCorpus when nothing was added.
  EvalReport Finish(std::string model, std::string corpus) const;

 private:
  struct Sum {
    double value = 0.0;
    double compensation = 0.0;
    void Add(double x);
    double Total() const { return value + compensation; }
  };
  // Kept in the models' log10 so the per-event scores are summed unconverted.
  Sum log10_prob_;
  Sum unk_log10_prob_;
  uint64_t sentences_ = 0;
  uint64_t events_ = 0;
  uint64_t unk_events_ = 0;
  uint64_t oov_ = 0;
};

struct EvalOptions {
  std::string model_name = "model";
  std::string corpus_name = "corpus";
  std::optional<uint64_t> threshold;
  int threads = 1;
  bool cross = false;
};

// log2 sentence probability and event count.
inline std::pair<double, uint64_t> SentenceLogProb(
    const LanguageModel& model, std::span<const WordId> sentence) {
  SentenceScore score = ScoreSentence(model, sentence);
  return {score.log2_prob(), score.events};
}

// Perplexity over already-encoded sentences.
EvalReport EvaluateEncoded(const LanguageModel& model,
                           std::span<const std::vector<WordId>> sentences,
                           const EvalOptions& options);

// Encodes with the model vocabulary (unknown tokens -> <unk>, counted as
// OOV) and scores. Throws EmptyCorpus.
EvalReport EvaluatePerplexity(const LanguageModel& model,
                              std::span<const TokenSentence> sentences,
                              const EvalOptions& options);

// Streams a plain-token corpus in chunks; memory is bounded by the chunk.
EvalReport EvaluateStream(const LanguageModel& model, PlainCorpusReader& reader,
                          const EvalOptions& options);

// Scores a corpus other than the model's own test split: foreign tokens
// outside the model vocabulary become <unk>, and the report is flagged as
// cross-corpus.
EvalReport CrossEvaluate(const LanguageModel& model,
                         std::span<const TokenSentence> foreign_corpus,
                         EvalOptions options);

}  // namespace glflm

#endif  // GLFLM_EVALUATION_H_
