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

#include "glflm/evaluation.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "glflm/errors.h"

namespace glflm {
namespace {

// Sentences per reduction block. Fixed so that results are identical for
// any thread count.
constexpr size_t kBlockSize = 256;
constexpr size_t kStreamChunk = 64 * kBlockSize;

// Neumaier's variant of Kahan summation.
void CompensatedAdd(double x, double& value, double& compensation) {
  const double t = value + x;
  if (std::abs(value) >= std::abs(x)) {
    compensation += (value - t) + x;
  } else {
    compensation += (x - t) + value;
  }
  value = t;
}

// Scores blocks of `sentences` on `threads` workers and folds the block
// accumulators in block order.
PerplexityAccumulator ScoreBlocks(const LanguageModel& model,
                                  std::span<const std::vector<WordId>> sentences,
                                  int threads) {
  const size_t blocks = (sentences.size() + kBlockSize - 1) / kBlockSize;
  std::vector<PerplexityAccumulator> partial(blocks);
  const auto run = [&](size_t worker, size_t workers) {
    for (size_t b = worker; b < blocks; b += workers) {
      const size_t end = std::min(sentences.size(), (b + 1) * kBlockSize);
      for (size_t i = b * kBlockSize; i < end; ++i) {
        partial[b].Add(ScoreSentence(model, sentences[i]));
      }
    }
  };
  const size_t workers =
      std::clamp<size_t>(static_cast<size_t>(std::max(threads, 1)), 1,
                         std::max<size_t>(blocks, 1));
  if (workers == 1) {
    run(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (size_t w = 0; w < workers; ++w) pool.emplace_back(run, w, workers);
  }
  PerplexityAccumulator total;
  for (const auto& block : partial) total.Merge(block);
  return total;
}

}  // namespace

SentenceScore ScoreSentence(const LanguageModel& model,
                            std::span<const WordId> sentence) {
  SentenceScore score;
  double sum = 0.0, sum_c = 0.0, unk = 0.0, unk_c = 0.0;
  std::vector<WordId> history;
  history.reserve(sentence.size() + 1);
  history.push_back(kBosId);
  const auto score_event = [&](WordId word) {
    const double lp = model.LogProb(word, history);
    CompensatedAdd(lp, sum, sum_c);
    ++score.events;
    if (word == kUnkId || word >= model.vocab().size()) {
      ++score.unk_events;
      CompensatedAdd(lp, unk, unk_c);
    }
  };
  for (WordId word : sentence) {
    score_event(word);
    history.push_back(word);
  }
  score_event(kEosId);
  score.log10_prob = sum + sum_c;
  score.unk_log10_prob = unk + unk_c;
  return score;
}

double EvalReport::oov_rate() const {
  const uint64_t words = tokens - sentences;
  return words == 0 ? 0.0 : static_cast<double>(oov) / words;
}

void PerplexityAccumulator::Sum::Add(double x) {
  CompensatedAdd(x, value, compensation);
}

void PerplexityAccumulator::Add(const SentenceScore& score) {
  log10_prob_.Add(score.log10_prob);
  unk_log10_prob_.Add(score.unk_log10_prob);
  ++sentences_;
  events_ += score.events;
  unk_events_ += score.unk_events;
}

void PerplexityAccumulator::Merge(const PerplexityAccumulator& other) {
  log10_prob_.Add(other.log10_prob_.Total());
  unk_log10_prob_.Add(other.unk_log10_prob_.Total());
  sentences_ += other.sentences_;
  events_ += other.events_;
  unk_events_ += other.unk_events_;
  oov_ += other.oov_;
}

EvalReport PerplexityAccumulator::Finish(std::string model,
                                         std::string corpus) const {
  if (events_ == 0) throw EmptyCorpus("nothing to evaluate");
  EvalReport report;
  report.model = std::move(model);
  report.corpus = std::move(corpus);
  report.sentences = sentences_;
  report.tokens = events_;
  report.oov = oov_;
  report.unk_events = unk_events_;
  // 2^H is evaluated as 10^(H / log2 10), skipping a base conversion.
  const double total = log10_prob_.Total();
  const double mean = -total / static_cast<double>(events_);
  report.log2_prob = total * kLog2Of10;
  report.entropy = mean * kLog2Of10;
  report.perplexity = std::pow(10.0, mean);
  const uint64_t known = events_ - unk_events_;
  report.perplexity_excl_unk =
      known == 0 ? std::numeric_limits<double>::quiet_NaN()
                 : std::pow(10.0, -(total - unk_log10_prob_.Total()) /
                                      static_cast<double>(known));
  return report;
}

EvalReport EvaluateEncoded(const LanguageModel& model,
                           std::span<const std::vector<WordId>> sentences,
                           const EvalOptions& options) {
  PerplexityAccumulator acc = ScoreBlocks(model, sentences, options.threads);
  EvalReport report = acc.Finish(options.model_name, options.corpus_name);
  report.threshold = options.threshold;
  report.cross = options.cross;
  return report;
}

EvalReport EvaluatePerplexity(const LanguageModel& model,
                              std::span<const TokenSentence> sentences,
                              const EvalOptions& options) {
  std::vector<std::vector<WordId>> encoded;
  encoded.reserve(sentences.size());
  uint64_t oov = 0;
  for (const TokenSentence& sentence : sentences) {
    encoded.push_back(model.vocab().EncodeOrUnk(sentence, &oov));
  }
  PerplexityAccumulator acc = ScoreBlocks(model, encoded, options.threads);
  acc.AddOov(oov);
  EvalReport report = acc.Finish(options.model_name, options.corpus_name);
  report.threshold = options.threshold;
  report.cross = options.cross;
  return report;
}

EvalReport EvaluateStream(const LanguageModel& model, PlainCorpusReader& reader,
                          const EvalOptions& options) {
  PerplexityAccumulator total;
  std::vector<std::vector<WordId>> chunk;
  TokenSentence sentence;
  uint64_t oov = 0;
  const auto flush = [&] {
    total.Merge(ScoreBlocks(model, chunk, options.threads));
    chunk.clear();
  };
  while (reader.Next(&sentence)) {
    chunk.push_back(model.vocab().EncodeOrUnk(sentence, &oov));
    if (chunk.size() == kStreamChunk) flush();
  }
  flush();
  total.AddOov(oov);
  EvalReport report = total.Finish(options.model_name, options.corpus_name);
  report.threshold = options.threshold;
  report.cross = options.cross;
  return report;
}

EvalReport CrossEvaluate(const LanguageModel& model,
                         std::span<const TokenSentence> foreign_corpus,
                         EvalOptions options) {
  options.cross = true;
  return EvaluatePerplexity(model, foreign_corpus, options);
}

}  // namespace glflm
