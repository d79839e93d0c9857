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

#ifndef GLFLM_PREPROCESS_H_
#define GLFLM_PREPROCESS_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "absl/container/flat_hash_set.h"
#include "glflm/corpus.h"
#include "glflm/prng.h"
#include "glflm/vocabulary.h"

namespace glflm {

class ClassObservations;

// Which token stream an annotated corpus is turned into.
enum class TokenMode {
  kWord,     // lowercased surface forms
  kGlf,      // lowercased lemma followed by split affix tags
  kFullPos,  // the whole morph code as a single token
  kPosGlf,   // morph head followed by split affix tags
};

std::string_view TokenModeName(TokenMode mode);
TokenMode ParseTokenMode(std::string_view name);

// Tag names (as returned by AffixName) treated as inflectional.
std::set<std::string> DefaultInflectionalTags();

struct PreprocessConfig {
  // Types with corpus frequency below this become <unk>; 0 and 1 disable.
  uint64_t threshold = 3;
  // Full affix tags (e.g. `<CAS<NOM>>`) that are never emitted.
  std::set<std::string> zero_morpheme_filter;
  std::set<std::string> inflectional_tags = DefaultInflectionalTags();
  std::set<std::string> included_derivational_tags = {"COMPAR", "SUPERLAT"};
  uint64_t shuffle_seed = 0;
  std::array<double, 3> split_ratios = {0.9, 0.05, 0.05};

  // Throws InvalidConfig.
  void Validate() const;

  // Key-value rendering recorded next to pipeline outputs.
  std::string Render() const;
};

// The affix tags of `morph` that survive splitting, in original order.
std::vector<std::string> SplitAffixes(const MorphCode& morph,
                                      const PreprocessConfig& config);

// [lowercased lemma] ++ split affix tags.
std::vector<std::string> DeglutinizeToken(const AnnotatedToken& token,
                                          const PreprocessConfig& config);

// Full-POS or POS-GLF rendering of a sentence; `mode` must be one of the two.
TokenSentence ToPosStream(const AnnotatedSentence& sentence, TokenMode mode,
                          const PreprocessConfig& config);

TokenSentence ToTokenStream(const AnnotatedSentence& sentence, TokenMode mode,
                            const PreprocessConfig& config);

// Records (token, class) pairs for the stream ToTokenStream would produce:
// affix tokens are their own class, every other token takes the word's head.
void AddClassObservations(const AnnotatedSentence& sentence, TokenMode mode,
                          const PreprocessConfig& config,
                          ClassObservations* observations);

// Keeps the first occurrence of each exact token sequence.
class SentenceDeduplicator {
 public:
  // True if the sentence has not been seen before.
  bool Admit(const TokenSentence& sentence);

  uint64_t seen() const { return seen_; }
  uint64_t removed() const { return removed_; }
  double removed_fraction() const {
    return seen_ == 0 ? 0.0 : static_cast<double>(removed_) / seen_;
  }

 private:
  absl::flat_hash_set<std::string> keys_;
  uint64_t seen_ = 0;
  uint64_t removed_ = 0;
};

std::vector<TokenSentence> DedupSentences(std::vector<TokenSentence> corpus,
                                          double* removed_fraction = nullptr);

// Reserved tokens first, then every type with count >= threshold in
// descending count order (ties lexicographic).
Vocabulary BuildThresholdVocabulary(const FrequencyDictionary& counts,
                                    uint64_t threshold);

// Replaces tokens absent from `vocab` with <unk>.
TokenSentence ApplyVocabulary(const TokenSentence& sentence,
                              const Vocabulary& vocab);

struct ThresholdResult {
  std::vector<TokenSentence> corpus;
  Vocabulary vocab;
};

ThresholdResult ApplyThreshold(const std::vector<TokenSentence>& corpus,
                               uint64_t threshold);

template <typename T>
std::vector<T> ShuffleSentences(std::vector<T> corpus, uint64_t seed) {
  ShuffleInPlace(corpus, seed);
  return corpus;
}

struct SplitSizes {
  size_t train = 0;
  size_t dev = 0;
  size_t test = 0;
};

// dev and test get floor(n * ratio); train takes the remainder.
SplitSizes ComputeSplitSizes(size_t n, const std::array<double, 3>& ratios);

template <typename T>
struct CorpusSplit {
  std::vector<T> train;
  std::vector<T> dev;
  std::vector<T> test;
};

// Contiguous prefix / middle / suffix split.
template <typename T>
CorpusSplit<T> SplitCorpus(const std::vector<T>& corpus,
                           const std::array<double, 3>& ratios) {
  const SplitSizes sizes = ComputeSplitSizes(corpus.size(), ratios);
  CorpusSplit<T> split;
  auto first = corpus.begin();
  split.train.assign(first, first + sizes.train);
  split.dev.assign(first + sizes.train, first + sizes.train + sizes.dev);
  split.test.assign(first + sizes.train + sizes.dev, corpus.end());
  return split;
}

struct PipelineOptions {
  CorpusFormat format = CorpusFormat::kAnnotatedTsv;
  TokenMode mode = TokenMode::kGlf;
  bool dedup = false;
  PreprocessConfig config;
};

struct PipelineStats {
  uint64_t input_sentences = 0;
  uint64_t kept_sentences = 0;
  double removed_fraction = 0.0;
  uint64_t vocab_size = 0;
  uint64_t unk_tokens = 0;
  SplitSizes split;
  uint64_t uncovered_class_tokens = 0;
  std::vector<std::filesystem::path> outputs;
};

// Normalize -> dedup -> threshold -> shuffle -> split, streaming sentence
// bodies through a spool file in `out_dir`. Writes train.txt, dev.txt,
// test.txt, vocab.txt, frequency dictionaries, classes.tsv (annotated input)
// and preprocess.conf.
PipelineStats RunPreprocessPipeline(std::istream& in,
                                    const PipelineOptions& options,
                                    const std::filesystem::path& out_dir);

}  // namespace glflm

#endif  // GLFLM_PREPROCESS_H_
