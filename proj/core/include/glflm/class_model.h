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

#ifndef GLFLM_CLASS_MODEL_H_
#define GLFLM_CLASS_MODEL_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "glflm/kn_model.h"
#include "glflm/language_model.h"
#include "glflm/vocabulary.h"

namespace glflm {

inline constexpr double kDefaultEmissionAlpha = 0.01;

// Token -> class label occurrence counts gathered from an annotated corpus.
class ClassObservations {
 public:
  void Add(std::string_view token, std::string_view label, uint64_t count = 1);

  // The most frequent label of `token`; ties go to the lexicographically
  // smaller label.
  std::optional<std::string> MajorityClass(std::string_view token) const;

  size_t size() const { return labels_.size(); }

 private:
  absl::flat_hash_map<std::string, absl::flat_hash_map<std::string, uint64_t>>
      labels_;
};

// Hard, total token -> class map. The class vocabulary reserves <unk>, <s>
// and </s> (ids 0-2) as the classes of the matching tokens.
struct ClassAssignment {
  Vocabulary classes;
  std::vector<WordId> class_of;  // indexed by word id
  uint64_t uncovered = 0;        // vocabulary tokens with no observation

  WordId ClassOf(WordId word) const {
    return word < class_of.size() ? class_of[word] : kUnkId;
  }

  // Every word is its own class.
  static ClassAssignment Identity(const Vocabulary& vocab);

  // `token<TAB>class` in word id order.
  void Write(std::ostream& out, const Vocabulary& vocab) const;
  // Tokens missing from the file fall into the <unk> class and count as
  // uncovered. Throws MalformedLine.
  static ClassAssignment Read(std::istream& in, const Vocabulary& vocab);
};

// Majority label per vocabulary token. Unobserved affix-shaped tokens are
// their own class; other unobserved tokens go to <unk> and are counted in
// `uncovered`. Class ids follow first use in word id order.
ClassAssignment AssignClasses(const Vocabulary& vocab,
                              const ClassObservations& observations);

// Class-based model: P(w | history) = P(w | c(w)) * P(c(w) | class history).
// Emissions are add-alpha smoothed over the vocabulary members of each
// class; the class sequence is a Kneser-Ney model over class ids.
class ClassLM : public LanguageModel {
 public:
  ClassLM(Vocabulary vocab, ClassAssignment assignment,
          std::vector<uint64_t> emission_counts, double alpha,
          NGramModel transitions);

  // Emission counts and class n-grams from `sentences` (each followed by
  // an implicit </s>).
  static ClassLM Train(const Vocabulary& vocab, ClassAssignment assignment,
                       std::span<const std::vector<WordId>> sentences,
                       const TrainConfig& config,
                       double alpha = kDefaultEmissionAlpha);

  const Vocabulary& vocab() const override { return vocab_; }
  int order() const override { return transitions_.order(); }
  double LogProb(WordId word, std::span<const WordId> context) const override;

  // log10 P(word | class(word)).
  double EmissionLogProb(WordId word) const;
  const NGramModel& transitions() const { return transitions_; }
  const ClassAssignment& assignment() const { return assignment_; }
  double alpha() const { return alpha_; }

  // Directory bundle: manifest.conf, vocab.txt, classes.tsv, emission.tsv
  // (`token<TAB>class<TAB>count<TAB>log10prob`), transitions.arpa and the
  // exact transitions.bin.
  void WriteBundle(const std::filesystem::path& dir) const;
  static ClassLM ReadBundle(const std::filesystem::path& dir);

 private:
  Vocabulary vocab_;
  ClassAssignment assignment_;
  std::vector<uint64_t> emission_counts_;
  double alpha_;
  NGramModel transitions_;
  std::vector<double> emission_log10_;
};

// log10(lambda * 10^word_lp + (1 - lambda) * 10^class_lp), evaluated without
// leaving log space. lambda = 1 and lambda = 0 return the inputs unchanged.
double InterpolateLogProb(double word_lp, double class_lp, double lambda);

// Static linear interpolation of two models over the same vocabulary.
class InterpolatedModel : public LanguageModel {
 public:
  // Throws VocabMismatch or InvalidConfig (lambda outside [0, 1]).
  InterpolatedModel(const LanguageModel& word, const LanguageModel& cls,
                    double lambda);

  const Vocabulary& vocab() const override { return word_.vocab(); }
  int order() const override;
  double LogProb(WordId word, std::span<const WordId> context) const override;
  double lambda() const { return lambda_; }

 private:
  const LanguageModel& word_;
  const LanguageModel& class_;
  double lambda_;
};

// {0.00, 0.05, ..., 1.00}.
std::vector<double> DefaultLambdaGrid();

// Grid point with the lowest dev perplexity; ties (within 1e-12 relative)
// go to the larger lambda. Throws EmptyCorpus.
double TuneLambda(const LanguageModel& word, const LanguageModel& cls,
                  std::span<const std::vector<WordId>> dev,
                  std::span<const double> grid = {}, int threads = 1);

}  // namespace glflm

#endif  // GLFLM_CLASS_MODEL_H_
