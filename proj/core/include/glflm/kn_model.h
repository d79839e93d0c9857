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

#ifndef GLFLM_KN_MODEL_H_
#define GLFLM_KN_MODEL_H_

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "glflm/language_model.h"
#include "glflm/ngram_counts.h"
#include "glflm/vocabulary.h"

namespace glflm {

enum class Flavor { kBackoff, kInterpolated };

std::string_view FlavorName(Flavor flavor);
Flavor ParseFlavor(std::string_view name);

// Modified Kneser-Ney discounts for one order.
struct Discounts {
  double d1 = 0.0;
  double d2 = 0.0;
  double d3plus = 0.0;

  double ForCount(uint64_t count) const {
    if (count == 0) return 0.0;
    if (count == 1) return d1;
    if (count == 2) return d2;
    return d3plus;
  }
};

// Closed-form estimates from n1..n4:
//   Y = n1 / (n1 + 2 n2)
//   D1 = 1 - 2Y n2/n1,  D2 = 2 - 3Y n3/n2,  D3+ = 3 - 4Y n4/n3
// A discount whose formula needs a zero denominator (or whose n3/n4 input is
// zero) falls back to Y. Each discount is clamped to [0, j]. When
// n1 = n2 = 0 all three use n3 / (n3 + 2 n4) (1 if n3 = 0 too). Throws
// DegenerateCounts when n1..n4 are all zero.
Discounts EstimateDiscounts(const std::array<uint64_t, 4>& n);

struct TrainConfig {
  int order = 5;
  Flavor flavor = Flavor::kInterpolated;
  // Minimum KN count per order (index k-1) for a k-gram to be stored.
  // Unigrams are always stored, whatever min_counts[0] says.
  std::vector<uint64_t> min_counts = {1, 1, 1, 1, 1};

  // Pruned backoff: min counts 1, 1, 2, 2, ... (2 from the trigrams up).
  static TrainConfig SrilmDefault(int order);
  // Interpolated with every min count at 1.
  static TrainConfig UnprunedInterpolated(int order);

  // Throws InvalidConfig.
  void Validate() const;
};

// An ARPA-shaped backoff model. Stored grams carry a log10 probability,
// stored contexts a log10 backoff weight. Contexts live in a trie keyed by
// the reversed history, so one walk from the most recent word outwards
// finds both the longest matching gram and the backoff weights to add.
class NGramModel : public LanguageModel {
 public:
  NGramModel(Vocabulary vocab, int order);

  const Vocabulary& vocab() const override { return vocab_; }
  int order() const override { return order_; }
  double LogProb(WordId word, std::span<const WordId> context) const override;

  std::optional<Flavor> flavor() const { return flavor_; }
  void set_flavor(std::optional<Flavor> flavor) { flavor_ = flavor; }

  // Builders. `gram` is in natural order (oldest word first).
  void SetLogProb(std::span<const WordId> gram, double log10_prob);
  void SetBackoff(std::span<const WordId> gram, double log10_backoff);

  std::optional<double> StoredLogProb(std::span<const WordId> gram) const;
  // Backoff weight of `gram` used as a context, if one was set.
  std::optional<double> StoredBackoff(std::span<const WordId> gram) const;

  size_t NumGrams(int k) const { return counts_.at(k - 1); }

  struct Entry {
    std::vector<WordId> gram;
    double log_prob;
    double backoff;  // 0 when unset
  };
  // Stored k-grams sorted lexicographically by id sequence.
  std::vector<Entry> SortedEntries(int k) const;

 private:
  using NodeId = uint32_t;
  static constexpr NodeId kRoot = 0;
  struct ContextNode {
    double backoff = 0.0;
    NodeId parent = kRoot;
    WordId word = 0;
    uint32_t depth = 0;
  };
  static uint64_t Key(NodeId node, WordId word) {
    return (static_cast<uint64_t>(node) << 32) | word;
  }
  std::optional<NodeId> FindContext(std::span<const WordId> history) const;
  NodeId ContextOrCreate(std::span<const WordId> history);

  Vocabulary vocab_;
  int order_;
  std::optional<Flavor> flavor_;
  std::vector<ContextNode> nodes_;
  absl::flat_hash_map<uint64_t, NodeId> children_;
  absl::flat_hash_map<uint64_t, double> probs_;
  std::vector<size_t> counts_;
};

// Estimates a modified Kneser-Ney model of order config.order from `counts`
// (which may have a higher order). The top order uses raw counts, lower
// orders use continuation counts; grams opening with <s> keep raw counts at
// every order. The unigram level is interpolated with the uniform
// distribution over the vocabulary minus <s> in both flavors. Backoff weights
// are the leftover-mass ratio of each context, so every context normalizes
// exactly regardless of pruning.
//
// Throws VocabMismatch, OrderMismatch, EmptyCorpus or DegenerateCounts.
NGramModel TrainKneserNey(const NGramTable& counts, const Vocabulary& vocab,
                          const TrainConfig& config);

// Per-order discounts the trainer would use (index k-1).
std::vector<Discounts> TrainingDiscounts(const NGramTable& counts,
                                         int order);

}  // namespace glflm

#endif  // GLFLM_KN_MODEL_H_
