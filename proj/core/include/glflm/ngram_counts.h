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

#ifndef GLFLM_NGRAM_COUNTS_H_
#define GLFLM_NGRAM_COUNTS_H_

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "glflm/corpus.h"
#include "glflm/vocabulary.h"

namespace glflm {

inline constexpr int kMaxOrder = 9;

// Statistics kept for every gram in an NGramTable.
struct GramStats {
  uint64_t count = 0;         // occurrences
  uint32_t successors = 0;    // distinct w with (gram, w) in the table
  uint32_t predecessors = 0;  // distinct v with (v, gram) in the table
};

// Trie of all k-grams (k <= order) over token ids. Sentences are padded with
// a single <s> and </s>; <s> opens grams but is never counted as a unigram
// event. Successor and predecessor counts are derived data, refreshed by
// Finalize() (the counting entry points call it).
class NGramTable {
 public:
  using NodeId = uint32_t;
  static constexpr NodeId kRoot = 0;

  struct Node {
    GramStats stats;
    NodeId parent = kRoot;
    WordId word = 0;
    uint8_t depth = 0;
  };

  NGramTable(int order, uint64_t vocab_fingerprint, size_t vocab_size);

  int order() const { return order_; }
  uint64_t vocab_fingerprint() const { return vocab_fingerprint_; }
  size_t vocab_size() const { return vocab_size_; }

  // Counts every k-gram of `<s> ids </s>`. Ids must be < vocab_size().
  void AddSentence(std::span<const WordId> ids);
  // Adds `count` to a single gram, creating missing prefixes with count 0.
  void AddGram(std::span<const WordId> gram, uint64_t count);
  void Finalize();

  std::optional<NodeId> FindNode(std::span<const WordId> gram) const;
  std::optional<NodeId> Child(NodeId parent, WordId word) const;
  const Node& node(NodeId id) const { return nodes_[id]; }
  size_t num_nodes() const { return nodes_.size(); }
  std::optional<GramStats> Find(std::span<const WordId> gram) const;
  uint64_t Count(std::span<const WordId> gram) const;

  // Nodes at depth k (k-grams), in creation order. Requires Finalize().
  std::span<const NodeId> NodesAtDepth(int k) const;
  void GramOf(NodeId id, std::vector<WordId>* gram) const;
  bool StartsWithBos(NodeId id) const;

  size_t NumGrams(int k) const { return NodesAtDepth(k).size(); }
  bool empty() const { return nodes_.size() == 1; }
  uint64_t sentences() const { return Count(std::array{kBosId}); }

  // All k-grams with counts, sorted lexicographically by id sequence.
  std::vector<std::pair<std::vector<WordId>, uint64_t>> SortedGrams(
      int k) const;

  // Same order, vocabulary and gram counts.
  friend bool operator==(const NGramTable& a, const NGramTable& b);

 private:
  static uint64_t Key(NodeId parent, WordId word) {
    return (static_cast<uint64_t>(parent) << 32) | word;
  }
  NodeId ChildOrCreate(NodeId parent, WordId word);

  int order_;
  uint64_t vocab_fingerprint_;
  size_t vocab_size_;
  std::vector<Node> nodes_;
  absl::flat_hash_map<uint64_t, NodeId> children_;
  std::vector<std::vector<NodeId>> by_depth_;
  bool finalized_ = true;
};

// Counts encoded sentences. Throws OrderMismatch for orders outside
// [1, kMaxOrder].
NGramTable CountNGrams(std::span<const std::vector<WordId>> sentences,
                       int order, const Vocabulary& vocab);

// Encodes and counts text sentences; throws UnknownToken for tokens missing
// from `vocab`.
NGramTable CountNGrams(std::span<const TokenSentence> sentences, int order,
                       const Vocabulary& vocab);

// Splits `sentences` into `shards` contiguous shards, counts them on
// separate threads and merges the results in shard order.
NGramTable CountNGramsSharded(std::span<const std::vector<WordId>> sentences,
                              int order, const Vocabulary& vocab, int shards);

// Element-wise count sum. Throws OrderMismatch / VocabMismatch.
NGramTable MergeTables(const NGramTable& a, const NGramTable& b);

// n1..n4 per order; index k-1 holds the k-gram tallies. The <s> unigram is
// never included.
struct CountOfCounts {
  std::vector<std::array<uint64_t, 4>> per_order;

  const std::array<uint64_t, 4>& at(int k) const { return per_order.at(k - 1); }
};

enum class CountKind {
  kRaw,       // occurrence counts
  kAdjusted,  // Kneser-Ney counts: raw at the top order and for grams that
              // start with <s>, predecessor counts elsewhere
};

// Histogram of counts up to `order` (defaults to the table order).
CountOfCounts ComputeCountOfCounts(const NGramTable& table,
                                   CountKind kind = CountKind::kRaw,
                                   int order = 0);

// The KN count of `node` for a model of order `model_order`.
uint64_t AdjustedCount(const NGramTable& table, NGramTable::NodeId node,
                       int model_order);

}  // namespace glflm

#endif  // GLFLM_NGRAM_COUNTS_H_
