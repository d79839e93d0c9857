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

#include "glflm/ngram_counts.h"

#include <algorithm>
#include <string>
#include <thread>

#include "glflm/errors.h"

namespace glflm {
namespace {

void CheckOrder(int order) {
  if (order < 1 || order > kMaxOrder) {
    throw OrderMismatch("n-gram order must be in [1, " +
                        std::to_string(kMaxOrder) + "], got " +
                        std::to_string(order));
  }
}

}  // namespace

NGramTable::NGramTable(int order, uint64_t vocab_fingerprint,
                       size_t vocab_size)
    : order_(order),
      vocab_fingerprint_(vocab_fingerprint),
      vocab_size_(vocab_size),
      nodes_(1),
      by_depth_(order + 1) {
  CheckOrder(order);
  by_depth_[0].push_back(kRoot);
}

NGramTable::NodeId NGramTable::ChildOrCreate(NodeId parent, WordId word) {
  auto [it, inserted] =
      children_.try_emplace(Key(parent, word), static_cast<NodeId>(nodes_.size()));
  if (inserted) {
    Node node;
    node.parent = parent;
    node.word = word;
    node.depth = static_cast<uint8_t>(nodes_[parent].depth + 1);
    nodes_.push_back(node);
    by_depth_[node.depth].push_back(it->second);
    finalized_ = false;
  }
  return it->second;
}

void NGramTable::AddSentence(std::span<const WordId> ids) {
  // Padded sentence: <s> ids... </s>.
  const size_t len = ids.size() + 2;
  const auto at = [&](size_t i) -> WordId {
    if (i == 0) return kBosId;
    if (i == len - 1) return kEosId;
    return ids[i - 1];
  };
  for (WordId id : ids) {
    if (id >= vocab_size_) {
      throw UnknownToken("<id " + std::to_string(id) + ">");
    }
  }
  for (size_t start = 0; start < len; ++start) {
    NodeId node = kRoot;
    const size_t stop = std::min(len, start + static_cast<size_t>(order_));
    for (size_t i = start; i < stop; ++i) {
      node = ChildOrCreate(node, at(i));
      ++nodes_[node].stats.count;
    }
  }
}

void NGramTable::AddGram(std::span<const WordId> gram, uint64_t count) {
  if (gram.empty() || gram.size() > static_cast<size_t>(order_)) {
    throw OrderMismatch("gram length " + std::to_string(gram.size()) +
                        " outside table order " + std::to_string(order_));
  }
  NodeId node = kRoot;
  for (WordId id : gram) {
    if (id >= vocab_size_) {
      throw UnknownToken("<id " + std::to_string(id) + ">");
    }
    node = ChildOrCreate(node, id);
  }
  nodes_[node].stats.count += count;
}

void NGramTable::Finalize() {
  for (Node& node : nodes_) {
    node.stats.successors = 0;
    node.stats.predecessors = 0;
  }
  std::vector<WordId> gram;
  for (NodeId id = 1; id < nodes_.size(); ++id) {
    Node& node = nodes_[id];
    if (node.stats.count == 0) continue;
    ++nodes_[node.parent].stats.successors;
    if (node.depth < 2) continue;
    // (v, g) contributes one predecessor to g.
    GramOf(id, &gram);
    auto suffix = FindNode(std::span<const WordId>(gram).subspan(1));
    if (suffix) ++nodes_[*suffix].stats.predecessors;
  }
  finalized_ = true;
}

std::optional<NGramTable::NodeId> NGramTable::Child(NodeId parent,
                                                    WordId word) const {
  auto it = children_.find(Key(parent, word));
  if (it == children_.end()) return std::nullopt;
  return it->second;
}

std::optional<NGramTable::NodeId> NGramTable::FindNode(
    std::span<const WordId> gram) const {
  NodeId node = kRoot;
  for (WordId id : gram) {
    auto child = Child(node, id);
    if (!child) return std::nullopt;
    node = *child;
  }
  return node;
}

std::optional<GramStats> NGramTable::Find(std::span<const WordId> gram) const {
  auto node = FindNode(gram);
  if (!node || gram.empty() || nodes_[*node].stats.count == 0) {
    return std::nullopt;
  }
  return nodes_[*node].stats;
}

uint64_t NGramTable::Count(std::span<const WordId> gram) const {
  auto node = FindNode(gram);
  return node && !gram.empty() ? nodes_[*node].stats.count : 0;
}

std::span<const NGramTable::NodeId> NGramTable::NodesAtDepth(int k) const {
  if (k < 0 || k > order_) return {};
  return by_depth_[k];
}

void NGramTable::GramOf(NodeId id, std::vector<WordId>* gram) const {
  gram->resize(nodes_[id].depth);
  for (size_t i = gram->size(); i > 0; --i) {
    (*gram)[i - 1] = nodes_[id].word;
    id = nodes_[id].parent;
  }
}

bool NGramTable::StartsWithBos(NodeId id) const {
  while (nodes_[id].depth > 1) id = nodes_[id].parent;
  return id != kRoot && nodes_[id].word == kBosId;
}

std::vector<std::pair<std::vector<WordId>, uint64_t>> NGramTable::SortedGrams(
    int k) const {
  std::vector<std::pair<std::vector<WordId>, uint64_t>> grams;
  std::vector<WordId> gram;
  for (NodeId id : NodesAtDepth(k)) {
    if (nodes_[id].stats.count == 0) continue;
    GramOf(id, &gram);
    grams.emplace_back(gram, nodes_[id].stats.count);
  }
  std::sort(grams.begin(), grams.end());
  return grams;
}

bool operator==(const NGramTable& a, const NGramTable& b) {
  if (a.order_ != b.order_ || a.vocab_fingerprint_ != b.vocab_fingerprint_ ||
      a.vocab_size_ != b.vocab_size_) {
    return false;
  }
  for (int k = 1; k <= a.order_; ++k) {
    if (a.SortedGrams(k) != b.SortedGrams(k)) return false;
  }
  return true;
}

NGramTable CountNGrams(std::span<const std::vector<WordId>> sentences,
                       int order, const Vocabulary& vocab) {
  NGramTable table(order, vocab.Fingerprint(), vocab.size());
  for (const auto& sentence : sentences) table.AddSentence(sentence);
  table.Finalize();
  return table;
}

NGramTable CountNGrams(std::span<const TokenSentence> sentences, int order,
                       const Vocabulary& vocab) {
  NGramTable table(order, vocab.Fingerprint(), vocab.size());
  for (const TokenSentence& sentence : sentences) {
    table.AddSentence(vocab.Encode(sentence));
  }
  table.Finalize();
  return table;
}

NGramTable CountNGramsSharded(std::span<const std::vector<WordId>> sentences,
                              int order, const Vocabulary& vocab, int shards) {
  CheckOrder(order);
  shards = std::max(1, shards);
  std::vector<NGramTable> tables;
  tables.reserve(shards);
  for (int s = 0; s < shards; ++s) {
    tables.emplace_back(order, vocab.Fingerprint(), vocab.size());
  }
  {
    std::vector<std::jthread> workers;
    const size_t n = sentences.size();
    for (int s = 0; s < shards; ++s) {
      const size_t begin = n * s / shards;
      const size_t end = n * (s + 1) / shards;
      workers.emplace_back([&tables, sentences, s, begin, end] {
        for (size_t i = begin; i < end; ++i) tables[s].AddSentence(sentences[i]);
      });
    }
  }
  NGramTable merged = std::move(tables[0]);
  for (int s = 1; s < shards; ++s) merged = MergeTables(merged, tables[s]);
  merged.Finalize();
  return merged;
}

NGramTable MergeTables(const NGramTable& a, const NGramTable& b) {
  if (a.order() != b.order()) {
    throw OrderMismatch("cannot merge tables of order " +
                        std::to_string(a.order()) + " and " +
                        std::to_string(b.order()));
  }
  if (a.vocab_fingerprint() != b.vocab_fingerprint() ||
      a.vocab_size() != b.vocab_size()) {
    throw VocabMismatch("cannot merge tables built over different vocabularies");
  }
  NGramTable merged = a;
  std::vector<WordId> gram;
  for (int k = 1; k <= b.order(); ++k) {
    for (NGramTable::NodeId id : b.NodesAtDepth(k)) {
      const uint64_t count = b.node(id).stats.count;
      if (count == 0) continue;
      b.GramOf(id, &gram);
      merged.AddGram(gram, count);
    }
  }
  merged.Finalize();
  return merged;
}

uint64_t AdjustedCount(const NGramTable& table, NGramTable::NodeId node,
                       int model_order) {
  const auto& n = table.node(node);
  if (n.depth >= model_order || table.StartsWithBos(node)) return n.stats.count;
  return n.stats.predecessors;
}

CountOfCounts ComputeCountOfCounts(const NGramTable& table, CountKind kind,
                                   int order) {
  if (order <= 0) order = table.order();
  if (order > table.order()) {
    throw OrderMismatch("count-of-counts order exceeds table order");
  }
  CountOfCounts coc;
  coc.per_order.assign(order, {0, 0, 0, 0});
  for (int k = 1; k <= order; ++k) {
    for (NGramTable::NodeId id : table.NodesAtDepth(k)) {
      const auto& node = table.node(id);
      if (k == 1 && node.word == kBosId) continue;
      if (node.stats.count == 0) continue;
      const uint64_t c = kind == CountKind::kRaw
                             ? node.stats.count
                             : AdjustedCount(table, id, order);
      if (c >= 1 && c <= 4) ++coc.per_order[k - 1][c - 1];
    }
  }
  return coc;
}

}  // namespace glflm
