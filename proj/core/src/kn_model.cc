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

#include "glflm/kn_model.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "glflm/errors.h"

namespace glflm {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// Lower-order mass below this is treated as fully covered by a context.
constexpr double kCoveredMass = 1e-12;

double Clamp(double value, double hi) { return std::clamp(value, 0.0, hi); }

}  // namespace

std::string_view FlavorName(Flavor flavor) {
  return flavor == Flavor::kBackoff ? "backoff" : "interpolated";
}

Flavor ParseFlavor(std::string_view name) {
  if (name == "backoff") return Flavor::kBackoff;
  if (name == "interpolated") return Flavor::kInterpolated;
  throw InvalidConfig("unknown flavor '" + std::string(name) + "'");
}

Discounts EstimateDiscounts(const std::array<uint64_t, 4>& n) {
  const double n1 = static_cast<double>(n[0]);
  const double n2 = static_cast<double>(n[1]);
  const double n3 = static_cast<double>(n[2]);
  const double n4 = static_cast<double>(n[3]);
  if (n1 + 2 * n2 == 0) {
    // Nothing seen once or twice: one discount from the lowest populated
    // pair of count classes.
    if (n3 + n4 == 0) {
      throw DegenerateCounts("no grams seen 1-4 times; cannot discount");
    }
    const double y = n3 > 0 ? n3 / (n3 + 2 * n4) : 1.0;
    return {y, y, y};
  }
  const double y = n1 / (n1 + 2 * n2);
  Discounts d;
  d.d1 = (n1 > 0 && n2 > 0) ? 1 - 2 * y * n2 / n1 : y;
  d.d2 = (n2 > 0 && n3 > 0) ? 2 - 3 * y * n3 / n2 : y;
  d.d3plus = (n3 > 0 && n4 > 0) ? 3 - 4 * y * n4 / n3 : y;
  d.d1 = Clamp(d.d1, 1.0);
  d.d2 = Clamp(d.d2, 2.0);
  d.d3plus = Clamp(d.d3plus, 3.0);
  return d;
}

TrainConfig TrainConfig::SrilmDefault(int order) {
  TrainConfig config;
  config.order = order;
  config.flavor = Flavor::kBackoff;
  config.min_counts.assign(std::max(order, 0), 2);
  for (int k = 0; k < std::min(order, 2); ++k) config.min_counts[k] = 1;
  return config;
}

TrainConfig TrainConfig::UnprunedInterpolated(int order) {
  TrainConfig config;
  config.order = order;
  config.flavor = Flavor::kInterpolated;
  config.min_counts.assign(std::max(order, 0), 1);
  return config;
}

void TrainConfig::Validate() const {
  if (order < 1 || order > kMaxOrder) {
    throw InvalidConfig("order must be in [1, " + std::to_string(kMaxOrder) +
                        "]");
  }
  if (min_counts.size() != static_cast<size_t>(order)) {
    throw InvalidConfig("need one min count per order");
  }
  for (uint64_t m : min_counts) {
    if (m < 1) throw InvalidConfig("min counts must be >= 1");
  }
}

NGramModel::NGramModel(Vocabulary vocab, int order)
    : vocab_(std::move(vocab)), order_(order), nodes_(1), counts_(order, 0) {
  if (order < 1 || order > kMaxOrder) {
    throw OrderMismatch("model order must be in [1, " +
                        std::to_string(kMaxOrder) + "]");
  }
}

std::optional<NGramModel::NodeId> NGramModel::FindContext(
    std::span<const WordId> history) const {
  NodeId node = kRoot;
  for (size_t i = history.size(); i > 0; --i) {
    auto it = children_.find(Key(node, history[i - 1]));
    if (it == children_.end()) return std::nullopt;
    node = it->second;
  }
  return node;
}

NGramModel::NodeId NGramModel::ContextOrCreate(
    std::span<const WordId> history) {
  NodeId node = kRoot;
  for (size_t i = history.size(); i > 0; --i) {
    auto [it, inserted] = children_.try_emplace(
        Key(node, history[i - 1]), static_cast<NodeId>(nodes_.size()));
    if (inserted) {
      ContextNode child;
      child.parent = node;
      child.word = history[i - 1];
      child.depth = nodes_[node].depth + 1;
      nodes_.push_back(child);
    }
    node = it->second;
  }
  return node;
}

void NGramModel::SetLogProb(std::span<const WordId> gram, double log10_prob) {
  if (gram.empty() || gram.size() > static_cast<size_t>(order_)) {
    throw OrderMismatch("gram length outside model order");
  }
  const NodeId context = ContextOrCreate(gram.first(gram.size() - 1));
  auto [it, inserted] = probs_.insert_or_assign(Key(context, gram.back()),
                                                log10_prob);
  if (inserted) ++counts_[gram.size() - 1];
}

void NGramModel::SetBackoff(std::span<const WordId> gram,
                            double log10_backoff) {
  if (gram.empty() || gram.size() >= static_cast<size_t>(order_)) {
    throw OrderMismatch("backoff weights exist only below the top order");
  }
  nodes_[ContextOrCreate(gram)].backoff = log10_backoff;
}

std::optional<double> NGramModel::StoredLogProb(
    std::span<const WordId> gram) const {
  if (gram.empty()) return std::nullopt;
  auto context = FindContext(gram.first(gram.size() - 1));
  if (!context) return std::nullopt;
  auto it = probs_.find(Key(*context, gram.back()));
  if (it == probs_.end()) return std::nullopt;
  return it->second;
}

std::optional<double> NGramModel::StoredBackoff(
    std::span<const WordId> gram) const {
  if (gram.empty()) return std::nullopt;
  auto node = FindContext(gram);
  if (!node || !StoredLogProb(gram)) return std::nullopt;
  return nodes_[*node].backoff;
}

double NGramModel::LogProb(WordId word,
                           std::span<const WordId> context) const {
  if (word >= vocab_.size()) word = kUnkId;
  auto unigram = probs_.find(Key(kRoot, word));
  if (unigram == probs_.end()) unigram = probs_.find(Key(kRoot, kUnkId));
  if (unigram == probs_.end()) return kNegInf;

  const size_t usable =
      std::min(context.size(), static_cast<size_t>(order_ - 1));
  double best = unigram->second;
  double backoff = 0.0;
  NodeId node = kRoot;
  for (size_t i = 0; i < usable; ++i) {
    WordId h = context[context.size() - 1 - i];
    if (h >= vocab_.size()) h = kUnkId;
    auto child = children_.find(Key(node, h));
    if (child == children_.end()) break;
    node = child->second;
    auto prob = probs_.find(Key(node, word));
    if (prob != probs_.end()) {
      best = prob->second;
      backoff = 0.0;
    } else {
      backoff += nodes_[node].backoff;
    }
  }
  return best + backoff;
}

std::vector<NGramModel::Entry> NGramModel::SortedEntries(int k) const {
  std::vector<Entry> entries;
  entries.reserve(NumGrams(k));
  for (const auto& [key, log_prob] : probs_) {
    NodeId node = static_cast<NodeId>(key >> 32);
    if (nodes_[node].depth != static_cast<uint32_t>(k - 1)) continue;
    Entry entry;
    entry.log_prob = log_prob;
    for (; node != kRoot; node = nodes_[node].parent) {
      entry.gram.push_back(nodes_[node].word);
    }
    entry.gram.push_back(static_cast<WordId>(key & 0xFFFFFFFFu));
    entry.backoff = 0.0;
    if (k < order_) {
      auto own = FindContext(entry.gram);
      if (own) entry.backoff = nodes_[*own].backoff;
    }
    entries.push_back(std::move(entry));
  }
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.gram < b.gram; });
  return entries;
}

std::vector<Discounts> TrainingDiscounts(const NGramTable& counts, int order) {
  const CountOfCounts coc =
      ComputeCountOfCounts(counts, CountKind::kAdjusted, order);
  std::vector<Discounts> discounts(order);
  for (int k = 1; k <= order; ++k) {
    bool any = false;
    for (NGramTable::NodeId id : counts.NodesAtDepth(k)) {
      const auto& node = counts.node(id);
      if (node.stats.count > 0 && !(k == 1 && node.word == kBosId)) {
        any = true;
        break;
      }
    }
    if (!any) continue;
    const auto& n = coc.at(k);
    if (n[0] + n[1] + n[2] + n[3] == 0) {
      // Every gram seen 5+ times (few classes, say): unit discount.
      discounts[k - 1] = {1.0, 1.0, 1.0};
    } else {
      discounts[k - 1] = EstimateDiscounts(n);
    }
  }
  return discounts;
}

NGramModel TrainKneserNey(const NGramTable& counts, const Vocabulary& vocab,
                          const TrainConfig& config) {
  config.Validate();
  if (counts.vocab_fingerprint() != vocab.Fingerprint() ||
      counts.vocab_size() != vocab.size()) {
    throw VocabMismatch("count table was built over a different vocabulary");
  }
  const int order = config.order;
  if (order > counts.order()) {
    throw OrderMismatch("model order " + std::to_string(order) +
                        " exceeds count order " +
                        std::to_string(counts.order()));
  }
  if (counts.sentences() == 0) throw EmptyCorpus("no sentences were counted");

  const std::vector<Discounts> discounts = TrainingDiscounts(counts, order);
  const bool interpolate = config.flavor == Flavor::kInterpolated;
  using NodeId = NGramTable::NodeId;

  // Which grams get stored: those passing their min count, plus the prefix
  // (context) and suffix (backoff target) of every stored gram.
  std::vector<char> keep(counts.num_nodes(), 0);
  std::vector<WordId> gram;
  for (int k = order; k >= 2; --k) {
    for (NodeId id : counts.NodesAtDepth(k)) {
      const auto& node = counts.node(id);
      if (node.stats.count == 0) continue;
      const uint64_t a = AdjustedCount(counts, id, order);
      const double d = discounts[k - 1].ForCount(a);
      const bool eligible = a >= config.min_counts[k - 1] &&
                            (interpolate || static_cast<double>(a) - d > 0);
      if (!keep[id] && !eligible) continue;
      keep[id] = 1;
      keep[node.parent] = 1;
      counts.GramOf(id, &gram);
      if (auto suffix =
              counts.FindNode(std::span<const WordId>(gram).subspan(1))) {
        keep[*suffix] = 1;
      }
    }
  }

  NGramModel model(vocab, order);
  model.set_flavor(config.flavor);

  // Unigrams: discounted counts plus the freed mass spread uniformly over
  // every predictable word.
  {
    const Discounts& d = discounts[0];
    double total = 0.0;
    double freed = 0.0;
    for (NodeId id : counts.NodesAtDepth(1)) {
      const auto& node = counts.node(id);
      if (node.word == kBosId || node.stats.count == 0) continue;
      const uint64_t a = AdjustedCount(counts, id, order);
      total += static_cast<double>(a);
      freed += d.ForCount(a);
    }
    if (total <= 0) throw EmptyCorpus("no unigram events");
    const double uniform = 1.0 / static_cast<double>(vocab.size() - 1);
    for (WordId w = 0; w < vocab.size(); ++w) {
      const WordId single[1] = {w};
      if (w == kBosId) {
        model.SetLogProb(single, kNegInf);
        continue;
      }
      uint64_t a = 0;
      if (auto id = counts.Child(NGramTable::kRoot, w);
          id && counts.node(*id).stats.count > 0) {
        a = AdjustedCount(counts, *id, order);
      }
      const double p =
          std::max(static_cast<double>(a) - d.ForCount(a), 0.0) / total +
          freed / total * uniform;
      model.SetLogProb(single, std::log10(p));
    }
  }

  struct Pending {
    WordId word;
    double prob;
    double lower;
  };
  std::vector<Pending> pending;
  std::vector<WordId> context;
  std::vector<WordId> extended;
  for (int k = 2; k <= order; ++k) {
    const Discounts& d = discounts[k - 1];
    // Group k-grams by their context node.
    std::vector<std::pair<NodeId, NodeId>> by_context;
    for (NodeId id : counts.NodesAtDepth(k)) {
      if (counts.node(id).stats.count > 0) {
        by_context.emplace_back(counts.node(id).parent, id);
      }
    }
    std::sort(by_context.begin(), by_context.end());

    for (size_t begin = 0; begin < by_context.size();) {
      const NodeId parent = by_context[begin].first;
      size_t end = begin;
      while (end < by_context.size() && by_context[end].first == parent) ++end;
      if (!keep[parent]) {
        begin = end;
        continue;
      }

      double total = 0.0;
      double freed = 0.0;
      for (size_t i = begin; i < end; ++i) {
        const uint64_t a = AdjustedCount(counts, by_context[i].second, order);
        total += static_cast<double>(a);
        freed += d.ForCount(a);
      }
      const double gamma = freed / total;

      counts.GramOf(parent, &context);
      const std::span<const WordId> shorter =
          std::span<const WordId>(context).subspan(1);
      pending.clear();
      double stored_mass = 0.0;
      double lower_mass = 0.0;
      for (size_t i = begin; i < end; ++i) {
        const NodeId id = by_context[i].second;
        if (!keep[id]) continue;
        const WordId w = counts.node(id).word;
        const uint64_t a = AdjustedCount(counts, id, order);
        const double lower = std::pow(10.0, model.LogProb(w, shorter));
        const double discounted =
            std::max(static_cast<double>(a) - d.ForCount(a), 0.0) / total;
        double p;
        if (interpolate) {
          p = discounted + gamma * lower;
        } else {
          // A gram kept only to close the trie may have nothing left after
          // discounting; it then takes its interpolated lower-order share.
          p = discounted > 0 ? discounted : gamma * lower;
        }
        pending.push_back({w, p, lower});
        stored_mass += p;
        lower_mass += lower;
      }
      if (pending.empty()) {
        begin = end;
        continue;
      }

      double numerator = std::max(1.0 - stored_mass, 0.0);
      const double denominator = 1.0 - lower_mass;
      double scale = 1.0;
      double backoff = 1.0;
      if (denominator <= kCoveredMass) {
        // Every word is stored here: renormalize instead of backing off.
        scale = 1.0 / stored_mass;
      } else {
        backoff = numerator / denominator;
      }

      extended = context;
      extended.push_back(0);
      for (const Pending& entry : pending) {
        extended.back() = entry.word;
        model.SetLogProb(extended, std::log10(entry.prob * scale));
      }
      model.SetBackoff(context, std::log10(backoff));
      begin = end;
    }
  }
  return model;
}

}  // namespace glflm
