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

#ifndef GLFLM_TESTS_ORACLES_NAIVE_COUNTS_H_
#define GLFLM_TESTS_ORACLES_NAIVE_COUNTS_H_

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "glflm/vocabulary.h"

namespace glflm::oracle {

using Gram = std::vector<WordId>;

// Single pass over padded sentences into ordered maps.
struct NaiveCounts {
  int order = 0;
  std::map<Gram, uint64_t> counts;
  std::map<Gram, std::set<WordId>> left;   // distinct predecessors
  std::map<Gram, std::set<WordId>> right;  // distinct successors

  static NaiveCounts Build(const std::vector<std::vector<WordId>>& sentences,
                           int order) {
    NaiveCounts out;
    out.order = order;
    for (const auto& sentence : sentences) {
      Gram padded = {kBosId};
      padded.insert(padded.end(), sentence.begin(), sentence.end());
      padded.push_back(kEosId);
      for (size_t i = 0; i < padded.size(); ++i) {
        for (int k = 1; k <= order && i + k <= padded.size(); ++k) {
          out.counts[Gram(padded.begin() + i, padded.begin() + i + k)]++;
        }
      }
    }
    for (const auto& [gram, count] : out.counts) {
      if (gram.size() < 2) continue;
      out.left[Gram(gram.begin() + 1, gram.end())].insert(gram.front());
      out.right[Gram(gram.begin(), gram.end() - 1)].insert(gram.back());
    }
    return out;
  }

  uint64_t Count(const Gram& gram) const {
    auto it = counts.find(gram);
    return it == counts.end() ? 0 : it->second;
  }
  uint64_t Predecessors(const Gram& gram) const {
    auto it = left.find(gram);
    return it == left.end() ? 0 : it->second.size();
  }
  uint64_t Successors(const Gram& gram) const {
    auto it = right.find(gram);
    return it == right.end() ? 0 : it->second.size();
  }

  uint64_t Adjusted(const Gram& gram, int model_order) const {
    if (static_cast<int>(gram.size()) == model_order ||
        gram.front() == kBosId) {
      return Count(gram);
    }
    return Predecessors(gram);
  }

  // n1..n4 of order k, skipping the <s> unigram.
  std::array<uint64_t, 4> CountOfCounts(int k, bool adjusted,
                                        int model_order) const {
    std::array<uint64_t, 4> n{};
    for (const auto& [gram, count] : counts) {
      if (static_cast<int>(gram.size()) != k) continue;
      if (k == 1 && gram[0] == kBosId) continue;
      const uint64_t c = adjusted ? Adjusted(gram, model_order) : count;
      if (c >= 1 && c <= 4) n[c - 1]++;
    }
    return n;
  }
};

}  // namespace glflm::oracle

#endif  // GLFLM_TESTS_ORACLES_NAIVE_COUNTS_H_
