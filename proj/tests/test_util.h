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

#ifndef GLFLM_TESTS_TEST_UTIL_H_
#define GLFLM_TESTS_TEST_UTIL_H_

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "glflm/corpus.h"
#include "glflm/language_model.h"
#include "glflm/prng.h"
#include "glflm/vocabulary.h"

namespace glflm::testing_util {

// Same probability for every word except <s>; the vocabulary is <unk>, <s>,
// </s> and `events - 2` more words, so there are `events` predictable ids.
class UniformModel : public LanguageModel {
 public:
  explicit UniformModel(size_t events) {
    for (size_t i = 0; i + 2 < events; ++i) vocab_.Add("w" + std::to_string(i));
    lp_ = std::log10(1.0 / static_cast<double>(events));
  }
  const Vocabulary& vocab() const override { return vocab_; }
  int order() const override { return 1; }
  double LogProb(WordId word, std::span<const WordId>) const override {
    return word == kBosId ? -INFINITY : lp_;
  }

 private:
  Vocabulary vocab_;
  double lp_;
};

// Fixed log10 probability per word id, ignoring context.
class TableModel : public LanguageModel {
 public:
  TableModel(Vocabulary vocab, std::vector<double> log10_probs)
      : vocab_(std::move(vocab)), lp_(std::move(log10_probs)) {}
  const Vocabulary& vocab() const override { return vocab_; }
  int order() const override { return 1; }
  double LogProb(WordId word, std::span<const WordId>) const override {
    return word < lp_.size() ? lp_[word] : lp_[kUnkId];
  }

 private:
  Vocabulary vocab_;
  std::vector<double> lp_;
};

// Zipf-distributed token sentences over words "t0".."t{types-1}".
inline std::vector<TokenSentence> ZipfCorpus(uint64_t seed, size_t tokens,
                                             size_t types,
                                             double exponent = 1.1,
                                             size_t max_len = 14) {
  std::vector<double> cdf(types);
  double total = 0;
  for (size_t r = 0; r < types; ++r) {
    total += 1.0 / std::pow(static_cast<double>(r + 1), exponent);
    cdf[r] = total;
  }
  SplitMix64 rng(seed);
  auto uniform01 = [&rng] {
    return static_cast<double>(rng.Next() >> 11) * 0x1.0p-53;
  };
  std::vector<TokenSentence> out;
  size_t produced = 0;
  WordId prev = 0;
  while (produced < tokens) {
    const size_t len = 1 + rng.Uniform(max_len);
    TokenSentence sentence;
    for (size_t i = 0; i < len && produced < tokens; ++i, ++produced) {
      // Half the time the next word depends on the previous one, so higher
      // orders have something to learn.
      size_t r;
      if (i > 0 && rng.Uniform(2) == 0) {
        r = (prev * 7 + 3) % std::min<size_t>(types, 40);
      } else {
        const double u = uniform01() * total;
        r = std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
        if (r >= types) r = types - 1;
      }
      prev = static_cast<WordId>(r);
      sentence.push_back("t" + std::to_string(r));
    }
    out.push_back(std::move(sentence));
  }
  return out;
}

// Vocabulary of every token in `corpus`, in first-seen order.
inline Vocabulary VocabularyOf(const std::vector<TokenSentence>& corpus) {
  Vocabulary vocab;
  for (const auto& s : corpus) {
    for (const auto& t : s) vocab.Add(t);
  }
  return vocab;
}

inline std::vector<std::vector<WordId>> Encode(
    const Vocabulary& vocab, const std::vector<TokenSentence>& corpus) {
  std::vector<std::vector<WordId>> out;
  for (const auto& s : corpus) out.push_back(vocab.EncodeOrUnk(s, nullptr));
  return out;
}

inline std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

inline void WriteFile(const std::filesystem::path& path,
                      const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("glflm_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace glflm::testing_util

#endif  // GLFLM_TESTS_TEST_UTIL_H_
