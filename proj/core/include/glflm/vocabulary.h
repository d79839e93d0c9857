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

#ifndef GLFLM_VOCABULARY_H_
#define GLFLM_VOCABULARY_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/container/flat_hash_map.h"

namespace glflm {

using WordId = uint32_t;

inline constexpr WordId kUnkId = 0;
inline constexpr WordId kBosId = 1;
inline constexpr WordId kEosId = 2;
inline constexpr std::string_view kUnkToken = "<unk>";
inline constexpr std::string_view kBosToken = "<s>";
inline constexpr std::string_view kEosToken = "</s>";

// Bijection between token text and dense ids. Ids 0, 1 and 2 are always
// <unk>, <s> and </s>; every other token gets the next free id in insertion
// order.
class Vocabulary {
 public:
  Vocabulary();

  // Returns the id of `token`, inserting it if absent.
  WordId Add(std::string_view token);

  std::optional<WordId> Find(std::string_view token) const;
  // Unknown tokens map to kUnkId.
  WordId IdOrUnk(std::string_view token) const;
  const std::string& Token(WordId id) const { return tokens_.at(id); }

  size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  // FNV-1a over the newline-joined token list; identifies a vocabulary in
  // binary count files.
  uint64_t Fingerprint() const;

  // Encodes a sentence; throws UnknownToken for absent tokens.
  std::vector<WordId> Encode(std::span<const std::string> sentence) const;
  // Encodes a sentence, mapping absent tokens to <unk>. `oov` (if given) is
  // incremented once per mapped token.
  std::vector<WordId> EncodeOrUnk(std::span<const std::string> sentence,
                                  uint64_t* oov = nullptr) const;

  // One token per line in id order, reserved tokens first.
  void Write(std::ostream& out) const;
  static Vocabulary Read(std::istream& in);

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.tokens_ == b.tokens_;
  }

 private:
  std::vector<std::string> tokens_;
  absl::flat_hash_map<std::string, WordId> ids_;
};

inline bool IsReservedToken(std::string_view token) {
  return token == kUnkToken || token == kBosToken || token == kEosToken;
}

}  // namespace glflm

#endif  // GLFLM_VOCABULARY_H_
