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

#include "glflm/vocabulary.h"

#include <istream>
#include <ostream>

#include "glflm/errors.h"
#include "string_key.h"

namespace glflm {

Vocabulary::Vocabulary() {
  Add(kUnkToken);
  Add(kBosToken);
  Add(kEosToken);
}

WordId Vocabulary::Add(std::string_view token) {
  auto [it, inserted] =
      ids_.try_emplace(std::string(token), static_cast<WordId>(tokens_.size()));
  if (inserted) tokens_.emplace_back(token);
  return it->second;
}

std::optional<WordId> Vocabulary::Find(std::string_view token) const {
  auto it = ids_.find(AsKey(token));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

WordId Vocabulary::IdOrUnk(std::string_view token) const {
  auto it = ids_.find(AsKey(token));
  return it == ids_.end() ? kUnkId : it->second;
}

uint64_t Vocabulary::Fingerprint() const {
  uint64_t hash = 0xcbf29ce484222325ULL;
  for (const std::string& token : tokens_) {
    for (unsigned char c : token) {
      hash ^= c;
      hash *= 0x100000001b3ULL;
    }
    hash ^= '\n';
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::vector<WordId> Vocabulary::Encode(
    std::span<const std::string> sentence) const {
  std::vector<WordId> ids;
  ids.reserve(sentence.size());
  for (const std::string& token : sentence) {
    auto id = Find(token);
    if (!id) throw UnknownToken(token);
    ids.push_back(*id);
  }
  return ids;
}

std::vector<WordId> Vocabulary::EncodeOrUnk(
    std::span<const std::string> sentence, uint64_t* oov) const {
  std::vector<WordId> ids;
  ids.reserve(sentence.size());
  for (const std::string& token : sentence) {
    auto id = Find(token);
    if (!id && oov != nullptr) ++*oov;
    ids.push_back(id.value_or(kUnkId));
  }
  return ids;
}

void Vocabulary::Write(std::ostream& out) const {
  for (const std::string& token : tokens_) out << token << '\n';
}

Vocabulary Vocabulary::Read(std::istream& in) {
  Vocabulary vocab;
  std::string line;
  uint64_t line_no = 0;
  size_t entries = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (entries++ < 3) {
      // The reserved entries must come first and in their fixed order.
      if (line != vocab.tokens_[entries - 1]) {
        throw MalformedLine("vocabulary must start with <unk>, <s>, </s>",
                            line_no);
      }
      continue;
    }
    if (vocab.Find(line)) {
      throw MalformedLine("duplicate vocabulary entry '" + line + "'", line_no);
    }
    vocab.Add(line);
  }
  return vocab;
}

}  // namespace glflm
