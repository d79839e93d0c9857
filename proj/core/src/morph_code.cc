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

#include "glflm/morph_code.h"

#include "glflm/errors.h"

namespace glflm {

std::string MorphCode::Render() const {
  std::string out = head;
  for (const std::string& affix : affixes) out += affix;
  return out;
}

MorphCode ParseMorphCode(std::string_view code) {
  if (code.empty()) throw MalformedMorphCode("empty morphological code");
  MorphCode result;
  const size_t first = code.find('<');
  result.head = std::string(code.substr(0, first));
  if (result.head.empty()) {
    throw MalformedMorphCode("morphological code without a head: '" +
                             std::string(code) + "'");
  }
  if (result.head.find('>') != std::string::npos) {
    throw MalformedMorphCode("stray '>' in head of '" + std::string(code) +
                             "'");
  }
  if (first == std::string_view::npos) return result;

  size_t pos = first;
  while (pos < code.size()) {
    if (code[pos] != '<') {
      throw MalformedMorphCode("text after affix group in '" +
                               std::string(code) + "'");
    }
    size_t depth = 0;
    size_t end = pos;
    for (; end < code.size(); ++end) {
      if (code[end] == '<') {
        ++depth;
      } else if (code[end] == '>') {
        if (--depth == 0) break;
      }
    }
    if (depth != 0) {
      throw MalformedMorphCode("unbalanced brackets in '" + std::string(code) +
                               "'");
    }
    if (end == pos + 1) {
      throw MalformedMorphCode("empty affix group in '" + std::string(code) +
                               "'");
    }
    result.affixes.emplace_back(code.substr(pos, end - pos + 1));
    pos = end + 1;
  }
  return result;
}

std::string_view AffixName(std::string_view affix) {
  if (affix.size() < 2 || affix.front() != '<') return affix;
  const size_t stop = affix.find_first_of("<>", 1);
  return affix.substr(1, stop == std::string_view::npos ? affix.size() - 1
                                                        : stop - 1);
}

bool LooksLikeAffix(std::string_view token) {
  return token.size() >= 3 && token.front() == '<' && token.back() == '>';
}

}  // namespace glflm
