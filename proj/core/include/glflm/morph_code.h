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

#ifndef GLFLM_MORPH_CODE_H_
#define GLFLM_MORPH_CODE_H_

#include <string>
#include <string_view>
#include <vector>

namespace glflm {

// A KR morphological code such as `NOUN<POSS><CAS<INS>>`: a category head
// followed by top-level angle-bracket affix groups. Each affix keeps its
// nested groups verbatim, so Render() reproduces the parsed string.
struct MorphCode {
  std::string head;
  std::vector<std::string> affixes;

  std::string Render() const;

  friend bool operator==(const MorphCode&, const MorphCode&) = default;
};

// Throws MalformedMorphCode for empty codes, empty heads, unbalanced
// brackets, empty groups or text between groups.
MorphCode ParseMorphCode(std::string_view code);

// The outer tag name of an affix group: `CAS` for `<CAS<INS>>`.
std::string_view AffixName(std::string_view affix);

// True for text shaped like a single affix group (`<...>`).
bool LooksLikeAffix(std::string_view token);

}  // namespace glflm

#endif  // GLFLM_MORPH_CODE_H_
