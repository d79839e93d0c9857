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

#ifndef GLFLM_UNICODE_H_
#define GLFLM_UNICODE_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace glflm {

// Offset of the first byte that does not start a well-formed UTF-8 sequence
// (overlongs, surrogates and code points above U+10FFFF are rejected).
std::optional<size_t> FindInvalidUtf8(std::string_view text);

// Locale-independent lowercasing by Unicode simple case folding (the C and S
// entries of CaseFolding.txt) for the Latin, Greek, Cyrillic and Armenian
// blocks. Other code points pass through unchanged. Input must be valid UTF-8.
std::string FoldCase(std::string_view text);

char32_t FoldCodePoint(char32_t cp);

}  // namespace glflm

#endif  // GLFLM_UNICODE_H_
