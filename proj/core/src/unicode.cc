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

#include "glflm/unicode.h"

#include <cstdint>

namespace glflm {
namespace {

// Decodes one sequence at `pos`; returns its length or 0 if malformed.
size_t DecodeOne(std::string_view text, size_t pos, char32_t* cp) {
  const auto byte = [&](size_t i) {
    return static_cast<uint8_t>(text[pos + i]);
  };
  const uint8_t lead = byte(0);
  if (lead < 0x80) {
    *cp = lead;
    return 1;
  }
  size_t len;
  char32_t value;
  char32_t min;
  if ((lead & 0xE0) == 0xC0) {
    len = 2, value = lead & 0x1F, min = 0x80;
  } else if ((lead & 0xF0) == 0xE0) {
    len = 3, value = lead & 0x0F, min = 0x800;
  } else if ((lead & 0xF8) == 0xF0) {
    len = 4, value = lead & 0x07, min = 0x10000;
  } else {
    return 0;
  }
  if (pos + len > text.size()) return 0;
  for (size_t i = 1; i < len; ++i) {
    if ((byte(i) & 0xC0) != 0x80) return 0;
    value = (value << 6) | (byte(i) & 0x3F);
  }
  if (value < min || value > 0x10FFFF || (value >= 0xD800 && value <= 0xDFFF)) {
    return 0;
  }
  *cp = value;
  return len;
}

void AppendUtf8(char32_t cp, std::string* out) {
  if (cp < 0x80) {
    out->push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out->push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out->push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out->push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out->push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out->push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out->push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool InRange(char32_t cp, char32_t lo, char32_t hi) {
  return cp >= lo && cp <= hi;
}

}  // namespace

std::optional<size_t> FindInvalidUtf8(std::string_view text) {
  size_t pos = 0;
  char32_t cp;
  while (pos < text.size()) {
    const size_t len = DecodeOne(text, pos, &cp);
    if (len == 0) return pos;
    pos += len;
  }
  return std::nullopt;
}

char32_t FoldCodePoint(char32_t cp) {
  if (cp < 0x80) return InRange(cp, 'A', 'Z') ? cp + 32 : cp;

  // Latin-1 Supplement.
  if (cp == 0x00B5) return 0x03BC;
  if (InRange(cp, 0x00C0, 0x00DE) && cp != 0x00D7) return cp + 32;

  // Latin Extended-A. U+0130 has no simple folding.
  if (InRange(cp, 0x0100, 0x012F) || InRange(cp, 0x0132, 0x0137) ||
      InRange(cp, 0x014A, 0x0177)) {
    return (cp % 2 == 0) ? cp + 1 : cp;
  }
  if (InRange(cp, 0x0139, 0x0148) || InRange(cp, 0x0179, 0x017E)) {
    return (cp % 2 == 1) ? cp + 1 : cp;
  }
  if (cp == 0x0178) return 0x00FF;
  if (cp == 0x017F) return 's';

  // Latin Extended-B, regular pairs and the digraph triples.
  if (cp == 0x01C4 || cp == 0x01C5) return 0x01C6;
  if (cp == 0x01C7 || cp == 0x01C8) return 0x01C9;
  if (cp == 0x01CA || cp == 0x01CB) return 0x01CC;
  if (cp == 0x01F1 || cp == 0x01F2) return 0x01F3;
  if (InRange(cp, 0x01CD, 0x01DC)) return (cp % 2 == 1) ? cp + 1 : cp;
  if (InRange(cp, 0x01DE, 0x01EF) || InRange(cp, 0x01F8, 0x021F) ||
      InRange(cp, 0x0222, 0x0233)) {
    return (cp % 2 == 0) ? cp + 1 : cp;
  }

  // Greek.
  if (cp == 0x0386) return 0x03AC;
  if (InRange(cp, 0x0388, 0x038A)) return cp + 37;
  if (cp == 0x038C) return 0x03CC;
  if (InRange(cp, 0x038E, 0x038F)) return cp + 63;
  if (InRange(cp, 0x0391, 0x03AB) && cp != 0x03A2) return cp + 32;
  if (cp == 0x03C2) return 0x03C3;

  // Cyrillic.
  if (InRange(cp, 0x0400, 0x040F)) return cp + 80;
  if (InRange(cp, 0x0410, 0x042F)) return cp + 32;
  if (InRange(cp, 0x0460, 0x0481) || InRange(cp, 0x048A, 0x04BF) ||
      InRange(cp, 0x04D0, 0x052F)) {
    return (cp % 2 == 0) ? cp + 1 : cp;
  }
  if (cp == 0x04C0) return 0x04CF;
  if (InRange(cp, 0x04C1, 0x04CE)) return (cp % 2 == 1) ? cp + 1 : cp;

  // Armenian.
  if (InRange(cp, 0x0531, 0x0556)) return cp + 48;

  // Latin Extended Additional.
  if (InRange(cp, 0x1E00, 0x1E95) || InRange(cp, 0x1EA0, 0x1EFF)) {
    return (cp % 2 == 0) ? cp + 1 : cp;
  }
  if (cp == 0x1E9E) return 0x00DF;

  // Fullwidth Latin.
  if (InRange(cp, 0xFF21, 0xFF3A)) return cp + 32;
  return cp;
}

std::string FoldCase(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  size_t pos = 0;
  char32_t cp;
  while (pos < text.size()) {
    const size_t len = DecodeOne(text, pos, &cp);
    if (len == 0) {
      // Pass malformed bytes through; validation happens at read time.
      out.push_back(text[pos++]);
      continue;
    }
    AppendUtf8(FoldCodePoint(cp), &out);
    pos += len;
  }
  return out;
}

}  // namespace glflm
