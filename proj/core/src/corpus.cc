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

#include "glflm/corpus.h"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>

#include "glflm/errors.h"
#include "string_key.h"
#include "glflm/unicode.h"

namespace glflm {
namespace {

// Reads one line, strips "\r", validates UTF-8 and advances the counters.
bool ReadLine(std::istream& in, std::string* line, uint64_t* line_no,
              uint64_t* offset) {
  if (!std::getline(in, *line)) return false;
  ++*line_no;
  const uint64_t start = *offset;
  *offset += line->size() + 1;
  uint64_t skipped = 0;
  if (start == 0 && line->starts_with("\xEF\xBB\xBF")) {
    line->erase(0, 3);
    skipped = 3;
  }
  if (!line->empty() && line->back() == '\r') line->pop_back();
  if (auto bad = FindInvalidUtf8(*line)) throw DecodingError(start + skipped + *bad);
  return true;
}

}  // namespace

AnnotatedToken ParseTsvLine(std::string_view line, uint64_t line_no) {
  std::string_view fields[3];
  size_t n = 0;
  size_t pos = 0;
  while (true) {
    const size_t tab = line.find('\t', pos);
    if (n == 3) throw MalformedLine("expected 3 tab-separated fields", line_no);
    fields[n++] = line.substr(pos, tab == std::string_view::npos
                                       ? std::string_view::npos
                                       : tab - pos);
    if (tab == std::string_view::npos) break;
    pos = tab + 1;
  }
  if (n != 3) throw MalformedLine("expected 3 tab-separated fields", line_no);
  if (fields[0].empty() || fields[1].empty()) {
    throw MalformedLine("empty surface or lemma field", line_no);
  }
  AnnotatedToken token;
  token.surface = std::string(fields[0]);
  token.lemma = std::string(fields[1]);
  try {
    token.morph = ParseMorphCode(fields[2]);
  } catch (const MalformedMorphCode& e) {
    throw MalformedMorphCode(e.what(), line_no);
  }
  return token;
}

bool AnnotatedCorpusReader::Next(AnnotatedSentence* sentence) {
  sentence->clear();
  std::string line;
  while (ReadLine(in_, &line, &line_no_, &offset_)) {
    if (line.empty()) {
      if (!sentence->empty()) return true;
      continue;
    }
    if (line.front() == '#' && line.find('\t') == std::string::npos) continue;
    sentence->push_back(ParseTsvLine(line, line_no_));
  }
  return !sentence->empty();
}

TokenSentence SplitTokens(std::string_view line) {
  TokenSentence tokens;
  size_t pos = 0;
  while (pos < line.size()) {
    const size_t space = line.find(' ', pos);
    const size_t end = space == std::string_view::npos ? line.size() : space;
    if (end > pos) tokens.emplace_back(line.substr(pos, end - pos));
    pos = end + 1;
  }
  return tokens;
}

bool PlainCorpusReader::Next(TokenSentence* sentence) {
  std::string line;
  while (ReadLine(in_, &line, &line_no_, &offset_)) {
    *sentence = SplitTokens(line);
    if (!sentence->empty()) return true;
  }
  sentence->clear();
  return false;
}

void WriteAnnotatedSentence(std::ostream& out,
                            const AnnotatedSentence& sentence) {
  for (const AnnotatedToken& token : sentence) {
    out << token.surface << '\t' << token.lemma << '\t' << token.morph.Render()
        << '\n';
  }
  out << '\n';
}

void WritePlainSentence(std::ostream& out, const TokenSentence& sentence) {
  for (size_t i = 0; i < sentence.size(); ++i) {
    if (i > 0) out << ' ';
    out << sentence[i];
  }
  out << '\n';
}

void FrequencyDictionary::Add(std::string_view token, uint64_t count) {
  counts_[AsKey(token)] += count;
  total_ += count;
}

void FrequencyDictionary::Merge(const FrequencyDictionary& other) {
  for (const auto& [token, count] : other.counts_) Add(token, count);
}

uint64_t FrequencyDictionary::Count(std::string_view token) const {
  auto it = counts_.find(AsKey(token));
  return it == counts_.end() ? 0 : it->second;
}

std::vector<std::pair<std::string, uint64_t>> FrequencyDictionary::Sorted()
    const {
  std::vector<std::pair<std::string, uint64_t>> entries(counts_.begin(),
                                                        counts_.end());
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return entries;
}

void FrequencyDictionary::Write(std::ostream& out) const {
  for (const auto& [token, count] : Sorted()) {
    out << token << '\t' << count << '\n';
  }
}

FrequencyDictionary FrequencyDictionary::Read(std::istream& in) {
  FrequencyDictionary dict;
  std::string line;
  uint64_t line_no = 0;
  uint64_t offset = 0;
  while (ReadLine(in, &line, &line_no, &offset)) {
    if (line.empty()) continue;
    const size_t tab = line.rfind('\t');
    uint64_t count = 0;
    if (tab == std::string::npos || tab == 0) {
      throw MalformedLine("expected token<TAB>count", line_no);
    }
    const char* first = line.data() + tab + 1;
    const char* last = line.data() + line.size();
    auto [ptr, ec] = std::from_chars(first, last, count);
    if (ec != std::errc() || ptr != last || first == last) {
      throw MalformedLine("bad count", line_no);
    }
    dict.Add(std::string_view(line).substr(0, tab), count);
  }
  return dict;
}

void FrequencyDictionaries::Add(const AnnotatedSentence& sentence) {
  for (const AnnotatedToken& token : sentence) {
    surface.Add(token.surface);
    lemma.Add(token.lemma);
  }
}

}  // namespace glflm
