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

#ifndef GLFLM_CORPUS_H_
#define GLFLM_CORPUS_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "glflm/morph_code.h"

namespace glflm {

struct AnnotatedToken {
  std::string surface;
  std::string lemma;
  MorphCode morph;

  friend bool operator==(const AnnotatedToken&,
                         const AnnotatedToken&) = default;
};

using AnnotatedSentence = std::vector<AnnotatedToken>;
// A processed sentence: plain tokens, no boundary markers.
using TokenSentence = std::vector<std::string>;

enum class CorpusFormat { kAnnotatedTsv, kPlainTokens };

// Parses `word<TAB>lemma<TAB>morphcode`. `line_no` is only used for error
// reporting.
AnnotatedToken ParseTsvLine(std::string_view line, uint64_t line_no = 0);

// Lazily reads blank-line separated TSV sentences. Lines that start with '#'
// and contain no tab are comments.
class AnnotatedCorpusReader {
 public:
  explicit AnnotatedCorpusReader(std::istream& in) : in_(in) {}

  // Returns false at end of input. Throws MalformedLine, MalformedMorphCode
  // or DecodingError.
  bool Next(AnnotatedSentence* sentence);

  uint64_t line_number() const { return line_no_; }

 private:
  std::istream& in_;
  uint64_t line_no_ = 0;
  uint64_t offset_ = 0;
};

// Reads one space-separated sentence per line; blank lines are skipped.
class PlainCorpusReader {
 public:
  explicit PlainCorpusReader(std::istream& in) : in_(in) {}

  bool Next(TokenSentence* sentence);

  uint64_t line_number() const { return line_no_; }

 private:
  std::istream& in_;
  uint64_t line_no_ = 0;
  uint64_t offset_ = 0;
};

void WriteAnnotatedSentence(std::ostream& out,
                            const AnnotatedSentence& sentence);
void WritePlainSentence(std::ostream& out, const TokenSentence& sentence);

// Splits one plain-format line into tokens.
TokenSentence SplitTokens(std::string_view line);

// Exact token -> occurrence count table.
class FrequencyDictionary {
 public:
  void Add(std::string_view token, uint64_t count = 1);
  void Merge(const FrequencyDictionary& other);

  uint64_t Count(std::string_view token) const;
  uint64_t total() const { return total_; }
  size_t size() const { return counts_.size(); }

  // Descending count, ties broken by byte-wise lexicographic order.
  std::vector<std::pair<std::string, uint64_t>> Sorted() const;

  // `token<TAB>count` lines in Sorted() order.
  void Write(std::ostream& out) const;
  static FrequencyDictionary Read(std::istream& in);

 private:
  absl::flat_hash_map<std::string, uint64_t> counts_;
  uint64_t total_ = 0;
};

struct FrequencyDictionaries {
  FrequencyDictionary surface;
  FrequencyDictionary lemma;

  void Add(const AnnotatedSentence& sentence);
};

}  // namespace glflm

#endif  // GLFLM_CORPUS_H_
