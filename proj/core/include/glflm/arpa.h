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

#ifndef GLFLM_ARPA_H_
#define GLFLM_ARPA_H_

#include <iosfwd>
#include <string>

#include "glflm/kn_model.h"

namespace glflm {

// Writes the standard ARPA layout: a `\data\` block of `ngram k=count`
// lines, one `\k-grams:` section per order with
// `logprob<TAB>w1 w2 ...[<TAB>backoff]` lines (backoff on every order below
// the top), and a closing `\end\`. Values use fixed 6-decimal notation;
// log(0) is written as -99. Lines end in '\n'; sections are separated by a
// blank line. Grams within a section follow id order.
void WriteArpa(const NGramModel& model, std::ostream& out);
std::string ArpaString(const NGramModel& model);

// Accepts any whitespace between fields. The vocabulary is rebuilt from the
// unigram section (reserved tokens keep ids 0-2, the rest follow file
// order). -99 reads back as log(0). Throws MalformedArpa.
NGramModel ReadArpa(std::istream& in);

// Binary mirror of the ARPA contents for fast loading (doubles stored
// exactly):
//
//   char[8] "GLFMODEL", u32 version (1), u32 order, u64 vocab size,
//   vocab entries as (u32 length, bytes), then for k = 1..order:
//   u64 count, count records of (u32[k] ids, f64 logprob, f64 backoff).
void WriteBinaryModel(const NGramModel& model, std::ostream& out);
NGramModel ReadBinaryModel(std::istream& in);

}  // namespace glflm

#endif  // GLFLM_ARPA_H_
