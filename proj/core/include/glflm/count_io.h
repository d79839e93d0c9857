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

#ifndef GLFLM_COUNT_IO_H_
#define GLFLM_COUNT_IO_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>

#include "glflm/ngram_counts.h"

namespace glflm {

// Binary count file, all integers little-endian:
//
//   char[8]  magic "GLFCOUNT"
//   u32      version (1)
//   u32      order N
//   u64      vocabulary fingerprint (Vocabulary::Fingerprint)
//   u64      vocabulary size
//   for k = 1..N:
//     u64    record count R_k
//     R_k records, sorted lexicographically by id sequence:
//       u32[k] gram ids
//       u64    count
//
// Successor/predecessor counts are not stored; readers recompute them.
inline constexpr char kCountFileMagic[8] = {'G', 'L', 'F', 'C',
                                            'O', 'U', 'N', 'T'};
inline constexpr uint32_t kCountFileVersion = 1;

struct CountFileHeader {
  uint32_t version = kCountFileVersion;
  uint32_t order = 0;
  uint64_t vocab_fingerprint = 0;
  uint64_t vocab_size = 0;
};

void WriteCountFile(const NGramTable& table, std::ostream& out);
// Throws MalformedCountFile.
NGramTable ReadCountFile(std::istream& in);
CountFileHeader ReadCountFileHeader(std::istream& in);

// Streaming k-way merge of sorted count files into `output` without building
// a trie; memory is bounded by one record per input. All inputs must agree on
// order and vocabulary (OrderMismatch / VocabMismatch otherwise).
void MergeCountFiles(std::span<const std::filesystem::path> inputs,
                     const std::filesystem::path& output);

}  // namespace glflm

#endif  // GLFLM_COUNT_IO_H_
