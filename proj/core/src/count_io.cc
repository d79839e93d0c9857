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

#include "glflm/count_io.h"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <memory>
#include <ostream>
#include <queue>
#include <string>
#include <vector>

#include "glflm/errors.h"

namespace glflm {
namespace {

static_assert(std::endian::native == std::endian::little,
              "count files are written in host order on little-endian hosts");

template <typename T>
void Put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(value));
}

template <typename T>
T Get(std::istream& in) {
  T value;
  if (!in.read(reinterpret_cast<char*>(&value), sizeof(value))) {
    throw MalformedCountFile("truncated count file");
  }
  return value;
}

void WriteHeader(std::ostream& out, const CountFileHeader& header) {
  out.write(kCountFileMagic, sizeof(kCountFileMagic));
  Put(out, header.version);
  Put(out, header.order);
  Put(out, header.vocab_fingerprint);
  Put(out, header.vocab_size);
}

struct Record {
  std::vector<WordId> gram;
  uint64_t count = 0;
};

void ReadRecord(std::istream& in, int k, Record* record) {
  record->gram.resize(k);
  for (int i = 0; i < k; ++i) record->gram[i] = Get<uint32_t>(in);
  record->count = Get<uint64_t>(in);
}

void WriteRecord(std::ostream& out, const Record& record) {
  for (WordId id : record.gram) Put<uint32_t>(out, id);
  Put(out, record.count);
}

}  // namespace

CountFileHeader ReadCountFileHeader(std::istream& in) {
  char magic[sizeof(kCountFileMagic)];
  if (!in.read(magic, sizeof(magic)) ||
      std::memcmp(magic, kCountFileMagic, sizeof(magic)) != 0) {
    throw MalformedCountFile("bad count file magic");
  }
  CountFileHeader header;
  header.version = Get<uint32_t>(in);
  if (header.version != kCountFileVersion) {
    throw MalformedCountFile("unsupported count file version " +
                             std::to_string(header.version));
  }
  header.order = Get<uint32_t>(in);
  if (header.order < 1 || header.order > static_cast<uint32_t>(kMaxOrder)) {
    throw MalformedCountFile("bad order " + std::to_string(header.order));
  }
  header.vocab_fingerprint = Get<uint64_t>(in);
  header.vocab_size = Get<uint64_t>(in);
  return header;
}

void WriteCountFile(const NGramTable& table, std::ostream& out) {
  WriteHeader(out, {kCountFileVersion, static_cast<uint32_t>(table.order()),
                    table.vocab_fingerprint(), table.vocab_size()});
  for (int k = 1; k <= table.order(); ++k) {
    const auto grams = table.SortedGrams(k);
    Put<uint64_t>(out, grams.size());
    for (const auto& [gram, count] : grams) WriteRecord(out, {gram, count});
  }
  if (!out) throw IoError("failed to write count file");
}

NGramTable ReadCountFile(std::istream& in) {
  const CountFileHeader header = ReadCountFileHeader(in);
  NGramTable table(static_cast<int>(header.order), header.vocab_fingerprint,
                   header.vocab_size);
  Record record;
  Record previous;
  for (int k = 1; k <= static_cast<int>(header.order); ++k) {
    const uint64_t n = Get<uint64_t>(in);
    previous.gram.clear();
    for (uint64_t i = 0; i < n; ++i) {
      ReadRecord(in, k, &record);
      if (!previous.gram.empty() && !(previous.gram < record.gram)) {
        throw MalformedCountFile("records out of order at order " +
                                 std::to_string(k));
      }
      for (WordId id : record.gram) {
        if (id >= header.vocab_size) {
          throw MalformedCountFile("id outside vocabulary");
        }
      }
      table.AddGram(record.gram, record.count);
      std::swap(previous, record);
    }
  }
  table.Finalize();
  return table;
}

void MergeCountFiles(std::span<const std::filesystem::path> inputs,
                     const std::filesystem::path& output) {
  if (inputs.empty()) throw IoError("no count files to merge");
  std::vector<std::unique_ptr<std::ifstream>> streams;
  std::vector<CountFileHeader> headers;
  for (const auto& path : inputs) {
    auto in = std::make_unique<std::ifstream>(path, std::ios::binary);
    if (!*in) throw IoError("cannot read " + path.string());
    headers.push_back(ReadCountFileHeader(*in));
    if (headers.back().order != headers.front().order) {
      throw OrderMismatch("count files disagree on order");
    }
    if (headers.back().vocab_fingerprint != headers.front().vocab_fingerprint ||
        headers.back().vocab_size != headers.front().vocab_size) {
      throw VocabMismatch("count files disagree on vocabulary");
    }
    streams.push_back(std::move(in));
  }

  std::ofstream out(output, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + output.string());
  WriteHeader(out, headers.front());

  const int order = static_cast<int>(headers.front().order);
  const size_t m = streams.size();
  std::vector<uint64_t> remaining(m);
  std::vector<Record> heads(m);
  // Min-heap of input indices keyed by their current record.
  const auto greater = [&heads](size_t a, size_t b) {
    if (heads[a].gram != heads[b].gram) return heads[b].gram < heads[a].gram;
    return b < a;
  };
  for (int k = 1; k <= order; ++k) {
    std::priority_queue<size_t, std::vector<size_t>, decltype(greater)> queue(
        greater);
    for (size_t i = 0; i < m; ++i) {
      remaining[i] = Get<uint64_t>(*streams[i]);
      if (remaining[i] > 0) {
        ReadRecord(*streams[i], k, &heads[i]);
        --remaining[i];
        queue.push(i);
      }
    }
    const std::streampos count_pos = out.tellp();
    Put<uint64_t>(out, 0);
    uint64_t written = 0;
    Record current;
    bool have_current = false;
    while (!queue.empty()) {
      const size_t i = queue.top();
      queue.pop();
      if (have_current && current.gram == heads[i].gram) {
        current.count += heads[i].count;
      } else {
        if (have_current) {
          WriteRecord(out, current);
          ++written;
        }
        current = heads[i];
        have_current = true;
      }
      if (remaining[i] > 0) {
        ReadRecord(*streams[i], k, &heads[i]);
        --remaining[i];
        queue.push(i);
      }
    }
    if (have_current) {
      WriteRecord(out, current);
      ++written;
    }
    const std::streampos end_pos = out.tellp();
    out.seekp(count_pos);
    Put<uint64_t>(out, written);
    out.seekp(end_pos);
  }
  if (!out.flush()) throw IoError("failed to write " + output.string());
}

}  // namespace glflm
