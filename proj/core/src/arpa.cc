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

#include "glflm/arpa.h"

#include <charconv>
#include <cmath>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <vector>

#include "fmt/format.h"
#include "glflm/errors.h"

namespace glflm {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kArpaLogZero = -99.0;

std::string FormatLog(double value) {
  if (std::isinf(value) && value < 0) return "-99";
  std::string text = fmt::format("{:.6f}", value);
  if (text == "-0.000000") text = "0.000000";
  return text;
}

std::vector<std::string_view> SplitWhitespace(std::string_view line) {
  std::vector<std::string_view> fields;
  size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
    const size_t start = pos;
    while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t') ++pos;
    if (pos > start) fields.push_back(line.substr(start, pos - start));
  }
  return fields;
}

double ParseLog(std::string_view text, uint64_t line_no) {
  double value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw MalformedArpa("bad number '" + std::string(text) + "'", line_no);
  }
  if (value == kArpaLogZero) return kNegInf;
  return value;
}

template <typename T>
void Put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(value));
}

template <typename T>
T Get(std::istream& in) {
  T value;
  if (!in.read(reinterpret_cast<char*>(&value), sizeof(value))) {
    throw MalformedArpa("truncated binary model", 0);
  }
  return value;
}

constexpr char kBinaryMagic[8] = {'G', 'L', 'F', 'M', 'O', 'D', 'E', 'L'};
constexpr uint32_t kBinaryVersion = 1;

}  // namespace

void WriteArpa(const NGramModel& model, std::ostream& out) {
  const Vocabulary& vocab = model.vocab();
  out << "\\data\\\n";
  for (int k = 1; k <= model.order(); ++k) {
    out << "ngram " << k << '=' << model.NumGrams(k) << '\n';
  }
  for (int k = 1; k <= model.order(); ++k) {
    out << "\n\\" << k << "-grams:\n";
    for (const NGramModel::Entry& entry : model.SortedEntries(k)) {
      out << FormatLog(entry.log_prob) << '\t';
      for (size_t i = 0; i < entry.gram.size(); ++i) {
        if (i > 0) out << ' ';
        out << vocab.Token(entry.gram[i]);
      }
      if (k < model.order()) out << '\t' << FormatLog(entry.backoff);
      out << '\n';
    }
  }
  out << "\n\\end\\\n";
  if (!out) throw IoError("failed to write ARPA model");
}

std::string ArpaString(const NGramModel& model) {
  std::ostringstream out;
  WriteArpa(model, out);
  return out.str();
}

NGramModel ReadArpa(std::istream& in) {
  std::string line;
  uint64_t line_no = 0;
  const auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };

  bool found_data = false;
  while (next_line()) {
    if (line == "\\data\\") {
      found_data = true;
      break;
    }
  }
  if (!found_data) throw MalformedArpa("missing \\data\\ header", line_no);

  std::vector<uint64_t> declared;
  while (next_line()) {
    if (line.empty()) {
      if (declared.empty()) continue;
      break;
    }
    if (!line.starts_with("ngram ")) {
      throw MalformedArpa("expected 'ngram k=count'", line_no);
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw MalformedArpa("expected 'ngram k=count'", line_no);
    }
    int k = 0;
    uint64_t n = 0;
    const std::string_view k_text = std::string_view(line).substr(6, eq - 6);
    const std::string_view n_text = std::string_view(line).substr(eq + 1);
    auto r1 = std::from_chars(k_text.data(), k_text.data() + k_text.size(), k);
    auto r2 = std::from_chars(n_text.data(), n_text.data() + n_text.size(), n);
    if (r1.ec != std::errc() || r2.ec != std::errc() ||
        r1.ptr != k_text.data() + k_text.size() ||
        r2.ptr != n_text.data() + n_text.size()) {
      throw MalformedArpa("bad ngram count line", line_no);
    }
    if (k != static_cast<int>(declared.size()) + 1) {
      throw MalformedArpa("ngram orders must be listed as 1, 2, ...", line_no);
    }
    declared.push_back(n);
  }
  if (declared.empty() || declared.size() > static_cast<size_t>(kMaxOrder)) {
    throw MalformedArpa("bad number of orders", line_no);
  }
  const int order = static_cast<int>(declared.size());

  struct Raw {
    std::vector<std::string> words;
    double log_prob;
    std::optional<double> backoff;
  };
  std::vector<std::vector<Raw>> sections(order);
  std::vector<uint64_t> section_lines(order);
  int current = 0;
  bool ended = false;
  while (next_line()) {
    if (line.empty()) continue;
    if (line == "\\end\\") {
      ended = true;
      break;
    }
    if (line.front() == '\\') {
      int k = 0;
      if (line.size() < 9 || !line.ends_with("-grams:") ||
          std::from_chars(line.data() + 1, line.data() + line.size() - 7, k)
                  .ec != std::errc()) {
        throw MalformedArpa("bad section header '" + line + "'", line_no);
      }
      if (k != current + 1 || k > order) {
        throw MalformedArpa("unexpected section \\" + std::to_string(k) +
                                "-grams:",
                            line_no);
      }
      current = k;
      section_lines[k - 1] = line_no;
      continue;
    }
    if (current == 0) throw MalformedArpa("gram outside a section", line_no);
    const auto fields = SplitWhitespace(line);
    const size_t k = static_cast<size_t>(current);
    if (fields.size() != k + 1 && fields.size() != k + 2) {
      throw MalformedArpa("expected " + std::to_string(k) + " words", line_no);
    }
    Raw raw;
    raw.log_prob = ParseLog(fields[0], line_no);
    for (size_t i = 1; i <= k; ++i) raw.words.emplace_back(fields[i]);
    if (fields.size() == k + 2) raw.backoff = ParseLog(fields[k + 1], line_no);
    sections[current - 1].push_back(std::move(raw));
  }
  if (!ended) throw MalformedArpa("missing \\end\\", line_no);
  for (int k = 1; k <= order; ++k) {
    if (sections[k - 1].size() != declared[k - 1]) {
      throw MalformedArpa(
          fmt::format("header declares {} {}-grams but section has {}",
                      declared[k - 1], k, sections[k - 1].size()),
          section_lines[k - 1]);
    }
  }

  Vocabulary vocab;
  for (const Raw& raw : sections[0]) vocab.Add(raw.words[0]);
  NGramModel model(std::move(vocab), order);
  std::vector<WordId> gram;
  for (int k = 1; k <= order; ++k) {
    for (const Raw& raw : sections[k - 1]) {
      gram.clear();
      for (const std::string& word : raw.words) {
        auto id = model.vocab().Find(word);
        if (!id) {
          throw MalformedArpa("word '" + word + "' has no unigram entry",
                              section_lines[k - 1]);
        }
        gram.push_back(*id);
      }
      model.SetLogProb(gram, raw.log_prob);
      if (raw.backoff && k < order) model.SetBackoff(gram, *raw.backoff);
    }
  }
  return model;
}

void WriteBinaryModel(const NGramModel& model, std::ostream& out) {
  out.write(kBinaryMagic, sizeof(kBinaryMagic));
  Put<uint32_t>(out, kBinaryVersion);
  Put<uint32_t>(out, static_cast<uint32_t>(model.order()));
  Put<uint64_t>(out, model.vocab().size());
  for (const std::string& token : model.vocab().tokens()) {
    Put<uint32_t>(out, static_cast<uint32_t>(token.size()));
    out.write(token.data(), static_cast<std::streamsize>(token.size()));
  }
  for (int k = 1; k <= model.order(); ++k) {
    const auto entries = model.SortedEntries(k);
    Put<uint64_t>(out, entries.size());
    for (const auto& entry : entries) {
      for (WordId id : entry.gram) Put<uint32_t>(out, id);
      Put<double>(out, entry.log_prob);
      Put<double>(out, entry.backoff);
    }
  }
  if (!out) throw IoError("failed to write binary model");
}

NGramModel ReadBinaryModel(std::istream& in) {
  char magic[sizeof(kBinaryMagic)];
  if (!in.read(magic, sizeof(magic)) ||
      std::memcmp(magic, kBinaryMagic, sizeof(magic)) != 0) {
    throw MalformedArpa("bad binary model magic", 0);
  }
  if (Get<uint32_t>(in) != kBinaryVersion) {
    throw MalformedArpa("unsupported binary model version", 0);
  }
  const uint32_t order = Get<uint32_t>(in);
  if (order < 1 || order > static_cast<uint32_t>(kMaxOrder)) {
    throw MalformedArpa("bad binary model order", 0);
  }
  const uint64_t vocab_size = Get<uint64_t>(in);
  Vocabulary vocab;
  std::string token;
  for (uint64_t i = 0; i < vocab_size; ++i) {
    token.resize(Get<uint32_t>(in));
    if (!in.read(token.data(), static_cast<std::streamsize>(token.size()))) {
      throw MalformedArpa("truncated binary model", 0);
    }
    if (vocab.Add(token) != i) {
      throw MalformedArpa("binary model vocabulary out of order", 0);
    }
  }
  NGramModel model(std::move(vocab), static_cast<int>(order));
  std::vector<WordId> gram;
  for (uint32_t k = 1; k <= order; ++k) {
    const uint64_t n = Get<uint64_t>(in);
    for (uint64_t i = 0; i < n; ++i) {
      gram.resize(k);
      for (auto& id : gram) {
        id = Get<uint32_t>(in);
        if (id >= vocab_size) throw MalformedArpa("id outside vocabulary", 0);
      }
      model.SetLogProb(gram, Get<double>(in));
      const double backoff = Get<double>(in);
      if (k < order) model.SetBackoff(gram, backoff);
    }
  }
  return model;
}

}  // namespace glflm
