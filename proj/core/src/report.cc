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

#include "glflm/report.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <tuple>

#include "fmt/format.h"
#include "glflm/errors.h"

namespace glflm {
namespace {

std::string Fixed(double value) {
  if (std::isnan(value)) return "nan";
  std::string text = fmt::format("{:.6f}", value);
  if (text == "-0.000000") text = "0.000000";
  return text;
}

std::string ThresholdText(const std::optional<uint64_t>& threshold) {
  return threshold ? std::to_string(*threshold) : "-";
}

using Table = std::vector<std::vector<std::string>>;

std::string Render(const Table& rows, size_t text_columns) {
  std::vector<size_t> widths;
  for (const auto& row : rows) {
    if (widths.size() < row.size()) widths.resize(row.size(), 0);
    for (size_t i = 0; i < row.size(); ++i) {
      widths[i] = std::max(widths[i], row[i].size());
    }
  }
  std::string out;
  for (const auto& row : rows) {
    std::string line;
    for (size_t i = 0; i < row.size(); ++i) {
      if (i > 0) line += "  ";
      // Text columns left, numbers right.
      const bool numeric = i >= text_columns;
      const size_t pad = widths[i] - row[i].size();
      if (numeric && &row != &rows.front()) {
        line.append(pad, ' ');
        line += row[i];
      } else {
        line += row[i];
        if (i + 1 < row.size()) line.append(pad, ' ');
      }
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line;
    out += '\n';
  }
  return out;
}

auto SortKey(const EvalReport& r, bool corpus_first) {
  return corpus_first
             ? std::make_tuple(r.corpus, r.model, r.threshold, r.cross)
             : std::make_tuple(r.model, r.corpus, r.threshold, r.cross);
}

std::string ListReport(std::span<const EvalReport> reports,
                       bool corpus_first) {
  std::vector<const EvalReport*> sorted;
  for (const auto& r : reports) sorted.push_back(&r);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [&](const EvalReport* a, const EvalReport* b) {
                     return SortKey(*a, corpus_first) <
                            SortKey(*b, corpus_first);
                   });
  Table rows;
  rows.push_back({corpus_first ? "corpus" : "model",
                  corpus_first ? "model" : "corpus", "threshold", "N", "oov",
                  "oov_rate", "H", "ppl", "ppl_excl_unk", "cross"});
  for (const EvalReport* r : sorted) {
    rows.push_back({corpus_first ? r->corpus : r->model,
                    corpus_first ? r->model : r->corpus,
                    ThresholdText(r->threshold), std::to_string(r->tokens),
                    std::to_string(r->oov), Fixed(r->oov_rate()),
                    Fixed(r->entropy), Fixed(r->perplexity),
                    Fixed(r->perplexity_excl_unk), r->cross ? "yes" : "no"});
  }
  return Render(rows, 2);
}

std::string CrossMatrix(std::span<const EvalReport> reports) {
  std::set<std::optional<uint64_t>> thresholds;
  for (const auto& r : reports) thresholds.insert(r.threshold);
  Table rows;
  if (thresholds.size() <= 1) {
    std::set<std::string> models;
    std::set<std::string> corpora;
    std::map<std::pair<std::string, std::string>, double> cells;
    for (const auto& r : reports) {
      models.insert(r.model);
      corpora.insert(r.corpus);
      cells.emplace(std::make_pair(r.model, r.corpus), r.perplexity);
    }
    std::vector<std::string> header = {"model"};
    header.insert(header.end(), corpora.begin(), corpora.end());
    rows.push_back(std::move(header));
    for (const auto& model : models) {
      std::vector<std::string> row = {model};
      for (const auto& corpus : corpora) {
        auto it = cells.find({model, corpus});
        row.push_back(it == cells.end() ? "-" : Fixed(it->second));
      }
      rows.push_back(std::move(row));
    }
    return Render(rows, 1);
  }
  std::set<std::pair<std::string, std::string>> pairs;
  std::map<std::tuple<std::string, std::string, std::optional<uint64_t>>,
           double>
      cells;
  for (const auto& r : reports) {
    pairs.insert({r.model, r.corpus});
    cells.emplace(std::make_tuple(r.model, r.corpus, r.threshold),
                  r.perplexity);
  }
  std::vector<std::string> header = {"model", "corpus"};
  for (const auto& t : thresholds) {
    header.push_back(t ? "t=" + std::to_string(*t) : "t=-");
  }
  rows.push_back(std::move(header));
  for (const auto& [model, corpus] : pairs) {
    std::vector<std::string> row = {model, corpus};
    for (const auto& t : thresholds) {
      auto it = cells.find({model, corpus, t});
      row.push_back(it == cells.end() ? "-" : Fixed(it->second));
    }
    rows.push_back(std::move(row));
  }
  return Render(rows, 2);
}

template <typename T>
bool ParseNumber(std::string_view text, T& value) {
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(),
                                   value);
  return ec == std::errc() && ptr == text.data() + text.size();
}

bool ParseDouble(std::string_view text, double& value) {
  if (text == "nan") {
    value = std::nan("");
    return true;
  }
  return ParseNumber(text, value);
}

}  // namespace

std::string_view ReportLayoutName(ReportLayout layout) {
  switch (layout) {
    case ReportLayout::kByModel:
      return "by-model";
    case ReportLayout::kByCorpus:
      return "by-corpus";
    case ReportLayout::kCrossMatrix:
      return "cross-matrix";
  }
  return "by-model";
}

ReportLayout ParseReportLayout(std::string_view name) {
  if (name == "by-model") return ReportLayout::kByModel;
  if (name == "by-corpus") return ReportLayout::kByCorpus;
  if (name == "cross-matrix") return ReportLayout::kCrossMatrix;
  throw InvalidConfig("unknown report layout: " + std::string(name));
}

std::string FormatTextReport(std::span<const EvalReport> reports,
                             ReportLayout layout) {
  switch (layout) {
    case ReportLayout::kByModel:
      return ListReport(reports, false);
    case ReportLayout::kByCorpus:
      return ListReport(reports, true);
    case ReportLayout::kCrossMatrix:
      return CrossMatrix(reports);
  }
  return {};
}

std::string FormatRecords(std::span<const EvalReport> reports) {
  std::string out;
  for (const auto& r : reports) {
    out += fmt::format("{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n", r.model,
                       r.corpus, r.tokens, r.oov, Fixed(r.entropy),
                       Fixed(r.perplexity), r.sentences, Fixed(r.oov_rate()),
                       Fixed(r.perplexity_excl_unk), r.cross ? 1 : 0,
                       ThresholdText(r.threshold));
  }
  return out;
}

std::vector<EvalReport> ParseRecords(std::istream& in) {
  std::vector<EvalReport> reports;
  std::string line;
  uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::string_view rest = line;
    while (true) {
      const size_t tab = rest.find('\t');
      fields.push_back(rest.substr(0, tab));
      if (tab == std::string_view::npos) break;
      rest.remove_prefix(tab + 1);
    }
    if (fields.size() < 6) {
      throw MalformedLine("report record needs at least 6 fields", line_no);
    }
    EvalReport r;
    r.model = fields[0];
    r.corpus = fields[1];
    bool ok = ParseNumber(fields[2], r.tokens) && ParseNumber(fields[3], r.oov) &&
              ParseDouble(fields[4], r.entropy) &&
              ParseDouble(fields[5], r.perplexity);
    if (ok && fields.size() > 6) ok = ParseNumber(fields[6], r.sentences);
    if (ok && fields.size() > 8) {
      ok = ParseDouble(fields[8], r.perplexity_excl_unk);
    }
    if (ok && fields.size() > 9) r.cross = fields[9] == "1";
    if (ok && fields.size() > 10 && fields[10] != "-") {
      uint64_t t = 0;
      ok = ParseNumber(fields[10], t);
      r.threshold = t;
    }
    if (!ok) throw MalformedLine("bad number in report record", line_no);
    r.log2_prob = -r.entropy * static_cast<double>(r.tokens);
    reports.push_back(std::move(r));
  }
  return reports;
}

}  // namespace glflm
