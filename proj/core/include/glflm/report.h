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

#ifndef GLFLM_REPORT_H_
#define GLFLM_REPORT_H_

#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "glflm/evaluation.h"

namespace glflm {

enum class ReportLayout { kByModel, kByCorpus, kCrossMatrix };

std::string_view ReportLayoutName(ReportLayout layout);
// Accepts "by-model", "by-corpus" and "cross-matrix". Throws InvalidConfig.
ReportLayout ParseReportLayout(std::string_view name);

// Aligned columns under a single header line. Rows are sorted, so the output
// does not depend on the order of `reports`.
//   by-model / by-corpus: one row per report.
//   cross-matrix: models x corpora perplexity grid; if more than one
//     threshold occurs, rows are (model, corpus) pairs and columns are
//     thresholds instead. Missing cells are left as "-".
std::string FormatTextReport(std::span<const EvalReport> reports,
                             ReportLayout layout);

// One tab-separated record per report, in input order:
//   model corpus N oov H ppl sentences oov_rate ppl_excl_unk cross threshold
// Floats use 6 decimals; a missing threshold is "-".
std::string FormatRecords(std::span<const EvalReport> reports);
// Inverse of FormatRecords (only the first six fields are required). Throws
// MalformedLine.
std::vector<EvalReport> ParseRecords(std::istream& in);

}  // namespace glflm

#endif  // GLFLM_REPORT_H_
