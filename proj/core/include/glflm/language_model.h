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

#ifndef GLFLM_LANGUAGE_MODEL_H_
#define GLFLM_LANGUAGE_MODEL_H_

#include <span>

#include "glflm/vocabulary.h"

namespace glflm {

// Anything that can score P(word | context). Implementations are immutable
// after construction and safe to query from many threads.
class LanguageModel {
 public:
  virtual ~LanguageModel() = default;

  virtual const Vocabulary& vocab() const = 0;
  virtual int order() const = 0;

  // log10 P(word | context). `context` is the full left history (most recent
  // last, starting with <s>); models use as much of it as they need. Ids
  // outside the vocabulary are scored as <unk>.
  virtual double LogProb(WordId word, std::span<const WordId> context) const = 0;
};

}  // namespace glflm

#endif  // GLFLM_LANGUAGE_MODEL_H_
