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

#ifndef GLFLM_SRC_STRING_KEY_H_
#define GLFLM_SRC_STRING_KEY_H_

#include <string_view>

#include "absl/strings/string_view.h"

namespace glflm {

// The system abseil keeps its own string_view type, so heterogeneous
// lookups need an explicit conversion.
inline absl::string_view AsKey(std::string_view s) {
  return absl::string_view(s.data(), s.size());
}

}  // namespace glflm

#endif  // GLFLM_SRC_STRING_KEY_H_
