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

#ifndef GLFLM_ERRORS_H_
#define GLFLM_ERRORS_H_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace glflm {

// Base class for every error raised by the library. Callers that only care
// about success/failure can catch this; the CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input data violates a documented format. Carries the 1-based line number
// when one is meaningful (0 otherwise).
class FormatError : public Error {
 public:
  FormatError(const std::string& what, uint64_t line)
      : Error(line == 0 ? what : what + " (line " + std::to_string(line) + ")"),
        line_(line) {}
  uint64_t line() const { return line_; }

 private:
  uint64_t line_;
};

class MalformedLine : public FormatError {
 public:
  using FormatError::FormatError;
};

class MalformedMorphCode : public FormatError {
 public:
  explicit MalformedMorphCode(const std::string& what, uint64_t line = 0)
      : FormatError(what, line) {}
};

class MalformedArpa : public FormatError {
 public:
  using FormatError::FormatError;
};

class MalformedCountFile : public FormatError {
 public:
  explicit MalformedCountFile(const std::string& what)
      : FormatError(what, 0) {}
};

// Invalid UTF-8 at the given byte offset of the input.
class DecodingError : public Error {
 public:
  explicit DecodingError(uint64_t offset)
      : Error("invalid UTF-8 at byte offset " + std::to_string(offset)),
        offset_(offset) {}
  uint64_t offset() const { return offset_; }

 private:
  uint64_t offset_;
};

class UnknownToken : public Error {
 public:
  explicit UnknownToken(const std::string& token)
      : Error("token not in vocabulary: '" + token + "'"), token_(token) {}
  const std::string& token() const { return token_; }

 private:
  std::string token_;
};

class OrderMismatch : public Error {
 public:
  using Error::Error;
};

class VocabMismatch : public Error {
 public:
  using Error::Error;
};

class DegenerateCounts : public Error {
 public:
  using Error::Error;
};

class EmptyCorpus : public Error {
 public:
  using Error::Error;
};

class InvalidConfig : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace glflm

#endif  // GLFLM_ERRORS_H_
