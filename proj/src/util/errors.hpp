// Copyright 2026 The Clavier Authors
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

#ifndef CLAVIER_UTIL_ERRORS_HPP_
#define CLAVIER_UTIL_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace clavier {

// Error taxonomy mirrored by the C API status codes and CLI exit codes:
//   UsageError      -> 1  (bad invocation: flags, missing arguments)
//   ValidationError -> 2  (bad input data: malformed files, impossible scores)
//   anything else   -> 3  (internal/runtime failure)
class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what)
      : std::runtime_error(what) {}
};

// Validation failure tied to a byte position in a binary input.
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& what, size_t byte_offset)
      : ValidationError(what + " at byte " + std::to_string(byte_offset)),
        byte_offset_(byte_offset) {}
  size_t byte_offset() const { return byte_offset_; }

 private:
  size_t byte_offset_;
};

}  // namespace clavier

#endif  // CLAVIER_UTIL_ERRORS_HPP_
