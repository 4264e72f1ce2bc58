// Copyright 2026 The HSCM Parser Authors
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

#ifndef HSCM_ERROR_HPP_
#define HSCM_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace hscm {

enum class ErrorCode {
  kSchema,           // malformed KB document (bad JSON, wrong types, unknown keys)
  kValidation,       // KB invariant violation (dangling id, cycle, ...)
  kEncoding,         // input is not valid UTF-8
  kUnknownNode,      // a node id does not resolve
  kUnknownReference, // a grammar constraint names a missing node/kind
  kNotInConflict,    // precedence query over disjoint spans
  kIndexOutOfRange,
  kIo,
};

// Single exception type carrying a code plus an optional document location.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::string path = {},
        int line = -1, int column = -1)
      : std::runtime_error(std::move(message)),
        code_(code),
        path_(std::move(path)),
        line_(line),
        column_(column) {}

  ErrorCode code() const { return code_; }
  const std::string &path() const { return path_; }  // JSON-ish path or node id
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  ErrorCode code_;
  std::string path_;
  int line_;
  int column_;
};

}  // namespace hscm

#endif  // HSCM_ERROR_HPP_
