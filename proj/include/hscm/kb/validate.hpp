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

#ifndef HSCM_KB_VALIDATE_HPP_
#define HSCM_KB_VALIDATE_HPP_

#include <string>
#include <vector>

#include "hscm/kb/model.hpp"

namespace hscm {

struct ValidationReport {
  std::vector<ValidationIssue> errors;
  std::vector<ValidationIssue> warnings;

  bool ok() const { return errors.empty(); }
  bool clean() const { return errors.empty() && warnings.empty(); }
};

// Full lint of a loaded KB. Never throws; all findings land in the report.
// Errors: unresolved ids, kind/layer mismatches, composition or gen-spec or
// precedence cycles, malformed links, stubbed-feature references.
// Warnings: same-span ambiguity (identical triggers with no precedence
// rule), unreachable nodes, empty grammars, plus any lenient-load findings.
ValidationReport validate_kb(const KnowledgeBase &kb);

}  // namespace hscm

#endif  // HSCM_KB_VALIDATE_HPP_
