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

#ifndef HSCM_KB_LOAD_HPP_
#define HSCM_KB_LOAD_HPP_

#include <string>
#include <string_view>
#include <utility>

#include "hscm/kb/model.hpp"
#include "hscm/kb/validate.hpp"

namespace hscm {

// Strict mode turns unknown document keys into SchemaError; lenient mode
// records them as warnings on the returned KB.
enum class Strictness { kStrict, kLenient };

// Parses, compiles (grammars to matchers, gen-spec chains) and validates a
// KB document. Throws Error{kSchema} for malformed documents and
// Error{kValidation} when the validator reports errors.
KnowledgeBase load_kb(std::string_view text, Strictness strictness = Strictness::kStrict);

KnowledgeBase load_kb_file(const std::string &path, Strictness strictness = Strictness::kStrict);

// Same load, but validation findings come back in the report instead of
// throwing, so callers can print all of them. Schema errors still throw.
std::pair<KnowledgeBase, ValidationReport> load_kb_with_report(
    std::string_view text, Strictness strictness = Strictness::kStrict);

std::pair<KnowledgeBase, ValidationReport> load_kb_file_with_report(
    const std::string &path, Strictness strictness = Strictness::kStrict);

}  // namespace hscm

#endif  // HSCM_KB_LOAD_HPP_
