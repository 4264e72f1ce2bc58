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

#ifndef HSCM_PARSE_TRACE_JSON_HPP_
#define HSCM_PARSE_TRACE_JSON_HPP_

#include <string>

#include <json.hpp>

#include "hscm/parse/trace.hpp"

namespace hscm {

using ordered_json = nlohmann::ordered_json;

// Canonical trace document: top-level keys trace_version, sentence, levels,
// frames, residuals. Serialization is stable; to_json(from_json(x)) is
// byte-identical for documents this library emitted.
ordered_json trace_to_json(const ParseTrace &trace);
ParseTrace trace_from_json(const ordered_json &doc);

// Frames-only view (sentence + frames + residuals).
ordered_json frames_to_json(const ParseTrace &trace);

// Per-level token-count table as plain text.
std::string trace_summary_text(const ParseTrace &trace, int l0_token_count);

}  // namespace hscm

#endif  // HSCM_PARSE_TRACE_JSON_HPP_
