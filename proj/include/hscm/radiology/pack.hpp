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

#ifndef HSCM_RADIOLOGY_PACK_HPP_
#define HSCM_RADIOLOGY_PACK_HPP_

#include <string>
#include <vector>

#include <json.hpp>

#include "hscm/kb/model.hpp"
#include "hscm/kb/query.hpp"

namespace hscm::radiology {

// Demonstration knowledge base for the thoracic-radiology tumoral-mass
// domain, with golden fixtures for its worked sentences.

// Versioned data directory holding kb.json and golden/*.json. Compile-time
// default, overridable with the HSCM_DATA_DIR environment variable.
std::string pack_dir();

std::string kb_path();

// Loads and returns the bundled KB (strict mode).
KnowledgeBase load_pack();

struct GoldenCase {
  std::string name;
  std::string sentence;
  ContextProfile context;
  nlohmann::ordered_json expected;            // structural subset of the trace
  std::vector<std::string> forbidden_nodes;   // must never be instantiated
};

// All bundled golden fixtures, in file order.
std::vector<GoldenCase> golden_cases();

// Structural subset check: every expected object key must match recursively;
// expected arrays must be in-order subsequences of the actual arrays;
// scalars compare equal. "<key>_count": N asserts actual[key] is an array of
// length N. On mismatch returns false and reports the failing path.
bool structural_subset(const nlohmann::ordered_json &expected,
                       const nlohmann::ordered_json &actual, std::string *mismatch = nullptr);

// True when no token in any level or frame of the trace document carries one
// of the named nodes.
bool trace_avoids_nodes(const nlohmann::ordered_json &trace_doc,
                        const std::vector<std::string> &node_ids, std::string *found = nullptr);

}  // namespace hscm::radiology

#endif  // HSCM_RADIOLOGY_PACK_HPP_
