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

#ifndef HSCM_GRAMMAR_SPEC_HPP_
#define HSCM_GRAMMAR_SPEC_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hscm {

enum class NodeKind {
  kOntologicPrimitive,
  kOntologicProposition,
  kObjectEventFrame,
  kDiscourseTemplate,
};

const char *to_string(NodeKind kind);
std::optional<NodeKind> node_kind_from_string(const std::string &s);

// One grammar element constraint. "Isa" accepts a token whose node is the
// named node or any gen-spec subclass of it; "Node" requires the exact id.
struct Constraint {
  enum class Kind { kLiteral, kL1Prefix, kNode, kNodeKind, kIsa };
  Kind kind = Kind::kLiteral;
  std::string value;                       // literal text, l1 path, or node id
  NodeKind node_kind = NodeKind::kOntologicPrimitive;  // for kNodeKind
};

enum class Quantifier { kExactlyOne, kOptional, kZeroOrMore, kOneOrMore };

struct Matcher {
  Constraint constraint;
  Quantifier quantifier = Quantifier::kExactlyOne;
  std::string capture;  // slot name; empty when the element is not captured
};

struct GrammarSpec {
  std::string id;
  std::vector<Matcher> elements;
  bool recursive = false;
  std::optional<int> anchor_index;  // element that must consume the anchor
};

// Result of evaluating a compiled grammar over one level's tokens.
// token_range is [begin, end) over the input sequence; bindings map slot
// names to the consumed token positions (several for many-valued slots).
struct MatchResult {
  int begin = 0;
  int end = 0;
  std::map<std::string, std::vector<int>> bindings;
  std::string grammar_id;
};

}  // namespace hscm

#endif  // HSCM_GRAMMAR_SPEC_HPP_
