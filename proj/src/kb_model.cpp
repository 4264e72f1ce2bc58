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

#include "hscm/kb/model.hpp"

#include <algorithm>

#include "hscm/grammar/runtime.hpp"

namespace hscm {

const char *to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::kOntologicPrimitive: return "ontologic-primitive";
    case NodeKind::kOntologicProposition: return "ontologic-proposition";
    case NodeKind::kObjectEventFrame: return "object-event-frame";
    case NodeKind::kDiscourseTemplate: return "discourse-template";
  }
  return "?";
}

std::optional<NodeKind> node_kind_from_string(const std::string &s) {
  if (s == "ontologic-primitive") return NodeKind::kOntologicPrimitive;
  if (s == "ontologic-proposition") return NodeKind::kOntologicProposition;
  if (s == "object-event-frame") return NodeKind::kObjectEventFrame;
  if (s == "discourse-template") return NodeKind::kDiscourseTemplate;
  return std::nullopt;
}

const char *to_string(Cardinality c) {
  switch (c) {
    case Cardinality::kOne: return "one";
    case Cardinality::kOptional: return "optional";
    case Cardinality::kMany: return "many";
  }
  return "?";
}

std::optional<Cardinality> cardinality_from_string(const std::string &s) {
  if (s == "one") return Cardinality::kOne;
  if (s == "optional") return Cardinality::kOptional;
  if (s == "many") return Cardinality::kMany;
  return std::nullopt;
}

const char *to_string(LexEntryKind kind) {
  switch (kind) {
    case LexEntryKind::kWord: return "word";
    case LexEntryKind::kCollocation: return "collocation";
    case LexEntryKind::kAbbreviation: return "abbreviation";
    case LexEntryKind::kIdiom: return "idiom";
    case LexEntryKind::kMeasurementSplitter: return "measurement-splitter";
  }
  return "?";
}

std::optional<LexEntryKind> lex_entry_kind_from_string(const std::string &s) {
  if (s == "word") return LexEntryKind::kWord;
  if (s == "collocation") return LexEntryKind::kCollocation;
  if (s == "abbreviation") return LexEntryKind::kAbbreviation;
  if (s == "idiom") return LexEntryKind::kIdiom;
  if (s == "measurement-splitter") return LexEntryKind::kMeasurementSplitter;
  return std::nullopt;
}

const char *to_string(TriggerKind kind) {
  switch (kind) {
    case TriggerKind::kAnchored: return "anchored";
    case TriggerKind::kFloating: return "floating";
    case TriggerKind::kCascading: return "cascading";
  }
  return "?";
}

const char *to_string(OverlapCondition c) {
  switch (c) {
    case OverlapCondition::kAlways: return "always";
    case OverlapCondition::kPartialOverlap: return "partial-overlap";
    case OverlapCondition::kFullOverlap: return "full-overlap";
  }
  return "?";
}

std::optional<OverlapCondition> overlap_condition_from_string(const std::string &s) {
  if (s == "always") return OverlapCondition::kAlways;
  if (s == "partial-overlap") return OverlapCondition::kPartialOverlap;
  if (s == "full-overlap") return OverlapCondition::kFullOverlap;
  return std::nullopt;
}

const std::vector<std::string> &KnowledgeBase::chain(const std::string &id) const {
  static const std::vector<std::string> kEmpty;
  auto it = superclass_chains.find(id);
  return it == superclass_chains.end() ? kEmpty : it->second;
}

bool KnowledgeBase::is_subclass_of(const std::string &id, const std::string &ancestor) const {
  const auto &c = chain(id);
  return std::find(c.begin(), c.end(), ancestor) != c.end();
}

const CompiledGrammar *KnowledgeBase::effective_grammar(const std::string &node_id) const {
  for (const auto &id : chain(node_id)) {
    const SemanticNode *node = find_node(id);
    if (node != nullptr && !node->grammar_id.empty()) {
      return find_compiled(node->grammar_id);
    }
  }
  return nullptr;
}

bool l1_class_has_prefix(const std::string &cls, const std::string &prefix) {
  if (prefix.empty()) return false;
  if (cls.size() < prefix.size()) return false;
  if (cls.compare(0, prefix.size(), prefix) != 0) return false;
  return cls.size() == prefix.size() || cls[prefix.size()] == '.';
}

}  // namespace hscm
