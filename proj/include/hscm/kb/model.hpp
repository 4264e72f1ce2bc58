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

#ifndef HSCM_KB_MODEL_HPP_
#define HSCM_KB_MODEL_HPP_

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hscm/grammar/spec.hpp"

namespace hscm {

class CompiledGrammar;

enum class Cardinality { kOne, kOptional, kMany };

const char *to_string(Cardinality c);
std::optional<Cardinality> cardinality_from_string(const std::string &s);

// Slot acceptor, serialized as a tagged string: "node:<id>", "kind:<kind>",
// or "l1:<class prefix>".
struct Acceptor {
  enum class Kind { kNode, kNodeKind, kL1Prefix };
  Kind kind = Kind::kNode;
  std::string value;
  NodeKind node_kind = NodeKind::kOntologicPrimitive;
};

struct SlotSpec {
  std::string name;
  std::vector<Acceptor> accepted;
  Cardinality cardinality = Cardinality::kOptional;
};

struct SemanticNode {
  std::string id;
  int layer = 2;
  NodeKind kind = NodeKind::kOntologicPrimitive;
  std::string label;
  std::vector<SlotSpec> slots;
  std::string grammar_id;                      // empty: inherit or none
  std::vector<std::string> attribute_node_ids;  // cascade targets
};

enum class LexEntryKind { kWord, kCollocation, kAbbreviation, kIdiom, kMeasurementSplitter };

const char *to_string(LexEntryKind kind);
std::optional<LexEntryKind> lex_entry_kind_from_string(const std::string &s);

struct LexiconEntry {
  std::vector<std::string> surface;  // >= 2 forms for collocations/idioms
  std::string functional;
  std::string l1_class;
  std::string pos;
  LexEntryKind kind = LexEntryKind::kWord;
};

enum class TriggerKind { kAnchored, kFloating, kCascading };

const char *to_string(TriggerKind kind);

// Matcher over token features; floating links use kAny (trivially true).
struct TriggerPattern {
  enum class Kind { kAny, kLiteral, kL1Prefix, kNode };
  Kind kind = Kind::kAny;
  std::string value;
};

struct ActivationLink {
  TriggerPattern trigger;
  std::string target_node_id;
  TriggerKind kind = TriggerKind::kAnchored;
  std::string context_filter;  // empty: applies in every context
  double prior = 1.0;
};

struct SuppressionPattern {
  std::string target_node_id;
  std::string grammar_id;
};

struct GenSpecLink {
  std::string subclass_id;
  std::string superclass_id;
};

// Node-or-kind reference used by precedence rules ("node:X" / "kind:k").
struct NodeOrKindRef {
  bool is_kind = false;
  std::string node_id;
  NodeKind kind = NodeKind::kOntologicPrimitive;
};

enum class OverlapCondition { kAlways, kPartialOverlap, kFullOverlap };

const char *to_string(OverlapCondition c);
std::optional<OverlapCondition> overlap_condition_from_string(const std::string &s);

struct PrecedenceRule {
  NodeOrKindRef winner;
  NodeOrKindRef loser;
  OverlapCondition condition = OverlapCondition::kAlways;
};

// Bigram language model over L1 class paths. Boundary neighbors use the
// reserved sentinel class.
struct SequenceModel {
  static constexpr const char *kSentinelClass = "_SENTINEL";

  std::map<std::pair<std::string, std::string>, long long> bigram_counts;

  long long count(const std::string &left, const std::string &right) const {
    auto it = bigram_counts.find({left, right});
    return it == bigram_counts.end() ? 0 : it->second;
  }
};

struct KbConfig {
  int max_levels = 8;
  int max_recursion_depth = 4;
  int cascade_depth = 2;
};

struct ValidationIssue {
  std::string path;
  std::string message;
};

// Compiled HSCM knowledge base. Immutable after load_kb; all queries and the
// parse engine take it by const reference and are safe to share across
// threads.
struct KnowledgeBase {
  KbConfig config;
  std::vector<SemanticNode> nodes;
  std::vector<LexiconEntry> lexicon;
  std::vector<GrammarSpec> grammars;
  std::vector<ActivationLink> activation_links;
  std::vector<SuppressionPattern> suppression_patterns;
  std::vector<GenSpecLink> genspec_links;
  std::vector<PrecedenceRule> precedence_rules;
  SequenceModel sequence_model;

  // Derived at load time.
  std::unordered_map<std::string, int> node_index;
  std::unordered_map<std::string, int> grammar_index;
  std::unordered_map<std::string, std::shared_ptr<const CompiledGrammar>> compiled_grammars;
  std::unordered_map<std::string, std::vector<std::string>> superclass_chains;
  std::vector<ValidationIssue> load_warnings;  // lenient-mode schema findings

  const SemanticNode *find_node(const std::string &id) const {
    auto it = node_index.find(id);
    return it == node_index.end() ? nullptr : &nodes[it->second];
  }
  const GrammarSpec *find_grammar(const std::string &id) const {
    auto it = grammar_index.find(id);
    return it == grammar_index.end() ? nullptr : &grammars[it->second];
  }
  const CompiledGrammar *find_compiled(const std::string &id) const {
    auto it = compiled_grammars.find(id);
    return it == compiled_grammars.end() ? nullptr : it->second.get();
  }

  // node itself followed by transitive superclasses, nearest first.
  const std::vector<std::string> &chain(const std::string &id) const;

  bool is_subclass_of(const std::string &id, const std::string &ancestor) const;

  // Grammar used to test a node: its own, else the nearest superclass's.
  // Returns nullptr when the whole chain lacks one.
  const CompiledGrammar *effective_grammar(const std::string &node_id) const;
};

// True when `cls` equals `prefix` or extends it at a dot boundary
// ("physobj.anatomy" admits "physobj.anatomy.lung" but not "physobj.anat").
bool l1_class_has_prefix(const std::string &cls, const std::string &prefix);

}  // namespace hscm

#endif  // HSCM_KB_MODEL_HPP_
