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

#ifndef HSCM_KB_QUERY_HPP_
#define HSCM_KB_QUERY_HPP_

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hscm/kb/model.hpp"
#include "hscm/token_view.hpp"

namespace hscm {

// Opaque application profile: a set of flat strings (typically "key=value")
// matched verbatim against ActivationLink.context_filter.
using ContextProfile = std::vector<std::string>;

// Candidate upper-level node activation proposed for the current tokens.
struct HypothesisSeed {
  std::string target_node_id;
  std::vector<int> trigger_tokens;  // positions into the queried sequence
  TriggerKind kind = TriggerKind::kAnchored;
  double prior = 1.0;
};

// All plausible hypotheses for one level's tokens: anchored triggers that
// match some token, every floating link, and cascades (activation links from
// nodes plus ontologic attributes) up to config.cascade_depth starting from
// the surviving activations and the nodes already bound to tokens.
// Suppressed hypotheses are excluded; when two hypotheses share a trigger
// token set and one target specializes the other, only the specialization
// survives. Output order: (leftmost trigger, target id), floating first.
std::vector<HypothesisSeed> query_hypotheses(const KnowledgeBase &kb,
                                             std::span<const TokenView> tokens,
                                             const ContextProfile &context = {});

// Ranked (l1 class, score) candidates for an _UNKNOWN token, scored as
// bigram(left, c) * bigram(c, right) with sentinel boundaries. Zero-score
// candidates are dropped; ties break lexicographically.
// Throws Error{kIndexOutOfRange}.
std::vector<std::pair<std::string, long long>> query_unknown_assignment(
    const KnowledgeBase &kb, std::span<const std::string> l1_classes, int index);

// View of a hypothesis instance as adjudication sees it.
struct InstanceRef {
  std::string node_id;
  int layer = 2;
  NodeKind kind = NodeKind::kOntologicPrimitive;
  int begin = 0;  // token range [begin, end)
  int end = 0;
  int trigger_pos = 0;
  double prior = 1.0;
};

enum class PrecedenceAnswer { kPreferA, kPreferB, kUnresolved };

// Resolves a conflict between two overlapping instances: explicit rule,
// strictly longer span, higher layer, leftmost trigger, then prior.
// Throws Error{kNotInConflict} when the spans are disjoint.
PrecedenceAnswer query_precedence(const KnowledgeBase &kb, const InstanceRef &a,
                                  const InstanceRef &b);

// Residual constituent offered for attachment: a node instance and/or a
// bare token with an L1 class.
struct OrphanRef {
  std::string node_id;   // empty for plain tokens
  std::string l1_class;  // empty when unknown
};

// First slot of `anchor_node_id` (declaration order) whose acceptors admit
// the orphan by node id (gen-spec aware), node kind, or L1 prefix.
// Throws Error{kUnknownNode} when the anchor id does not resolve.
std::optional<std::string> query_compatibility(const KnowledgeBase &kb, const OrphanRef &orphan,
                                               const std::string &anchor_node_id);

// node_id followed by transitive superclasses, nearest first.
// Throws Error{kUnknownNode}.
std::vector<std::string> superclass_chain(const KnowledgeBase &kb, const std::string &node_id);

// True when the acceptor admits the orphan (shared by compatibility checks
// and slot binding).
bool acceptor_admits(const KnowledgeBase &kb, const Acceptor &acceptor, const OrphanRef &orphan);

}  // namespace hscm

#endif  // HSCM_KB_QUERY_HPP_
