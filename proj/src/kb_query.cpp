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

#include "hscm/kb/query.hpp"

#include <algorithm>
#include <set>

#include "hscm/error.hpp"
#include "hscm/grammar/runtime.hpp"

namespace hscm {

namespace {

bool trigger_matches(const KnowledgeBase &kb, const TriggerPattern &trigger,
                     const TokenView &token) {
  switch (trigger.kind) {
    case TriggerPattern::Kind::kAny:
      return true;
    case TriggerPattern::Kind::kLiteral:
      return token.text == trigger.value;
    case TriggerPattern::Kind::kL1Prefix:
      return l1_class_has_prefix(token.l1_class, trigger.value);
    case TriggerPattern::Kind::kNode:
      return !token.node_id.empty() && kb.is_subclass_of(token.node_id, trigger.value);
  }
  return false;
}

bool context_allows(const ContextProfile &context, const std::string &filter) {
  if (filter.empty()) return true;
  return std::find(context.begin(), context.end(), filter) != context.end();
}

// True when some suppression pattern for `target` matches the tokens over a
// window covering at least one trigger token.
bool suppressed(const KnowledgeBase &kb, const std::string &target,
                const std::vector<int> &trigger_tokens, std::span<const TokenView> tokens) {
  if (trigger_tokens.empty()) return false;
  for (const auto &pattern : kb.suppression_patterns) {
    if (pattern.target_node_id != target) continue;
    const CompiledGrammar *grammar = kb.find_compiled(pattern.grammar_id);
    if (grammar == nullptr) continue;
    for (const MatchResult &match : match_floating(*grammar, kb, tokens)) {
      for (int t : trigger_tokens) {
        if (t >= match.begin && t < match.end) return true;
      }
    }
  }
  return false;
}

}  // namespace

std::vector<HypothesisSeed> query_hypotheses(const KnowledgeBase &kb,
                                             std::span<const TokenView> tokens,
                                             const ContextProfile &context) {
  std::vector<HypothesisSeed> seeds;

  // Anchored triggers against each token; floating links fire uncondtionally.
  for (const auto &link : kb.activation_links) {
    if (!context_allows(context, link.context_filter)) continue;
    if (link.kind == TriggerKind::kAnchored) {
      for (int i = 0; i < static_cast<int>(tokens.size()); ++i) {
        if (trigger_matches(kb, link.trigger, tokens[i])) {
          seeds.push_back({link.target_node_id, {i}, TriggerKind::kAnchored, link.prior});
        }
      }
    } else if (link.kind == TriggerKind::kFloating) {
      seeds.push_back({link.target_node_id, {}, TriggerKind::kFloating, link.prior});
    }
  }

  // Specialization preference: when two seeds share the trigger token set and
  // one target is a strict gen-spec descendant of the other, the descendant
  // replaces the general hypothesis.
  {
    std::vector<char> drop(seeds.size(), 0);
    for (size_t i = 0; i < seeds.size(); ++i) {
      for (size_t j = 0; j < seeds.size(); ++j) {
        if (i == j || seeds[i].trigger_tokens != seeds[j].trigger_tokens) continue;
        if (seeds[j].target_node_id != seeds[i].target_node_id &&
            kb.is_subclass_of(seeds[j].target_node_id, seeds[i].target_node_id)) {
          drop[i] = 1;
        }
      }
    }
    std::vector<HypothesisSeed> kept;
    for (size_t i = 0; i < seeds.size(); ++i) {
      if (!drop[i]) kept.push_back(std::move(seeds[i]));
    }
    seeds = std::move(kept);
  }

  // Suppression before cascading, so a vetoed activation spawns nothing.
  {
    std::vector<HypothesisSeed> kept;
    for (auto &seed : seeds) {
      if (!suppressed(kb, seed.target_node_id, seed.trigger_tokens, tokens)) {
        kept.push_back(std::move(seed));
      }
    }
    seeds = std::move(kept);
  }

  // Cascades: from surviving activations and from nodes already bound to
  // tokens, through cascading links and ontologic attributes, bounded by
  // config.cascade_depth.
  struct Activated {
    std::string node_id;
    std::vector<int> triggers;
  };
  std::vector<Activated> frontier;
  std::set<std::string> activated_ids;
  for (const auto &seed : seeds) {
    if (activated_ids.insert(seed.target_node_id).second) {
      frontier.push_back({seed.target_node_id, seed.trigger_tokens});
    }
  }
  for (int i = 0; i < static_cast<int>(tokens.size()); ++i) {
    if (!tokens[i].node_id.empty() && activated_ids.insert(tokens[i].node_id).second) {
      frontier.push_back({tokens[i].node_id, {i}});
    }
  }
  for (int depth = 0; depth < kb.config.cascade_depth && !frontier.empty(); ++depth) {
    std::vector<Activated> next;
    auto cascade_to = [&](const std::string &target, const Activated &from, double prior) {
      HypothesisSeed seed{target, from.triggers, TriggerKind::kCascading, prior};
      if (suppressed(kb, target, seed.trigger_tokens, tokens)) return;
      seeds.push_back(seed);
      if (activated_ids.insert(target).second) next.push_back({target, from.triggers});
    };
    for (const auto &from : frontier) {
      for (const auto &link : kb.activation_links) {
        if (link.kind != TriggerKind::kCascading) continue;
        if (!context_allows(context, link.context_filter)) continue;
        if (!kb.is_subclass_of(from.node_id, link.trigger.value)) continue;
        cascade_to(link.target_node_id, from, link.prior);
      }
      if (const SemanticNode *node = kb.find_node(from.node_id)) {
        for (const auto &attr : node->attribute_node_ids) {
          cascade_to(attr, from, 1.0);
        }
      }
    }
    frontier = std::move(next);
  }

  // Deduplicate by (target, trigger set); deterministic order.
  std::set<std::pair<std::string, std::vector<int>>> seen;
  std::vector<HypothesisSeed> unique;
  for (auto &seed : seeds) {
    std::vector<int> sorted_triggers = seed.trigger_tokens;
    std::sort(sorted_triggers.begin(), sorted_triggers.end());
    if (seen.insert({seed.target_node_id, sorted_triggers}).second) {
      unique.push_back(std::move(seed));
    }
  }
  std::stable_sort(unique.begin(), unique.end(), [](const auto &a, const auto &b) {
    int pa = a.trigger_tokens.empty() ? -1 : *std::min_element(a.trigger_tokens.begin(),
                                                               a.trigger_tokens.end());
    int pb = b.trigger_tokens.empty() ? -1 : *std::min_element(b.trigger_tokens.begin(),
                                                               b.trigger_tokens.end());
    if (pa != pb) return pa < pb;
    return a.target_node_id < b.target_node_id;
  });
  return unique;
}

std::vector<std::pair<std::string, long long>> query_unknown_assignment(
    const KnowledgeBase &kb, std::span<const std::string> l1_classes, int index) {
  if (index < 0 || index >= static_cast<int>(l1_classes.size())) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "token index " + std::to_string(index) + " out of range");
  }
  const std::string left =
      index == 0 ? SequenceModel::kSentinelClass : l1_classes[index - 1];
  const std::string right = index + 1 == static_cast<int>(l1_classes.size())
                                ? SequenceModel::kSentinelClass
                                : l1_classes[index + 1];

  // Candidates: every class mentioned by the model, either side.
  std::set<std::string> candidates;
  for (const auto &[pair, count] : kb.sequence_model.bigram_counts) {
    (void)count;
    candidates.insert(pair.first);
    candidates.insert(pair.second);
  }
  candidates.erase(SequenceModel::kSentinelClass);

  std::vector<std::pair<std::string, long long>> ranking;
  for (const auto &candidate : candidates) {
    long long score =
        kb.sequence_model.count(left, candidate) * kb.sequence_model.count(candidate, right);
    if (score > 0) ranking.push_back({candidate, score});
  }
  std::sort(ranking.begin(), ranking.end(), [](const auto &a, const auto &b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return ranking;
}

PrecedenceAnswer query_precedence(const KnowledgeBase &kb, const InstanceRef &a,
                                  const InstanceRef &b) {
  const bool overlap = a.begin < b.end && b.begin < a.end;
  if (!overlap) {
    throw Error(ErrorCode::kNotInConflict, "instances do not overlap");
  }
  const bool identical_span = a.begin == b.begin && a.end == b.end;
  const bool containment = (a.begin <= b.begin && b.end <= a.end) ||
                           (b.begin <= a.begin && a.end <= b.end);

  auto condition_holds = [&](OverlapCondition condition) {
    switch (condition) {
      case OverlapCondition::kAlways: return true;
      case OverlapCondition::kPartialOverlap: return !containment;
      case OverlapCondition::kFullOverlap: return containment || identical_span;
    }
    return false;
  };
  auto ref_matches = [&](const NodeOrKindRef &ref, const InstanceRef &inst) {
    if (ref.is_kind) return inst.kind == ref.kind;
    return inst.node_id == ref.node_id || kb.is_subclass_of(inst.node_id, ref.node_id);
  };

  // 1. Explicit rules, declaration order.
  for (const auto &rule : kb.precedence_rules) {
    if (!condition_holds(rule.condition)) continue;
    if (ref_matches(rule.winner, a) && ref_matches(rule.loser, b)) {
      return PrecedenceAnswer::kPreferA;
    }
    if (ref_matches(rule.winner, b) && ref_matches(rule.loser, a)) {
      return PrecedenceAnswer::kPreferB;
    }
  }
  // 2. Strictly longer token span.
  if (a.end - a.begin != b.end - b.begin) {
    return a.end - a.begin > b.end - b.begin ? PrecedenceAnswer::kPreferA
                                             : PrecedenceAnswer::kPreferB;
  }
  // 3. Higher layer.
  if (a.layer != b.layer) {
    return a.layer > b.layer ? PrecedenceAnswer::kPreferA : PrecedenceAnswer::kPreferB;
  }
  // 4. Leftmost trigger.
  if (a.trigger_pos != b.trigger_pos) {
    return a.trigger_pos < b.trigger_pos ? PrecedenceAnswer::kPreferA
                                         : PrecedenceAnswer::kPreferB;
  }
  // 5. Prior as the final tie-break hint.
  if (a.prior != b.prior) {
    return a.prior > b.prior ? PrecedenceAnswer::kPreferA : PrecedenceAnswer::kPreferB;
  }
  return PrecedenceAnswer::kUnresolved;
}

bool acceptor_admits(const KnowledgeBase &kb, const Acceptor &acceptor, const OrphanRef &orphan) {
  switch (acceptor.kind) {
    case Acceptor::Kind::kNode:
      return !orphan.node_id.empty() && kb.is_subclass_of(orphan.node_id, acceptor.value);
    case Acceptor::Kind::kNodeKind: {
      if (orphan.node_id.empty()) return false;
      const SemanticNode *node = kb.find_node(orphan.node_id);
      return node != nullptr && node->kind == acceptor.node_kind;
    }
    case Acceptor::Kind::kL1Prefix:
      return l1_class_has_prefix(orphan.l1_class, acceptor.value);
  }
  return false;
}

std::optional<std::string> query_compatibility(const KnowledgeBase &kb, const OrphanRef &orphan,
                                               const std::string &anchor_node_id) {
  const SemanticNode *anchor = kb.find_node(anchor_node_id);
  if (anchor == nullptr) {
    throw Error(ErrorCode::kUnknownNode, "unknown node '" + anchor_node_id + "'");
  }
  for (const auto &slot : anchor->slots) {
    for (const auto &acceptor : slot.accepted) {
      if (acceptor_admits(kb, acceptor, orphan)) return slot.name;
    }
  }
  return std::nullopt;
}

std::vector<std::string> superclass_chain(const KnowledgeBase &kb, const std::string &node_id) {
  if (kb.find_node(node_id) == nullptr) {
    throw Error(ErrorCode::kUnknownNode, "unknown node '" + node_id + "'");
  }
  return kb.chain(node_id);
}

}  // namespace hscm
