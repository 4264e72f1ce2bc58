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

#include "hscm/kb/validate.hpp"

#include <functional>
#include <map>
#include <set>
#include <string>

namespace hscm {

namespace {

int expected_layer(NodeKind kind) {
  switch (kind) {
    case NodeKind::kOntologicPrimitive: return 2;
    case NodeKind::kOntologicProposition: return 3;
    case NodeKind::kObjectEventFrame: return 4;
    case NodeKind::kDiscourseTemplate: return 5;
  }
  return 0;
}

bool node_or_kind_matches(const KnowledgeBase &kb, const NodeOrKindRef &ref,
                          const std::string &node_id) {
  if (ref.is_kind) {
    const SemanticNode *node = kb.find_node(node_id);
    return node != nullptr && node->kind == ref.kind;
  }
  return kb.is_subclass_of(node_id, ref.node_id);
}

std::string trigger_key(const TriggerPattern &t) {
  switch (t.kind) {
    case TriggerPattern::Kind::kAny: return "any";
    case TriggerPattern::Kind::kLiteral: return "literal:" + t.value;
    case TriggerPattern::Kind::kL1Prefix: return "l1:" + t.value;
    case TriggerPattern::Kind::kNode: return "node:" + t.value;
  }
  return "?";
}

// Generic cycle finder over an adjacency map; reports one vertex on a cycle.
std::optional<std::string> find_cycle(const std::map<std::string, std::set<std::string>> &graph) {
  std::map<std::string, int> color;  // 0 new, 1 on stack, 2 done
  std::optional<std::string> cycle_vertex;
  std::function<bool(const std::string &)> visit = [&](const std::string &v) {
    color[v] = 1;
    auto it = graph.find(v);
    if (it != graph.end()) {
      for (const auto &w : it->second) {
        int c = color.count(w) ? color[w] : 0;
        if (c == 1) {
          cycle_vertex = w;
          return true;
        }
        if (c == 0 && visit(w)) return true;
      }
    }
    color[v] = 2;
    return false;
  };
  for (const auto &[v, unused] : graph) {
    (void)unused;
    if ((color.count(v) ? color[v] : 0) == 0 && visit(v)) return cycle_vertex;
  }
  return std::nullopt;
}

}  // namespace

ValidationReport validate_kb(const KnowledgeBase &kb) {
  ValidationReport report;
  auto error = [&](const std::string &path, const std::string &message) {
    report.errors.push_back({path, message});
  };
  auto warn = [&](const std::string &path, const std::string &message) {
    report.warnings.push_back({path, message});
  };

  report.warnings.insert(report.warnings.end(), kb.load_warnings.begin(), kb.load_warnings.end());

  auto node_exists = [&](const std::string &id) { return kb.find_node(id) != nullptr; };

  // Nodes: ids, layers, kinds, slots, attributes, grammar references.
  std::set<std::string> seen_node_ids;
  for (size_t i = 0; i < kb.nodes.size(); ++i) {
    const SemanticNode &node = kb.nodes[i];
    const std::string path = "nodes[" + std::to_string(i) + "] (" + node.id + ")";
    if (node.id.empty()) error(path, "empty node id");
    if (!seen_node_ids.insert(node.id).second) error(path, "duplicate node id '" + node.id + "'");
    if (node.layer < 2 || node.layer > 5) {
      error(path, "layer must be within 2..5");
    } else if (node.layer != expected_layer(node.kind)) {
      error(path, std::string("kind '") + to_string(node.kind) + "' is inconsistent with layer " +
                      std::to_string(node.layer));
    }
    if (node.kind == NodeKind::kOntologicPrimitive && !node.slots.empty()) {
      error(path, "ontologic primitives must not declare slots");
    }
    std::set<std::string> slot_names;
    for (const auto &slot : node.slots) {
      const std::string spath = path + ".slot '" + slot.name + "'";
      if (!slot_names.insert(slot.name).second) error(spath, "duplicate slot name");
      if (slot.accepted.empty()) error(spath, "slot accepts nothing");
      for (const auto &acceptor : slot.accepted) {
        if (acceptor.kind == Acceptor::Kind::kNode && !node_exists(acceptor.value)) {
          error(spath, "acceptor references unknown node '" + acceptor.value + "'");
        }
      }
    }
    for (const auto &attr : node.attribute_node_ids) {
      if (!node_exists(attr)) error(path, "attribute references unknown node '" + attr + "'");
    }
    if (!node.grammar_id.empty() && kb.find_grammar(node.grammar_id) == nullptr) {
      error(path, "references unknown grammar '" + node.grammar_id + "'");
    }
  }

  // Lexicon shape.
  for (size_t i = 0; i < kb.lexicon.size(); ++i) {
    const LexiconEntry &entry = kb.lexicon[i];
    const std::string path = "lexicon[" + std::to_string(i) + "] (" + entry.functional + ")";
    if (entry.l1_class.empty()) error(path, "empty l1 class");
    if ((entry.kind == LexEntryKind::kCollocation || entry.kind == LexEntryKind::kIdiom) &&
        entry.surface.size() < 2) {
      error(path, "collocation/idiom entries need at least two surface forms");
    }
    if (entry.kind == LexEntryKind::kMeasurementSplitter && entry.surface.size() != 1) {
      error(path, "measurement-splitter entries take exactly one unit surface form");
    }
  }

  // Grammars: duplicate ids, dangling references, anchors, captures, recursion flag.
  std::set<std::string> seen_grammar_ids;
  for (size_t i = 0; i < kb.grammars.size(); ++i) {
    const GrammarSpec &g = kb.grammars[i];
    const std::string path = "grammars[" + std::to_string(i) + "] (" + g.id + ")";
    if (!seen_grammar_ids.insert(g.id).second) error(path, "duplicate grammar id '" + g.id + "'");
    if (g.elements.empty()) warn(path, "empty grammar matches only the empty range");
    for (size_t e = 0; e < g.elements.size(); ++e) {
      const Constraint &c = g.elements[e].constraint;
      if ((c.kind == Constraint::Kind::kNode || c.kind == Constraint::Kind::kIsa) &&
          !node_exists(c.value)) {
        error(path + ".elements[" + std::to_string(e) + "]",
              "constraint references unknown node '" + c.value + "'");
      }
    }
    if (g.anchor_index.has_value()) {
      int a = *g.anchor_index;
      if (a < 0 || a >= static_cast<int>(g.elements.size())) {
        error(path, "anchor index out of range");
      } else {
        Quantifier q = g.elements[a].quantifier;
        if (q == Quantifier::kOptional || q == Quantifier::kZeroOrMore) {
          error(path, "anchor must mark a mandatory element");
        }
      }
    }
  }

  // Per-owner grammar checks: captures bind the owner's declared slots and a
  // recursive grammar must actually reference its owner.
  for (const auto &node : kb.nodes) {
    if (node.grammar_id.empty()) continue;
    const GrammarSpec *g = kb.find_grammar(node.grammar_id);
    if (g == nullptr) continue;
    const std::string path = "node '" + node.id + "' grammar '" + g->id + "'";
    std::set<std::string> slot_names;
    for (const auto &slot : node.slots) slot_names.insert(slot.name);
    for (const auto &element : g->elements) {
      if (!element.capture.empty() && !slot_names.count(element.capture)) {
        error(path, "captures unknown slot '" + element.capture + "'");
      }
    }
    if (g->recursive) {
      bool self_reference = false;
      for (const auto &element : g->elements) {
        const Constraint &c = element.constraint;
        if (c.kind == Constraint::Kind::kNode && c.value == node.id) self_reference = true;
        if (c.kind == Constraint::Kind::kIsa && kb.is_subclass_of(node.id, c.value)) {
          self_reference = true;
        }
        if (c.kind == Constraint::Kind::kNodeKind && c.node_kind == node.kind) {
          self_reference = true;
        }
      }
      if (!self_reference) {
        error(path, "recursive flag set but no element can match the node itself");
      }
    }
  }

  // Activation links.
  for (size_t i = 0; i < kb.activation_links.size(); ++i) {
    const ActivationLink &link = kb.activation_links[i];
    const std::string path = "activation[" + std::to_string(i) + "]";
    if (!node_exists(link.target_node_id)) {
      error(path, "target references unknown node '" + link.target_node_id + "'");
    }
    if (link.trigger.kind == TriggerPattern::Kind::kNode && !node_exists(link.trigger.value)) {
      error(path, "trigger references unknown node '" + link.trigger.value + "'");
    }
    if (link.kind == TriggerKind::kFloating && link.trigger.kind != TriggerPattern::Kind::kAny) {
      error(path, "floating links must use a trivially-true trigger");
    }
    if (link.kind == TriggerKind::kCascading && link.trigger.kind != TriggerPattern::Kind::kNode) {
      error(path, "cascading links must originate from a node");
    }
  }

  // Suppression patterns.
  for (size_t i = 0; i < kb.suppression_patterns.size(); ++i) {
    const SuppressionPattern &sp = kb.suppression_patterns[i];
    const std::string path = "suppression[" + std::to_string(i) + "]";
    if (!node_exists(sp.target_node_id)) {
      error(path, "target references unknown node '" + sp.target_node_id + "'");
    }
    if (kb.find_grammar(sp.grammar_id) == nullptr) {
      error(path, "pattern references unknown grammar '" + sp.grammar_id + "'");
    }
  }

  // Gen-spec links and acyclicity.
  {
    std::map<std::string, std::set<std::string>> graph;
    for (size_t i = 0; i < kb.genspec_links.size(); ++i) {
      const GenSpecLink &link = kb.genspec_links[i];
      const std::string path = "genspec[" + std::to_string(i) + "]";
      if (!node_exists(link.subclass_id)) {
        error(path, "unknown subclass node '" + link.subclass_id + "'");
      }
      if (!node_exists(link.superclass_id)) {
        error(path, "unknown superclass node '" + link.superclass_id + "'");
      }
      graph[link.subclass_id].insert(link.superclass_id);
    }
    if (auto cycle = find_cycle(graph)) {
      error("genspec", "generalization-specialization cycle through '" + *cycle + "'");
    }
  }

  // Precedence rules: resolvable refs, no cycle among 'always' rules.
  {
    std::map<std::string, std::set<std::string>> graph;
    for (size_t i = 0; i < kb.precedence_rules.size(); ++i) {
      const PrecedenceRule &rule = kb.precedence_rules[i];
      const std::string path = "precedence[" + std::to_string(i) + "]";
      for (const NodeOrKindRef *ref : {&rule.winner, &rule.loser}) {
        if (!ref->is_kind && !node_exists(ref->node_id)) {
          error(path, "references unknown node '" + ref->node_id + "'");
        }
      }
      if (rule.condition == OverlapCondition::kAlways) {
        auto key = [](const NodeOrKindRef &r) {
          return r.is_kind ? "kind:" + std::string(to_string(r.kind)) : "node:" + r.node_id;
        };
        graph[key(rule.winner)].insert(key(rule.loser));
      }
    }
    if (auto cycle = find_cycle(graph)) {
      error("precedence", "rule cycle under condition=always through '" + *cycle + "'");
    }
  }

  // Composition acyclicity over slot acceptors. Nodes whose own grammar is
  // flagged recursive are exempt.
  {
    std::map<std::string, std::set<std::string>> graph;
    for (const auto &node : kb.nodes) {
      const GrammarSpec *g = node.grammar_id.empty() ? nullptr : kb.find_grammar(node.grammar_id);
      if (g != nullptr && g->recursive) continue;
      auto &edges = graph[node.id];
      for (const auto &slot : node.slots) {
        for (const auto &acceptor : slot.accepted) {
          if (acceptor.kind == Acceptor::Kind::kNode) {
            for (const auto &other : kb.nodes) {
              if (kb.is_subclass_of(other.id, acceptor.value)) edges.insert(other.id);
            }
          } else if (acceptor.kind == Acceptor::Kind::kNodeKind) {
            for (const auto &other : kb.nodes) {
              if (other.kind == acceptor.node_kind) edges.insert(other.id);
            }
          }
        }
      }
    }
    if (auto cycle = find_cycle(graph)) {
      error("nodes", "slot-acceptor composition cycle through '" + *cycle + "'");
    }
  }

  if (!report.errors.empty()) return report;  // warnings below assume a resolvable KB

  // Same-span ambiguity: identical triggers, different targets, no rule.
  for (size_t i = 0; i < kb.activation_links.size(); ++i) {
    for (size_t j = i + 1; j < kb.activation_links.size(); ++j) {
      const ActivationLink &a = kb.activation_links[i];
      const ActivationLink &b = kb.activation_links[j];
      if (a.trigger.kind == TriggerPattern::Kind::kAny) continue;
      if (trigger_key(a.trigger) != trigger_key(b.trigger)) continue;
      if (a.target_node_id == b.target_node_id) continue;
      bool related = false;
      for (const auto &rule : kb.precedence_rules) {
        if ((node_or_kind_matches(kb, rule.winner, a.target_node_id) &&
             node_or_kind_matches(kb, rule.loser, b.target_node_id)) ||
            (node_or_kind_matches(kb, rule.winner, b.target_node_id) &&
             node_or_kind_matches(kb, rule.loser, a.target_node_id))) {
          related = true;
          break;
        }
      }
      // Gen-spec related targets resolve by specialization, not precedence.
      if (kb.is_subclass_of(a.target_node_id, b.target_node_id) ||
          kb.is_subclass_of(b.target_node_id, a.target_node_id)) {
        related = true;
      }
      if (!related) {
        warn("activation[" + std::to_string(i) + "]/activation[" + std::to_string(j) + "]",
             "same-span ambiguity: identical trigger activates '" + a.target_node_id + "' and '" +
                 b.target_node_id + "' with no precedence rule");
      }
    }
  }

  // Unreachable nodes: never targeted by a link nor reached through
  // cascades, attributes, or as a superclass of something reachable.
  {
    std::set<std::string> reachable;
    for (const auto &link : kb.activation_links) {
      if (link.kind != TriggerKind::kCascading) reachable.insert(link.target_node_id);
    }
    bool grew = true;
    while (grew) {
      grew = false;
      auto add = [&](const std::string &id) {
        if (reachable.insert(id).second) grew = true;
      };
      for (const auto &link : kb.activation_links) {
        if (link.kind == TriggerKind::kCascading && reachable.count(link.trigger.value)) {
          add(link.target_node_id);
        }
      }
      for (const auto &node : kb.nodes) {
        if (!reachable.count(node.id)) continue;
        for (const auto &attr : node.attribute_node_ids) add(attr);
        for (const auto &super : kb.chain(node.id)) add(super);
      }
    }
    for (const auto &node : kb.nodes) {
      if (!reachable.count(node.id)) {
        warn("node '" + node.id + "'", "unreachable: no activation path leads to it");
      }
    }
  }

  return report;
}

}  // namespace hscm
