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

#include "hscm/grammar/runtime.hpp"

#include <algorithm>
#include <cstddef>

#include "hscm/error.hpp"

namespace hscm {

namespace {

bool skippable(Quantifier q) {
  return q == Quantifier::kOptional || q == Quantifier::kZeroOrMore;
}

bool loops(Quantifier q) {
  return q == Quantifier::kZeroOrMore || q == Quantifier::kOneOrMore;
}

}  // namespace

bool constraint_matches(const Constraint &c, const KnowledgeBase &kb, const TokenView &token) {
  switch (c.kind) {
    case Constraint::Kind::kLiteral:
      return token.text == c.value;
    case Constraint::Kind::kL1Prefix:
      return l1_class_has_prefix(token.l1_class, c.value);
    case Constraint::Kind::kNode:
      return !token.node_id.empty() && token.node_id == c.value;
    case Constraint::Kind::kNodeKind: {
      if (token.node_id.empty()) return false;
      const SemanticNode *node = kb.find_node(token.node_id);
      return node != nullptr && node->kind == c.node_kind;
    }
    case Constraint::Kind::kIsa:
      return !token.node_id.empty() && kb.is_subclass_of(token.node_id, c.value);
  }
  return false;
}

CompiledGrammar compile_grammar(const GrammarSpec &spec, const KnowledgeBase &kb) {
  for (size_t i = 0; i < spec.elements.size(); ++i) {
    const Constraint &c = spec.elements[i].constraint;
    if ((c.kind == Constraint::Kind::kNode || c.kind == Constraint::Kind::kIsa) &&
        kb.find_node(c.value) == nullptr) {
      throw Error(ErrorCode::kUnknownReference,
                  "grammar '" + spec.id + "' element " + std::to_string(i) +
                      " references unknown node '" + c.value + "'",
                  spec.id);
    }
  }

  const int n = static_cast<int>(spec.elements.size());

  // Provisional numbering: positions 0..n, then one loop state per
  // starred/plus element. A position p means "elements before p are done";
  // a loop state means "just consumed that element, may repeat".
  std::vector<int> loop_state(n, -1);
  int total = n + 1;
  for (int j = 0; j < n; ++j) {
    if (loops(spec.elements[j].quantifier)) loop_state[j] = total++;
  }

  std::vector<std::vector<CompiledGrammar::Edge>> edges(total);
  std::vector<bool> accepting(total, false);

  // all_skippable_from[p]: elements p..n-1 are all skippable.
  std::vector<bool> all_skippable_from(n + 1, false);
  all_skippable_from[n] = true;
  for (int p = n - 1; p >= 0; --p) {
    all_skippable_from[p] = skippable(spec.elements[p].quantifier) && all_skippable_from[p + 1];
  }

  auto consume_target = [&](int j) {
    return loops(spec.elements[j].quantifier) ? loop_state[j] : j + 1;
  };
  auto consumables_from = [&](int p, std::vector<CompiledGrammar::Edge> &out) {
    for (int j = p; j < n; ++j) {
      out.push_back({j, consume_target(j)});
      if (!skippable(spec.elements[j].quantifier)) break;
    }
  };

  for (int p = 0; p <= n; ++p) {
    consumables_from(p, edges[p]);
    accepting[p] = all_skippable_from[p];
  }
  for (int j = 0; j < n; ++j) {
    if (loop_state[j] < 0) continue;
    edges[loop_state[j]].push_back({j, loop_state[j]});  // repeat
    consumables_from(j + 1, edges[loop_state[j]]);
    accepting[loop_state[j]] = all_skippable_from[j + 1];
  }

  // Keep only states reachable from the start and renumber densely.
  std::vector<int> renumber(total, -1);
  std::vector<int> order;
  renumber[0] = 0;
  order.push_back(0);
  for (size_t k = 0; k < order.size(); ++k) {
    for (const auto &e : edges[order[k]]) {
      if (renumber[e.to] < 0) {
        renumber[e.to] = static_cast<int>(order.size());
        order.push_back(e.to);
      }
    }
  }

  CompiledGrammar compiled;
  compiled.spec_ = spec;
  compiled.states_.resize(order.size());
  compiled.accepting_.resize(order.size());
  for (size_t k = 0; k < order.size(); ++k) {
    compiled.accepting_[k] = accepting[order[k]];
    for (const auto &e : edges[order[k]]) {
      compiled.states_[k].push_back({e.element, renumber[e.to]});
    }
    // Greedy priority: lowest element first, its repeat edge included.
    std::stable_sort(compiled.states_[k].begin(), compiled.states_[k].end(),
                     [](const auto &a, const auto &b) { return a.element < b.element; });
  }
  return compiled;
}

namespace {

struct Search {
  const CompiledGrammar &grammar;
  const KnowledgeBase &kb;
  std::span<const TokenView> tokens;
  int anchor_pos;      // -1: unconstrained
  int anchor_element;  // -1: any element may consume the anchor

  // (state, pos, anchor_ok) -> visited, for the end-enumeration pass.
  std::vector<char> visited;
  int n_states = 0;
  int n_pos = 0;

  std::vector<std::pair<int, bool>> ends;  // (end position, anchor_ok)

  explicit Search(const CompiledGrammar &g, const KnowledgeBase &k,
                  std::span<const TokenView> t, int apos, int aelem)
      : grammar(g), kb(k), tokens(t), anchor_pos(apos), anchor_element(aelem) {
    n_states = g.state_count();
    n_pos = static_cast<int>(t.size()) + 1;
    visited.assign(static_cast<size_t>(n_states) * n_pos * 2, 0);
  }

  void enumerate(int state, int pos, bool anchor_ok) {
    char &seen = visited[(static_cast<size_t>(state) * n_pos + pos) * 2 + (anchor_ok ? 1 : 0)];
    if (seen) return;
    seen = 1;
    if (grammar.accepting(state)) ends.push_back({pos, anchor_ok});
    if (pos >= static_cast<int>(tokens.size())) return;
    for (const auto &edge : grammar.edges(state)) {
      const Matcher &m = grammar.spec().elements[edge.element];
      if (!constraint_matches(m.constraint, kb, tokens[pos])) continue;
      bool ok = anchor_ok ||
                (pos == anchor_pos && (anchor_element < 0 || edge.element == anchor_element));
      enumerate(edge.to, pos + 1, ok);
    }
  }

  // Greedy reconstruction of the element assignment for a fixed extent:
  // first accepting path in lowest-element-first order. `dead` memoizes
  // (state, pos, anchor_ok) configurations proven unable to reach the end.
  bool assign(int state, int pos, bool anchor_ok, int end, std::vector<int> &elements,
              std::vector<char> &dead) {
    if (pos == end) return grammar.accepting(state) && (anchor_pos < 0 || anchor_ok);
    if (pos > end) return false;
    char &mark = dead[(static_cast<size_t>(state) * n_pos + pos) * 2 + (anchor_ok ? 1 : 0)];
    if (mark) return false;
    for (const auto &edge : grammar.edges(state)) {
      const Matcher &m = grammar.spec().elements[edge.element];
      if (!constraint_matches(m.constraint, kb, tokens[pos])) continue;
      bool ok = anchor_ok ||
                (pos == anchor_pos && (anchor_element < 0 || edge.element == anchor_element));
      elements.push_back(edge.element);
      if (assign(edge.to, pos + 1, ok, end, elements, dead)) return true;
      elements.pop_back();
    }
    mark = 1;
    return false;
  }

  bool assign_from(int start, int end, std::vector<int> &elements) {
    std::vector<char> dead(static_cast<size_t>(n_states) * n_pos * 2, 0);
    return assign(grammar.start_state(), start, false, end, elements, dead);
  }
};

MatchResult build_result(const CompiledGrammar &grammar, int start, int end,
                         const std::vector<int> &elements) {
  MatchResult result;
  result.begin = start;
  result.end = end;
  result.grammar_id = grammar.grammar_id();
  for (size_t k = 0; k < elements.size(); ++k) {
    const Matcher &m = grammar.spec().elements[elements[k]];
    if (!m.capture.empty()) {
      result.bindings[m.capture].push_back(start + static_cast<int>(k));
    }
  }
  return result;
}

}  // namespace

std::optional<MatchResult> match_at(const CompiledGrammar &grammar, const KnowledgeBase &kb,
                                    std::span<const TokenView> tokens, int anchor) {
  if (anchor < 0 || anchor >= static_cast<int>(tokens.size())) return std::nullopt;
  const int anchor_element =
      grammar.spec().anchor_index.has_value() ? *grammar.spec().anchor_index : -1;

  int best_start = -1;
  int best_end = -1;
  for (int start = 0; start <= anchor; ++start) {
    Search search(grammar, kb, tokens, anchor, anchor_element);
    search.enumerate(grammar.start_state(), start, false);
    for (const auto &[end, anchor_ok] : search.ends) {
      if (end <= anchor || !anchor_ok) continue;  // range must cover the anchor
      const int length = end - start;
      if (length > best_end - best_start) {  // ties keep the leftmost start
        best_start = start;
        best_end = end;
      }
    }
  }
  if (best_start < 0) return std::nullopt;

  Search search(grammar, kb, tokens, anchor, anchor_element);
  std::vector<int> elements;
  if (!search.assign_from(best_start, best_end, elements)) {
    return std::nullopt;  // unreachable: enumerate found this extent
  }
  return build_result(grammar, best_start, best_end, elements);
}

std::vector<MatchResult> match_floating(const CompiledGrammar &grammar, const KnowledgeBase &kb,
                                        std::span<const TokenView> tokens) {
  std::vector<MatchResult> results;
  const int n = static_cast<int>(tokens.size());
  int pos = 0;
  while (pos < n) {
    Search search(grammar, kb, tokens, -1, -1);
    search.enumerate(grammar.start_state(), pos, false);
    int best_end = pos;  // empty matches are skipped
    for (const auto &[end, anchor_ok] : search.ends) {
      (void)anchor_ok;
      best_end = std::max(best_end, end);
    }
    if (best_end > pos) {
      Search rebuild(grammar, kb, tokens, -1, -1);
      std::vector<int> elements;
      if (rebuild.assign_from(pos, best_end, elements)) {
        results.push_back(build_result(grammar, pos, best_end, elements));
      }
      pos = best_end;
    } else {
      ++pos;
    }
  }
  return results;
}

}  // namespace hscm
