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

#include "hscm/parse/engine.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "hscm/error.hpp"
#include "hscm/grammar/runtime.hpp"
#include "hscm/text/lexical.hpp"
#include "hscm/text/tokenize.hpp"

namespace hscm {

const char *to_string(DecisionAction action) {
  switch (action) {
    case DecisionAction::kAccepted: return "accepted";
    case DecisionAction::kRejected: return "rejected";
    case DecisionAction::kUnresolved: return "unresolved";
  }
  return "?";
}

namespace {

std::vector<TokenView> make_views(std::span<const Token> tokens) {
  std::vector<TokenView> views;
  views.reserve(tokens.size());
  for (const auto &token : tokens) {
    views.push_back({token.text, token.l1_class, token.node ? token.node->node_id : ""});
  }
  return views;
}

int position_of(std::span<const Token> tokens, int token_id) {
  for (int i = 0; i < static_cast<int>(tokens.size()); ++i) {
    if (tokens[i].id == token_id) return i;
  }
  return -1;
}

std::string range_text(std::span<const Token> tokens, int begin, int end) {
  std::string text;
  for (int i = begin; i < end; ++i) {
    if (i > begin) text += ' ';
    text += tokens[i].text;
  }
  return text;
}

// Freezes a hypothesis's trigger context for the re-activation memo: the
// trigger tokens' spans and nodes plus the surrounding level's token
// configuration. A failed test is skipped only while that whole context is
// unchanged; any acceptance elsewhere re-enables the hypothesis, since a
// grammar may scan tokens far from its trigger.
std::string trigger_signature(const std::string &target, std::span<const Token> tokens,
                              const std::vector<int> &trigger_ids) {
  std::ostringstream sig;
  sig << target;
  std::vector<int> positions;
  for (int id : trigger_ids) positions.push_back(position_of(tokens, id));
  std::sort(positions.begin(), positions.end());
  for (int p : positions) {
    if (p < 0) continue;
    const Token &t = tokens[p];
    sig << '|' << t.span_begin << ':' << t.span_end << ':'
        << (t.node ? t.node->node_id : "");
  }
  sig << '#';
  for (const Token &t : tokens) {
    sig << t.span_begin << ':' << t.span_end << ':' << (t.node ? t.node->node_id : "") << ';';
  }
  return sig.str();
}

}  // namespace

std::vector<Hypothesis> generate(const KnowledgeBase &kb, std::span<const Token> tokens,
                                 const ContextProfile &context, int first_hypothesis_id) {
  const std::vector<TokenView> views = make_views(tokens);
  const auto seeds = query_hypotheses(kb, views, context);
  std::vector<Hypothesis> hypotheses;
  hypotheses.reserve(seeds.size());
  int id = first_hypothesis_id;
  for (const auto &seed : seeds) {
    Hypothesis h;
    h.id = id++;
    h.target_node_id = seed.target_node_id;
    for (int pos : seed.trigger_tokens) h.trigger_tokens.push_back(tokens[pos].id);
    h.kind = seed.kind;
    h.prior = seed.prior;
    hypotheses.push_back(std::move(h));
  }
  return hypotheses;
}

TestReport test(const KnowledgeBase &kb, const Hypothesis &hypothesis,
                std::span<const Token> tokens) {
  TestReport report;
  report.hypothesis_id = hypothesis.id;

  const CompiledGrammar *grammar = kb.effective_grammar(hypothesis.target_node_id);
  if (grammar == nullptr) {
    report.failure_reason = "missing grammar: node '" + hypothesis.target_node_id +
                            "' and its superclasses define none";
    return report;
  }

  const std::vector<TokenView> views = make_views(tokens);
  std::vector<MatchResult> matches;
  if (hypothesis.kind == TriggerKind::kFloating) {
    matches = match_floating(*grammar, kb, views);
  } else {
    for (int trigger_id : hypothesis.trigger_tokens) {
      int anchor = position_of(tokens, trigger_id);
      if (anchor < 0) continue;
      if (auto match = match_at(*grammar, kb, views, anchor)) {
        bool duplicate = false;
        for (const auto &m : matches) {
          if (m.begin == match->begin && m.end == match->end) duplicate = true;
        }
        if (!duplicate) matches.push_back(std::move(*match));
      }
    }
  }

  if (matches.empty()) {
    report.failure_reason = "no match at anchor";
    return report;
  }

  // Matches that leave a mandatory slot of the target unbound are rejected
  // at instantiation time, which is here.
  const SemanticNode *node = kb.find_node(hypothesis.target_node_id);
  std::vector<MatchResult> admitted;
  for (auto &match : matches) {
    bool ok = true;
    if (node != nullptr) {
      for (const auto &slot : node->slots) {
        if (slot.cardinality == Cardinality::kOne && !match.bindings.count(slot.name)) {
          ok = false;
          break;
        }
      }
    }
    if (ok) admitted.push_back(std::move(match));
  }
  if (admitted.empty()) {
    report.failure_reason = "mandatory slot unbound";
    return report;
  }
  report.success = true;
  report.matches = std::move(admitted);
  return report;
}

namespace {

struct Candidate {
  int hypothesis_index;
  MatchResult match;
  InstanceRef instance;
};

bool conflicts(const Candidate &a, const Candidate &b) {
  return a.match.begin < b.match.end && b.match.begin < a.match.end;
}

std::string describe(const Candidate &c) {
  return "'" + c.instance.node_id + "'[" + std::to_string(c.match.begin) + "," +
         std::to_string(c.match.end) + ")";
}

}  // namespace

AdjudicationResult adjudicate(const KnowledgeBase &kb, std::span<const Hypothesis> hypotheses,
                              std::span<const TestReport> reports, std::span<const Token> tokens,
                              const EngineMemo *memo) {
  AdjudicationResult result;

  std::map<int, int> hypothesis_by_id;
  for (int i = 0; i < static_cast<int>(hypotheses.size()); ++i) {
    hypothesis_by_id[hypotheses[i].id] = i;
  }

  // Collect candidates from successful reports, dropping no-ops, repeats and
  // recursion-bound violations up front.
  std::vector<Candidate> candidates;
  for (const auto &report : reports) {
    if (!report.success) continue;
    const Hypothesis &hyp = hypotheses[hypothesis_by_id.at(report.hypothesis_id)];
    const SemanticNode *node = kb.find_node(hyp.target_node_id);
    for (const auto &match : report.matches) {
      auto reject = [&](const std::string &reason) {
        result.decisions.push_back({DecisionAction::kRejected, hyp.id, hyp.target_node_id,
                                    match.begin, match.end, reason, -1});
      };
      if (match.end - match.begin == 1 && tokens[match.begin].node &&
          tokens[match.begin].node->node_id == hyp.target_node_id) {
        reject("no-op: token already carries '" + hyp.target_node_id + "'");
        continue;
      }
      const int span_begin = tokens[match.begin].span_begin;
      const int span_end = tokens[match.end - 1].span_end;
      if (memo != nullptr &&
          memo->instantiated.count({span_begin, span_end, hyp.target_node_id})) {
        reject("'" + hyp.target_node_id + "' already instantiated over this span");
        continue;
      }
      int nest = 1;
      for (int p = match.begin; p < match.end; ++p) {
        if (tokens[p].node && tokens[p].node->node_id == hyp.target_node_id) {
          nest = std::max(nest, tokens[p].self_nest_depth + 1);
        }
      }
      if (nest > kb.config.max_recursion_depth) {
        reject("recursion depth exceeded");
        continue;
      }

      Candidate c;
      c.hypothesis_index = hypothesis_by_id.at(report.hypothesis_id);
      c.match = match;
      c.instance.node_id = hyp.target_node_id;
      c.instance.layer = node != nullptr ? node->layer : 2;
      c.instance.kind = node != nullptr ? node->kind : NodeKind::kOntologicPrimitive;
      c.instance.begin = match.begin;
      c.instance.end = match.end;
      int trigger_pos = -1;
      for (int id : hyp.trigger_tokens) {
        int pos = position_of(tokens, id);
        if (pos >= 0 && (trigger_pos < 0 || pos < trigger_pos)) trigger_pos = pos;
      }
      c.instance.trigger_pos = trigger_pos >= 0 ? trigger_pos : match.begin;
      c.instance.prior = hyp.prior;
      candidates.push_back(std::move(c));
    }
  }

  std::stable_sort(candidates.begin(), candidates.end(), [&](const Candidate &a, const Candidate &b) {
    if (a.match.begin != b.match.begin) return a.match.begin < b.match.begin;
    if (a.match.end != b.match.end) return a.match.end > b.match.end;
    if (a.instance.node_id != b.instance.node_id) return a.instance.node_id < b.instance.node_id;
    return hypotheses[a.hypothesis_index].id < hypotheses[b.hypothesis_index].id;
  });

  // Unresolved conflicting pairs drop out first, both sides, and are logged
  // as model inconsistencies.
  std::vector<char> removed(candidates.size(), 0);
  for (size_t i = 0; i < candidates.size(); ++i) {
    for (size_t j = i + 1; j < candidates.size(); ++j) {
      if (!conflicts(candidates[i], candidates[j])) continue;
      if (query_precedence(kb, candidates[i].instance, candidates[j].instance) ==
          PrecedenceAnswer::kUnresolved) {
        for (size_t k : {i, j}) {
          if (removed[k]) continue;
          removed[k] = 1;
          const Candidate &c = candidates[k];
          const Candidate &other = candidates[k == i ? j : i];
          result.decisions.push_back({DecisionAction::kUnresolved,
                                      hypotheses[c.hypothesis_index].id, c.instance.node_id,
                                      c.match.begin, c.match.end,
                                      "unresolved conflict with " + describe(other), -1});
        }
      }
    }
  }

  // Greedy acceptance: repeatedly take every candidate that defeats all of
  // its remaining conflictors, then reject what it overlaps.
  std::vector<size_t> active;
  for (size_t i = 0; i < candidates.size(); ++i) {
    if (!removed[i]) active.push_back(i);
  }
  auto beats = [&](size_t x, size_t y) {
    return query_precedence(kb, candidates[x].instance, candidates[y].instance) ==
           PrecedenceAnswer::kPreferA;
  };
  while (!active.empty()) {
    std::vector<size_t> winners;
    for (size_t x : active) {
      bool undominated = true;
      for (size_t y : active) {
        if (x == y || !conflicts(candidates[x], candidates[y])) continue;
        if (!beats(x, y)) {
          undominated = false;
          break;
        }
      }
      if (undominated) winners.push_back(x);
    }
    if (winners.empty()) {
      // Dominance cycle through explicit rules; break by most pairwise wins,
      // then canonical order.
      size_t best = active.front();
      int best_wins = -1;
      for (size_t x : active) {
        int wins = 0;
        for (size_t y : active) {
          if (x != y && conflicts(candidates[x], candidates[y]) && beats(x, y)) ++wins;
        }
        if (wins > best_wins) {
          best_wins = wins;
          best = x;
        }
      }
      winners.push_back(best);
    }
    std::vector<char> gone(candidates.size(), 0);
    for (size_t w : winners) {
      const Candidate &c = candidates[w];
      result.decisions.push_back({DecisionAction::kAccepted, hypotheses[c.hypothesis_index].id,
                                  c.instance.node_id, c.match.begin, c.match.end, "", -1});
      AcceptedMatch accepted;
      accepted.hypothesis_id = hypotheses[c.hypothesis_index].id;
      accepted.node_id = c.instance.node_id;
      accepted.match = c.match;
      accepted.prior = c.instance.prior;
      accepted.trigger_pos = c.instance.trigger_pos;
      result.accepted.push_back(std::move(accepted));
      gone[w] = 1;
    }
    std::vector<size_t> remaining;
    for (size_t x : active) {
      if (gone[x]) continue;
      bool lost = false;
      for (size_t w : winners) {
        if (conflicts(candidates[x], candidates[w])) {
          result.decisions.push_back({DecisionAction::kRejected,
                                      hypotheses[candidates[x].hypothesis_index].id,
                                      candidates[x].instance.node_id, candidates[x].match.begin,
                                      candidates[x].match.end,
                                      "lost precedence to " + describe(candidates[w]), -1});
          lost = true;
          break;
        }
      }
      if (!lost) remaining.push_back(x);
    }
    active = std::move(remaining);
  }

  std::sort(result.accepted.begin(), result.accepted.end(),
            [](const AcceptedMatch &a, const AcceptedMatch &b) {
              return a.match.begin < b.match.begin;
            });
  return result;
}

std::vector<Token> build_next(const KnowledgeBase &kb, std::span<const Token> tokens,
                              std::vector<AcceptedMatch> &accepted, int next_level,
                              int &next_token_id) {
  (void)kb;
  std::vector<Token> next;
  std::map<int, AcceptedMatch *> starts;
  for (auto &match : accepted) starts[match.match.begin] = &match;

  int pos = 0;
  const int n = static_cast<int>(tokens.size());
  while (pos < n) {
    auto it = starts.find(pos);
    if (it != starts.end()) {
      AcceptedMatch &acc = *it->second;
      const int begin = acc.match.begin;
      const int end = acc.match.end;
      Token token;
      token.id = next_token_id++;
      token.level = next_level;
      token.span_begin = tokens[begin].span_begin;
      token.span_end = tokens[end - 1].span_end;
      token.text = range_text(tokens, begin, end);
      if (end - begin == 1) {
        token.l1_class = tokens[begin].l1_class;
        token.pos = tokens[begin].pos;
      }
      NodeInstance instance;
      instance.node_id = acc.node_id;
      for (const auto &[slot, positions] : acc.match.bindings) {
        for (int p : positions) instance.slots[slot].push_back(tokens[p].id);
      }
      token.node = std::move(instance);
      for (int p = begin; p < end; ++p) {
        token.children.push_back(tokens[p].id);
        if (tokens[p].node && tokens[p].node->node_id == acc.node_id) {
          token.self_nest_depth = std::max(token.self_nest_depth, tokens[p].self_nest_depth + 1);
        }
      }
      acc.produced_token = token.id;
      next.push_back(std::move(token));
      pos = end;
    } else {
      // Percolate untouched tokens to the next level as residuals.
      Token token = tokens[pos];
      token.id = next_token_id++;
      token.level = next_level;
      token.children = {tokens[pos].id};
      token.residual = true;
      next.push_back(std::move(token));
      ++pos;
    }
  }
  return next;
}

LevelOutcome run_level(const KnowledgeBase &kb, std::span<const Token> tokens, int level,
                       const ContextProfile &context, EngineMemo &memo, int &next_token_id,
                       const ParseOptions &options) {
  LevelOutcome outcome;
  outcome.record.level = level;
  outcome.record.input.assign(tokens.begin(), tokens.end());

  // Generation, minus hypotheses whose identical trigger context already
  // failed at an earlier level.
  std::vector<Hypothesis> hypotheses;
  for (auto &hyp : generate(kb, tokens, context)) {
    if (hyp.kind != TriggerKind::kFloating &&
        memo.failed_tests.count(
            {hyp.target_node_id, trigger_signature(hyp.target_node_id, tokens,
                                                   hyp.trigger_tokens)})) {
      continue;
    }
    hypotheses.push_back(std::move(hyp));
  }

  // Dispatch agents; order is irrelevant to the outcome and may be shuffled.
  std::vector<int> order(hypotheses.size());
  std::iota(order.begin(), order.end(), 0);
  if (options.agent_shuffle_seed.has_value()) {
    std::mt19937_64 rng(*options.agent_shuffle_seed);
    std::shuffle(order.begin(), order.end(), rng);
  }
  std::vector<TestReport> reports(hypotheses.size());
  for (int index : order) {
    reports[index] = test(kb, hypotheses[index], tokens);
  }

  for (size_t i = 0; i < hypotheses.size(); ++i) {
    if (!reports[i].success && hypotheses[i].kind != TriggerKind::kFloating) {
      memo.failed_tests.insert(
          {hypotheses[i].target_node_id,
           trigger_signature(hypotheses[i].target_node_id, tokens, hypotheses[i].trigger_tokens)});
    }
  }

  AdjudicationResult adjudication = adjudicate(kb, hypotheses, reports, tokens, &memo);
  outcome.any_accepted = !adjudication.accepted.empty();

  outcome.next = build_next(kb, tokens, adjudication.accepted, level + 1, next_token_id);

  for (const auto &acc : adjudication.accepted) {
    memo.instantiated.insert({tokens[acc.match.begin].span_begin,
                              tokens[acc.match.end - 1].span_end, acc.node_id});
    for (auto &decision : adjudication.decisions) {
      if (decision.action == DecisionAction::kAccepted &&
          decision.hypothesis_id == acc.hypothesis_id && decision.range_begin == acc.match.begin &&
          decision.range_end == acc.match.end) {
        decision.produced_token = acc.produced_token;
      }
    }
  }

  outcome.record.hypotheses = std::move(hypotheses);
  outcome.record.reports = std::move(reports);
  outcome.record.decisions = std::move(adjudication.decisions);
  outcome.record.output = outcome.next;
  return outcome;
}

namespace {

// Effective slot bindings of a token, flattening self-recursive nesting:
// inner instances of the same node contribute their bindings first. A
// percolated copy carries the same instance as its single child, so it
// defers entirely to the child to avoid double counting.
void effective_bindings(const std::map<int, Token> &registry, const Token &token,
                        std::vector<std::pair<std::string, int>> &out) {
  if (!token.node) return;
  if (token.residual && token.children.size() == 1) {
    auto it = registry.find(token.children.front());
    if (it != registry.end() && it->second.node &&
        it->second.node->node_id == token.node->node_id) {
      effective_bindings(registry, it->second, out);
      return;
    }
  }
  for (int child_id : token.children) {
    auto it = registry.find(child_id);
    if (it == registry.end()) continue;
    const Token &child = it->second;
    if (child.node && child.node->node_id == token.node->node_id) {
      effective_bindings(registry, child, out);
    }
  }
  for (const auto &[slot, ids] : token.node->slots) {
    for (int id : ids) out.push_back({slot, id});
  }
}

FrameNode make_frame(const KnowledgeBase &kb, const std::map<int, Token> &registry,
                     const Token &token) {
  FrameNode frame;
  frame.token_id = token.id;
  frame.span_begin = token.span_begin;
  frame.span_end = token.span_end;
  frame.text = token.text;
  if (!token.node) return frame;

  frame.node_id = token.node->node_id;
  const SemanticNode *node = kb.find_node(token.node->node_id);
  frame.label = node != nullptr ? node->label : token.node->node_id;

  std::vector<std::pair<std::string, int>> bindings;
  effective_bindings(registry, token, bindings);

  // Group by slot in the node's declaration order; unknown slot names
  // (inherited grammars) follow in first-seen order.
  std::vector<std::string> slot_order;
  if (node != nullptr) {
    for (const auto &slot : node->slots) slot_order.push_back(slot.name);
  }
  for (const auto &[slot, id] : bindings) {
    (void)id;
    if (std::find(slot_order.begin(), slot_order.end(), slot) == slot_order.end()) {
      slot_order.push_back(slot);
    }
  }
  for (const auto &slot : slot_order) {
    std::vector<FrameNode> fillers;
    for (const auto &[name, id] : bindings) {
      if (name != slot) continue;
      auto it = registry.find(id);
      if (it != registry.end()) fillers.push_back(make_frame(kb, registry, it->second));
    }
    if (!fillers.empty()) frame.slots.push_back({slot, std::move(fillers)});
  }
  return frame;
}

}  // namespace

ParseTrace parse(const KnowledgeBase &kb, std::string_view sentence, const ContextProfile &context,
                 const ParseOptions &options) {
  ParseTrace trace;
  trace.sentence = std::string(sentence);

  const auto surface = tokenize_l0(sentence);
  const auto functional = lexical_analyze(kb, surface);

  int next_token_id = 0;
  std::vector<Token> tokens;
  for (const auto &ft : functional) {
    Token token;
    token.id = next_token_id++;
    token.level = 2;
    token.span_begin = ft.begin;
    token.span_end = ft.end;
    token.text = ft.text;
    token.l1_class = ft.l1_class;
    token.pos = ft.pos;
    tokens.push_back(std::move(token));
  }
  if (tokens.empty()) return trace;

  std::map<int, Token> registry;
  for (const auto &token : tokens) registry.emplace(token.id, token);

  EngineMemo memo;
  int level = 2;
  while (true) {
    LevelOutcome outcome = run_level(kb, tokens, level, context, memo, next_token_id, options);
    for (const auto &token : outcome.next) registry.emplace(token.id, token);
    trace.levels.push_back(std::move(outcome.record));
    tokens = std::move(outcome.next);
    if (!outcome.any_accepted) break;
    if (static_cast<int>(trace.levels.size()) >= kb.config.max_levels) break;
    ++level;
  }

  // Final frames: top-level propositions/frames/discourse templates.
  // Everything else is a residual, annotated with compatibility attachments.
  std::vector<const Token *> frame_tokens;
  std::vector<const Token *> residual_tokens;
  for (const auto &token : tokens) {
    const SemanticNode *node = token.node ? kb.find_node(token.node->node_id) : nullptr;
    if (node != nullptr && node->kind != NodeKind::kOntologicPrimitive) {
      frame_tokens.push_back(&token);
    } else {
      residual_tokens.push_back(&token);
    }
  }
  for (const Token *token : frame_tokens) {
    trace.frames.push_back(make_frame(kb, registry, *token));
  }
  for (const Token *token : residual_tokens) {
    ResidualEntry entry;
    entry.token_id = token->id;
    entry.text = token->text;
    if (token->node) entry.node_id = token->node->node_id;
    OrphanRef orphan{entry.node_id, token->l1_class};
    for (const Token *anchor : frame_tokens) {
      if (auto slot = query_compatibility(kb, orphan, anchor->node->node_id)) {
        entry.attachments.push_back({anchor->id, anchor->node->node_id, *slot});
      }
    }
    trace.residuals.push_back(std::move(entry));
  }
  return trace;
}

}  // namespace hscm
