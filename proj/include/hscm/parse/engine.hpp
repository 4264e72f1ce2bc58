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

#ifndef HSCM_PARSE_ENGINE_HPP_
#define HSCM_PARSE_ENGINE_HPP_

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "hscm/kb/query.hpp"
#include "hscm/parse/trace.hpp"

namespace hscm {

struct ParseOptions {
  // Dispatch order for hypothesis-testing agents. Results are independent of
  // it by contract; the determinism suite exercises many seeds.
  std::optional<uint64_t> agent_shuffle_seed;
};

// Successful match selected by adjudication, ready for instantiation.
struct AcceptedMatch {
  int hypothesis_id = 0;
  std::string node_id;
  MatchResult match;  // bindings still in level-token positions
  double prior = 1.0;
  int trigger_pos = 0;
  int produced_token = -1;  // filled in by build_next
};

// Cross-level bookkeeping that keeps re-activation and re-instantiation in
// check (and with them, termination).
struct EngineMemo {
  // (target node, trigger signature) pairs whose grammar test failed; a
  // signature freezes each trigger token's span and bound node.
  std::set<std::pair<std::string, std::string>> failed_tests;
  // (char span, node) pairs already instantiated in this parse.
  std::set<std::tuple<int, int, std::string>> instantiated;
};

// Hypothesis generation for one level: query_hypotheses plus deduplication
// by (target, trigger token set), ids assigned in canonical order
// (leftmost trigger, target id; floating first).
std::vector<Hypothesis> generate(const KnowledgeBase &kb, std::span<const Token> tokens,
                                 const ContextProfile &context, int first_hypothesis_id = 0);

// Tests one hypothesis against the level tokens with the target's grammar
// (inherited through the superclass chain when absent). Matches that leave a
// mandatory slot unbound are discarded. Pure; missing grammars become a
// failure reason, not an error.
TestReport test(const KnowledgeBase &kb, const Hypothesis &hypothesis,
                std::span<const Token> tokens);

struct AdjudicationResult {
  std::vector<AcceptedMatch> accepted;  // pairwise non-conflicting, span order
  std::vector<Decision> decisions;      // every candidate's fate, with reasons
};

// Global level assessment: drops no-op and repeat instantiations (when a
// memo is supplied), removes unresolved conflicting pairs, then greedily
// accepts precedence winners; everything conflicting with an accepted match
// is rejected. The accepted set is maximal: every rejected candidate
// conflicts with an accepted one.
AdjudicationResult adjudicate(const KnowledgeBase &kb, std::span<const Hypothesis> hypotheses,
                              std::span<const TestReport> reports, std::span<const Token> tokens,
                              const EngineMemo *memo = nullptr);

// Next-level token sequence: each accepted range becomes one instantiated
// token (children = consumed tokens); untouched tokens percolate with
// residual=true. Char-span order is preserved. `next_token_id` advances as
// ids are assigned; produced token ids are recorded into `accepted`.
std::vector<Token> build_next(const KnowledgeBase &kb, std::span<const Token> tokens,
                              std::vector<AcceptedMatch> &accepted, int next_level,
                              int &next_token_id);

struct LevelOutcome {
  LevelRecord record;
  std::vector<Token> next;
  bool any_accepted = false;
};

// One predictive-coding iteration: generate, test, adjudicate, build next.
LevelOutcome run_level(const KnowledgeBase &kb, std::span<const Token> tokens, int level,
                       const ContextProfile &context, EngineMemo &memo, int &next_token_id,
                       const ParseOptions &options = {});

// Full parse: L0/L1 preprocessing, then levels from 2 until no hypothesis is
// accepted or config.max_levels level records exist. Frames are the final
// proposition/frame/discourse tokens; residuals are the rest, annotated with
// compatibility attachments.
ParseTrace parse(const KnowledgeBase &kb, std::string_view sentence,
                 const ContextProfile &context = {}, const ParseOptions &options = {});

}  // namespace hscm

#endif  // HSCM_PARSE_ENGINE_HPP_
