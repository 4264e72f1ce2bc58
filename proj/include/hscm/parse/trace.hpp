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

#ifndef HSCM_PARSE_TRACE_HPP_
#define HSCM_PARSE_TRACE_HPP_

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hscm/kb/model.hpp"

namespace hscm {

inline constexpr int kTraceVersion = 1;

// Slot values bound at instantiation; every referenced token was consumed by
// (is a child of) the instantiating token.
struct NodeInstance {
  std::string node_id;
  std::map<std::string, std::vector<int>> slots;  // slot name -> child token ids
};

// Leveled constituent. Level 2 tokens stand 1:1 for the L1 functional words;
// higher levels are built by accepted matches (children = consumed tokens)
// or percolation (residual=true, single child).
struct Token {
  int id = 0;
  int level = 2;
  int span_begin = 0;  // byte offsets into the sentence
  int span_end = 0;
  std::string text;    // functional text; joins of children for compositions
  std::string l1_class;
  std::string pos;
  std::optional<NodeInstance> node;
  std::vector<int> children;  // previous-level token ids, contiguous
  bool residual = false;
  int self_nest_depth = 1;  // recursion chain length of same-node children
};

struct Hypothesis {
  int id = 0;
  std::string target_node_id;
  std::vector<int> trigger_tokens;  // token ids at the current level
  TriggerKind kind = TriggerKind::kAnchored;
  double prior = 1.0;
};

struct TestReport {
  int hypothesis_id = 0;
  bool success = false;
  std::vector<MatchResult> matches;  // positions into the level's input
  std::string failure_reason;
};

enum class DecisionAction { kAccepted, kRejected, kUnresolved };

const char *to_string(DecisionAction action);

struct Decision {
  DecisionAction action = DecisionAction::kAccepted;
  int hypothesis_id = 0;
  std::string node_id;
  int range_begin = 0;  // positions into the level's input tokens
  int range_end = 0;
  std::string reason;
  int produced_token = -1;  // output token id for accepted matches
};

struct LevelRecord {
  int level = 2;
  std::vector<Token> input;
  std::vector<Hypothesis> hypotheses;
  std::vector<TestReport> reports;
  std::vector<Decision> decisions;
  std::vector<Token> output;
};

// Final-frame view: one node per integrated constituent with its effective
// slots. Self-recursive nestings are flattened (inner bindings merged into
// the outer frame, inner first).
struct FrameNode {
  int token_id = 0;
  std::string node_id;  // empty for plain-token slot fillers
  std::string label;
  int span_begin = 0;
  int span_end = 0;
  std::string text;
  std::vector<std::pair<std::string, std::vector<FrameNode>>> slots;
};

struct ResidualAttachment {
  int anchor_token = 0;
  std::string anchor_node;
  std::string slot;
};

struct ResidualEntry {
  int token_id = 0;
  std::string text;
  std::string node_id;  // empty for plain tokens
  std::vector<ResidualAttachment> attachments;
};

struct ParseTrace {
  std::string sentence;
  std::vector<LevelRecord> levels;
  std::vector<FrameNode> frames;
  std::vector<ResidualEntry> residuals;
};

}  // namespace hscm

#endif  // HSCM_PARSE_TRACE_HPP_
