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

#ifndef HSCM_GRAMMAR_RUNTIME_HPP_
#define HSCM_GRAMMAR_RUNTIME_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hscm/grammar/spec.hpp"
#include "hscm/kb/model.hpp"
#include "hscm/token_view.hpp"

namespace hscm {

// Epsilon-free finite-state matcher compiled from a GrammarSpec. States are
// element positions (plus one repeat state per starred/plus element);
// transitions are labeled with the element whose constraint they consume.
class CompiledGrammar {
 public:
  struct Edge {
    int element;  // index into spec().elements
    int to;       // target state
  };

  const GrammarSpec &spec() const { return spec_; }
  const std::string &grammar_id() const { return spec_.id; }

  int state_count() const { return static_cast<int>(states_.size()); }
  int start_state() const { return 0; }
  bool accepting(int state) const { return accepting_[state]; }
  const std::vector<Edge> &edges(int state) const { return states_[state]; }

  // Accepts the empty token range (all elements skippable).
  bool accepts_empty() const { return accepting_[0]; }

 private:
  friend CompiledGrammar compile_grammar(const GrammarSpec &, const KnowledgeBase &);

  GrammarSpec spec_;
  std::vector<std::vector<Edge>> states_;
  std::vector<bool> accepting_;
};

// Compiles a validated spec; throws Error{kUnknownReference} when a
// constraint names a node or kind the KB does not define.
CompiledGrammar compile_grammar(const GrammarSpec &spec, const KnowledgeBase &kb);

// True when the token satisfies one element constraint.
bool constraint_matches(const Constraint &c, const KnowledgeBase &kb, const TokenView &token);

// Longest match whose range covers `anchor` (and whose anchor-marked
// element, when the spec names one, consumes the anchor token). Ties on
// length prefer the leftmost start; bindings are chosen greedily left to
// right among parses of the selected extent.
std::optional<MatchResult> match_at(const CompiledGrammar &grammar, const KnowledgeBase &kb,
                                    std::span<const TokenView> tokens, int anchor);

// All non-overlapping leftmost-longest matches, scanning left to right.
// Empty-range matches are skipped.
std::vector<MatchResult> match_floating(const CompiledGrammar &grammar, const KnowledgeBase &kb,
                                        std::span<const TokenView> tokens);

}  // namespace hscm

#endif  // HSCM_GRAMMAR_RUNTIME_HPP_
