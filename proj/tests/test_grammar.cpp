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

#include <doctest.h>

#include <map>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "hscm/error.hpp"
#include "hscm/grammar/runtime.hpp"
#include "test_support.hpp"

using namespace hscm;
using hscm_test::empty_kb_doc;
using hscm_test::load_doc;
using hscm_test::pack;

namespace {

TokenView word(const std::string &text) { return {text, "", ""}; }

GrammarSpec literal_grammar(const std::string &id,
                            const std::vector<std::pair<std::string, Quantifier>> &elements) {
  GrammarSpec g;
  g.id = id;
  for (const auto &[text, quantifier] : elements) {
    Matcher m;
    m.constraint = {Constraint::Kind::kLiteral, text, NodeKind::kOntologicPrimitive};
    m.quantifier = quantifier;
    g.elements.push_back(m);
  }
  return g;
}

// Independent brute-force enumeration of every extent an abstract grammar can
// match, tracking whether the anchor token was consumed by the anchor
// element. This is the oracle match_at and match_floating are checked
// against.
void brute_ends(const GrammarSpec &g, const KnowledgeBase &kb, std::span<const TokenView> tokens,
                size_t element, int pos, bool anchor_ok, int anchor_pos, int anchor_element,
                std::set<std::pair<int, bool>> &ends) {
  if (element == g.elements.size()) {
    ends.insert({pos, anchor_ok});
    return;
  }
  const Matcher &m = g.elements[element];
  int min_count = 0;
  int max_count = -1;  // unbounded
  switch (m.quantifier) {
    case Quantifier::kExactlyOne: min_count = 1; max_count = 1; break;
    case Quantifier::kOptional: min_count = 0; max_count = 1; break;
    case Quantifier::kZeroOrMore: min_count = 0; break;
    case Quantifier::kOneOrMore: min_count = 1; break;
  }
  int consumed = 0;
  bool covered = anchor_ok;
  while (true) {
    if (consumed >= min_count && (max_count < 0 || consumed <= max_count)) {
      brute_ends(g, kb, tokens, element + 1, pos + consumed, covered, anchor_pos, anchor_element,
                 ends);
    }
    const int p = pos + consumed;
    if (p >= static_cast<int>(tokens.size())) break;
    if (max_count >= 0 && consumed + 1 > max_count) break;
    if (!constraint_matches(m.constraint, kb, tokens[p])) break;
    if (p == anchor_pos &&
        (anchor_element < 0 || static_cast<int>(element) == anchor_element)) {
      covered = true;
    }
    ++consumed;
  }
}

std::optional<std::pair<int, int>> brute_match_at(const GrammarSpec &g, const KnowledgeBase &kb,
                                                  std::span<const TokenView> tokens, int anchor) {
  const int anchor_element = g.anchor_index.has_value() ? *g.anchor_index : -1;
  int best_start = -1, best_end = -1;
  for (int start = 0; start <= anchor; ++start) {
    std::set<std::pair<int, bool>> ends;
    brute_ends(g, kb, tokens, 0, start, false, anchor, anchor_element, ends);
    for (const auto &[end, covered] : ends) {
      if (end <= anchor || !covered) continue;
      if (end - start > best_end - best_start) {
        best_start = start;
        best_end = end;
      }
    }
  }
  if (best_start < 0) return std::nullopt;
  return std::make_pair(best_start, best_end);
}

std::vector<std::pair<int, int>> brute_match_floating(const GrammarSpec &g,
                                                      const KnowledgeBase &kb,
                                                      std::span<const TokenView> tokens) {
  std::vector<std::pair<int, int>> out;
  int pos = 0;
  const int n = static_cast<int>(tokens.size());
  while (pos < n) {
    std::set<std::pair<int, bool>> ends;
    brute_ends(g, kb, tokens, 0, pos, false, -1, -1, ends);
    int best = pos;
    for (const auto &[end, covered] : ends) {
      (void)covered;
      best = std::max(best, end);
    }
    if (best > pos) {
      out.push_back({pos, best});
      pos = best;
    } else {
      ++pos;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("size grammar compiles to a 3-state machine (subset construction oracle)") {
  const auto &kb = pack();
  const GrammarSpec *spec = kb.find_grammar("g.size_1d");
  REQUIRE(spec != nullptr);
  // Two mandatory elements plus one optional: positions 0..3.
  const CompiledGrammar *compiled = kb.find_compiled("g.size_1d");
  REQUIRE(compiled != nullptr);
  CHECK(compiled->state_count() == 4);

  // The spec's canonical 3-state example: value then unit, both mandatory.
  GrammarSpec size2;
  size2.id = "size2";
  size2.elements = {spec->elements[0], spec->elements[1]};
  size2.anchor_index = 0;
  const CompiledGrammar two = compile_grammar(size2, kb);
  CHECK(two.state_count() == 3);

  // Independent subset construction over the compiled edge relation.
  std::set<std::set<int>> dfa_states;
  std::vector<std::set<int>> frontier{{two.start_state()}};
  dfa_states.insert(frontier.front());
  while (!frontier.empty()) {
    const auto current = frontier.back();
    frontier.pop_back();
    std::map<int, std::set<int>> by_element;
    for (int s : current) {
      for (const auto &edge : two.edges(s)) by_element[edge.element].insert(edge.to);
    }
    for (const auto &[element, next] : by_element) {
      (void)element;
      if (dfa_states.insert(next).second) frontier.push_back(next);
    }
  }
  CHECK(dfa_states.size() == 3);
}

TEST_CASE("empty grammar accepts only the empty range") {
  const auto kb = load_doc(empty_kb_doc());
  GrammarSpec g;
  g.id = "empty";
  const CompiledGrammar compiled = compile_grammar(g, kb);
  CHECK(compiled.accepts_empty());
  const std::vector<TokenView> tokens = {word("a"), word("b")};
  CHECK(!match_at(compiled, kb, tokens, 0).has_value());
  CHECK(match_floating(compiled, kb, tokens).empty());
}

TEST_CASE("unknown node reference fails compilation") {
  const auto kb = load_doc(empty_kb_doc());
  GrammarSpec g;
  g.id = "bad";
  Matcher m;
  m.constraint = {Constraint::Kind::kNode, "NoSuchNode", NodeKind::kOntologicPrimitive};
  g.elements.push_back(m);
  CHECK_THROWS_AS(compile_grammar(g, kb), Error);
  try {
    compile_grammar(g, kb);
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kUnknownReference);
  }
}

TEST_CASE("recursive frame grammar compiles with the flag honored") {
  const CompiledGrammar *compiled = pack().find_compiled("g.mass_frame");
  REQUIRE(compiled != nullptr);
  CHECK(compiled->spec().recursive);
}

TEST_CASE("size matcher binds value and unit at the number anchor") {
  const auto &kb = pack();
  const CompiledGrammar *size = kb.find_compiled("g.size_1d");
  REQUIRE(size != nullptr);
  const std::vector<TokenView> tokens = {
      {"5.5", "number", "number.real"},
      {"cm", "propertyName.length", "property.length.unit"},
  };
  const auto match = match_at(*size, kb, tokens, 0);
  REQUIRE(match.has_value());
  CHECK(match->begin == 0);
  CHECK(match->end == 2);
  REQUIRE(match->bindings.count("length-value"));
  REQUIRE(match->bindings.count("length-units"));
  CHECK(match->bindings.at("length-value") == std::vector<int>{0});
  CHECK(match->bindings.at("length-units") == std::vector<int>{1});

  // Anchoring on the unit cannot satisfy the anchor-marked value element.
  CHECK(!match_at(*size, kb, tokens, 1).has_value());
}

TEST_CASE("optional trailing element extends the match greedily") {
  const auto kb = load_doc(empty_kb_doc());
  auto g = literal_grammar("opt", {{"a", Quantifier::kExactlyOne}, {"b", Quantifier::kOptional}});
  const CompiledGrammar compiled = compile_grammar(g, kb);
  const std::vector<TokenView> tokens = {word("a"), word("b")};
  const auto match = match_at(compiled, kb, tokens, 0);
  REQUIRE(match.has_value());
  CHECK(match->end == 2);  // the longer of the two possible extents
}

TEST_CASE("floating existence matcher finds non-overlapping phrases left to right") {
  const auto &kb = pack();
  const CompiledGrammar *existence = kb.find_compiled("g.existence");
  REQUIRE(existence != nullptr);

  const std::vector<TokenView> ex1 = {word("there"), word("is"),   word("a"),    word("5.5"),
                                      word("cm"),    word("mass"), word("in"),   word("the"),
                                      word("left"),  word("upper"), word("lobe")};
  auto matches = match_floating(*existence, kb, ex1);
  REQUIRE(matches.size() == 1);
  CHECK(matches[0].begin == 0);
  CHECK(matches[0].end == 2);

  CHECK(match_floating(*existence, kb, std::vector<TokenView>{}).empty());

  const std::vector<TokenView> two = {word("there"), word("is"), word("x"), word("there"),
                                      word("is")};
  matches = match_floating(*existence, kb, two);
  REQUIRE(matches.size() == 2);
  CHECK(matches[0].begin == 0);
  CHECK(matches[1].begin == 3);
}

// Oracle agreement: for random small grammars over a 3-letter alphabet and
// random token sequences, match_at and match_floating agree with the
// brute-force enumeration of all substring assignments.
TEST_CASE("random grammars agree with the brute-force oracle") {
  const auto kb = load_doc(empty_kb_doc());
  std::mt19937 rng(97531);
  const std::vector<std::string> alphabet = {"a", "b", "c"};
  const std::vector<Quantifier> quantifiers = {Quantifier::kExactlyOne, Quantifier::kOptional,
                                               Quantifier::kZeroOrMore, Quantifier::kOneOrMore};

  for (int iter = 0; iter < 400; ++iter) {
    GrammarSpec g;
    g.id = "r" + std::to_string(iter);
    const int element_count = 1 + static_cast<int>(rng() % 4);
    std::vector<int> mandatory;
    for (int e = 0; e < element_count; ++e) {
      Matcher m;
      m.constraint = {Constraint::Kind::kLiteral, alphabet[rng() % 3],
                      NodeKind::kOntologicPrimitive};
      m.quantifier = quantifiers[rng() % 4];
      if (rng() % 3 == 0) m.capture = "s" + std::to_string(e);
      if (m.quantifier == Quantifier::kExactlyOne || m.quantifier == Quantifier::kOneOrMore) {
        mandatory.push_back(e);
      }
      g.elements.push_back(m);
    }
    if (!mandatory.empty() && rng() % 2 == 0) {
      g.anchor_index = mandatory[rng() % mandatory.size()];
    }
    const CompiledGrammar compiled = compile_grammar(g, kb);

    std::vector<TokenView> tokens;
    const int token_count = static_cast<int>(rng() % 7);
    for (int t = 0; t < token_count; ++t) tokens.push_back(word(alphabet[rng() % 3]));

    for (int anchor = 0; anchor < token_count; ++anchor) {
      CAPTURE(iter);
      CAPTURE(anchor);
      const auto expected = brute_match_at(g, kb, tokens, anchor);
      const auto actual = match_at(compiled, kb, tokens, anchor);
      REQUIRE(actual.has_value() == expected.has_value());
      if (actual.has_value()) {
        CHECK(actual->begin == expected->first);
        CHECK(actual->end == expected->second);
        // Containment: bindings reference tokens inside the range, and each
        // bound token satisfies its element's constraint.
        for (const auto &[slot, positions] : actual->bindings) {
          (void)slot;
          for (int p : positions) {
            CHECK(p >= actual->begin);
            CHECK(p < actual->end);
          }
        }
      }
    }

    const auto expected_floating = brute_match_floating(g, kb, tokens);
    const auto actual_floating = match_floating(compiled, kb, tokens);
    REQUIRE(actual_floating.size() == expected_floating.size());
    for (size_t i = 0; i < actual_floating.size(); ++i) {
      CHECK(actual_floating[i].begin == expected_floating[i].first);
      CHECK(actual_floating[i].end == expected_floating[i].second);
    }
  }
}

TEST_CASE("isa constraints resolve through gen-spec links") {
  const auto &kb = pack();
  const CompiledGrammar *desc = kb.find_compiled("g.anatomy_description");
  REQUIRE(desc != nullptr);
  const std::vector<TokenView> tokens = {
      {"the", "pos.defin_art", ""},
      {"right lung", "", "LungAnatomy"},  // subclass of AnatomyConcept
  };
  const auto match = match_at(*desc, kb, tokens, 1);
  REQUIRE(match.has_value());
  CHECK(match->begin == 0);
  CHECK(match->end == 2);
  CHECK(match->bindings.at("body") == std::vector<int>{1});
}
