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

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "hscm/error.hpp"
#include "hscm/kb/query.hpp"
#include "hscm/text/lexical.hpp"
#include "hscm/text/tokenize.hpp"
#include "test_support.hpp"

using namespace hscm;
using hscm_test::empty_kb_doc;
using hscm_test::load_doc;
using hscm_test::pack;
using ordered_json = nlohmann::ordered_json;

namespace {

std::vector<TokenView> views_of(const KnowledgeBase &kb, const std::string &sentence) {
  std::vector<TokenView> views;
  for (const auto &token : lexical_analyze(kb, tokenize_l0(sentence))) {
    views.push_back({token.text, token.l1_class, ""});
  }
  return views;
}

std::set<std::string> targets_of(const std::vector<HypothesisSeed> &seeds) {
  std::set<std::string> out;
  for (const auto &seed : seeds) out.insert(seed.target_node_id);
  return out;
}

}  // namespace

TEST_CASE("anatomy token activates the anatomy concept hypothesis") {
  const auto seeds = query_hypotheses(pack(), views_of(pack(), "left upper lobe"));
  const auto targets = targets_of(seeds);
  CHECK(targets.count("AnatomyConcept"));
  CHECK(targets.count("direction.concept"));
  CHECK(targets.count("_thereIs"));  // floating fires everywhere
  for (const auto &seed : seeds) {
    if (seed.target_node_id == "AnatomyConcept") {
      CHECK(seed.kind == TriggerKind::kAnchored);
      CHECK(seed.trigger_tokens == std::vector<int>{2});
    }
  }
}

TEST_CASE("mass cascades through the frame to its attribute concepts") {
  const auto seeds = query_hypotheses(pack(), views_of(pack(), "mass"));
  const auto targets = targets_of(seeds);
  CHECK(targets.count("Finding.tumoralMass"));
  CHECK(targets.count("MassDescriptionFrame"));
  // Attribute cascade at depth 2.
  CHECK(targets.count("has_1DSizeDescription"));
  CHECK(targets.count("shape.value"));
  CHECK(targets.count("density.value"));
  CHECK(targets.count("border.spiculated"));
  for (const auto &seed : seeds) {
    if (seed.target_node_id == "MassDescriptionFrame") {
      CHECK(seed.kind == TriggerKind::kCascading);
    }
  }
}

TEST_CASE("bone mass density suppresses the tumoral-mass hypothesis") {
  const auto seeds = query_hypotheses(pack(), views_of(pack(), "bone mass density"));
  const auto targets = targets_of(seeds);
  CHECK(!targets.count("Finding.tumoralMass"));
  CHECK(!targets.count("MassDescriptionFrame"));  // no cascade from a vetoed activation
}

TEST_CASE("suppression only vetoes triggers inside the pattern window") {
  const auto seeds = query_hypotheses(pack(), views_of(pack(), "mass bone mass density"));
  std::vector<std::vector<int>> mass_triggers;
  for (const auto &seed : seeds) {
    if (seed.target_node_id == "Finding.tumoralMass") mass_triggers.push_back(seed.trigger_tokens);
  }
  REQUIRE(mass_triggers.size() == 1);
  CHECK(mass_triggers[0] == std::vector<int>{0});  // the standalone "mass" survives
}

TEST_CASE("context profile swaps in the specialized hypothesis") {
  const auto general = query_hypotheses(pack(), views_of(pack(), "lobe"));
  CHECK(targets_of(general).count("AnatomyConcept"));
  CHECK(!targets_of(general).count("anatomy.liver"));

  const auto special = query_hypotheses(pack(), views_of(pack(), "lobe"), {"domain=hepatology"});
  CHECK(targets_of(special).count("anatomy.liver"));
  CHECK(!targets_of(special).count("AnatomyConcept"));  // specialization replaces the general
}

TEST_CASE("hypothesis queries are deterministic") {
  const auto views = views_of(pack(), "There is a 5.5cm mass in the left upper lobe.");
  const auto first = query_hypotheses(pack(), views);
  const auto second = query_hypotheses(pack(), views);
  REQUIRE(first.size() == second.size());
  for (size_t i = 0; i < first.size(); ++i) {
    CHECK(first[i].target_node_id == second[i].target_node_id);
    CHECK(first[i].trigger_tokens == second[i].trigger_tokens);
    CHECK(first[i].kind == second[i].kind);
  }
}

TEST_CASE("unknown-token ranking multiplies left and right bigram counts") {
  auto doc = empty_kb_doc();
  doc["sequence_model"]["bigrams"] = ordered_json::parse(R"({
    "number": {"propertyName.length": 5},
    "propertyName.length": {"physobj.finding": 3}
  })");
  const auto kb = load_doc(doc);
  const std::vector<std::string> classes = {"number", kUnknownL1Class, "physobj.finding"};
  const auto ranking = query_unknown_assignment(kb, classes, 1);
  REQUIRE(ranking.size() == 1);
  CHECK(ranking[0].first == "propertyName.length");
  CHECK(ranking[0].second == 15);
}

TEST_CASE("all-zero sequence model ranks nothing") {
  const auto kb = load_doc(empty_kb_doc());
  const std::vector<std::string> classes = {kUnknownL1Class};
  CHECK(query_unknown_assignment(kb, classes, 0).empty());
}

TEST_CASE("sentence boundaries use the sentinel class") {
  auto doc = empty_kb_doc();
  doc["sequence_model"]["bigrams"] = ordered_json::parse(R"({
    "_SENTINEL": {"pos.indef_art": 2},
    "pos.indef_art": {"physobj.finding": 4}
  })");
  const auto kb = load_doc(doc);
  const std::vector<std::string> classes = {kUnknownL1Class, "physobj.finding"};
  const auto ranking = query_unknown_assignment(kb, classes, 0);
  REQUIRE(!ranking.empty());
  CHECK(ranking[0].first == "pos.indef_art");
  CHECK(ranking[0].second == 8);
}

TEST_CASE("unknown-token index is validated") {
  const auto kb = load_doc(empty_kb_doc());
  const std::vector<std::string> classes = {"a"};
  CHECK_THROWS_AS(query_unknown_assignment(kb, classes, 5), Error);
}

TEST_CASE("random sequence models agree with a direct product oracle") {
  std::mt19937 rng(1337);
  const std::vector<std::string> class_pool = {"c.a", "c.b", "c.c", "_SENTINEL"};
  for (int iter = 0; iter < 100; ++iter) {
    auto doc = empty_kb_doc();
    ordered_json bigrams = ordered_json::object();
    for (const auto &left : class_pool) {
      for (const auto &right : class_pool) {
        if (rng() % 2 == 0) bigrams[left][right] = static_cast<int>(rng() % 5);
      }
    }
    doc["sequence_model"]["bigrams"] = bigrams;
    const auto kb = load_doc(doc);

    std::vector<std::string> classes;
    const int n = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < n; ++i) classes.push_back(class_pool[rng() % 3]);
    const int index = static_cast<int>(rng() % n);
    classes[index] = kUnknownL1Class;

    const auto ranking = query_unknown_assignment(kb, classes, index);
    const std::string left = index == 0 ? "_SENTINEL" : classes[index - 1];
    const std::string right = index == n - 1 ? "_SENTINEL" : classes[index + 1];
    long long best = 0;
    for (const auto &candidate : class_pool) {
      if (candidate == "_SENTINEL") continue;
      best = std::max(best, kb.sequence_model.count(left, candidate) *
                                kb.sequence_model.count(candidate, right));
    }
    if (best == 0) {
      CHECK(ranking.empty());
    } else {
      REQUIRE(!ranking.empty());
      CHECK(ranking[0].second == best);
      for (size_t i = 1; i < ranking.size(); ++i) {
        CHECK(ranking[i - 1].second >= ranking[i].second);
      }
    }
  }
}

namespace {

InstanceRef instance(const KnowledgeBase &kb, const std::string &node, int begin, int end,
                     double prior = 1.0) {
  InstanceRef ref;
  ref.node_id = node;
  const SemanticNode *n = kb.find_node(node);
  REQUIRE(n != nullptr);
  ref.layer = n->layer;
  ref.kind = n->kind;
  ref.begin = begin;
  ref.end = end;
  ref.trigger_pos = begin;
  ref.prior = prior;
  return ref;
}

}  // namespace

TEST_CASE("longer span wins over contained single tokens") {
  const auto &kb = pack();
  const auto phrase = instance(kb, "AnatomyConcept", 0, 3);
  const auto single = instance(kb, "direction.concept", 0, 1);
  CHECK(query_precedence(kb, phrase, single) == PrecedenceAnswer::kPreferA);
  CHECK(query_precedence(kb, single, phrase) == PrecedenceAnswer::kPreferB);
}

TEST_CASE("identical instances are unresolved") {
  const auto &kb = pack();
  const auto a = instance(kb, "direction.concept", 2, 3);
  const auto b = instance(kb, "direction.concept", 2, 3);
  CHECK(query_precedence(kb, a, b) == PrecedenceAnswer::kUnresolved);
}

TEST_CASE("explicit rule overrides the layer default on partial overlap") {
  const auto &kb = pack();
  const auto spatial = instance(kb, "SpatialRelation", 2, 4);
  const auto perturbation = instance(kb, "AnatomyPerturbationFrame", 3, 5);
  // Without the rule the higher layer (the frame) would win.
  CHECK(query_precedence(kb, spatial, perturbation) == PrecedenceAnswer::kPreferA);
}

TEST_CASE("disjoint instances are not in conflict") {
  const auto &kb = pack();
  const auto a = instance(kb, "direction.concept", 0, 1);
  const auto b = instance(kb, "direction.concept", 2, 3);
  CHECK_THROWS_AS(query_precedence(kb, a, b), Error);
  try {
    query_precedence(kb, a, b);
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kNotInConflict);
  }
}

TEST_CASE("higher prior breaks an otherwise exact tie") {
  const auto &kb = pack();
  const auto a = instance(kb, "direction.concept", 2, 3, 2.0);
  const auto b = instance(kb, "locative.preposition", 2, 3, 1.0);
  CHECK(query_precedence(kb, a, b) == PrecedenceAnswer::kPreferA);
}

TEST_CASE("strict containment always prefers the longer instance (property)") {
  const auto &kb = pack();
  std::mt19937 rng(7);
  const std::vector<std::string> nodes = {"AnatomyConcept", "direction.concept",
                                          "density.value", "GrowthDescription"};
  for (int iter = 0; iter < 200; ++iter) {
    const int outer_begin = static_cast<int>(rng() % 4);
    const int outer_len = 2 + static_cast<int>(rng() % 4);
    const int inner_begin = outer_begin + static_cast<int>(rng() % (outer_len - 1));
    const int inner_len = 1 + static_cast<int>(rng() % (outer_begin + outer_len - inner_begin - 1));
    REQUIRE(inner_len < outer_len);
    const auto outer = instance(kb, nodes[rng() % nodes.size()], outer_begin,
                                outer_begin + outer_len);
    const auto inner = instance(kb, nodes[rng() % nodes.size()], inner_begin,
                                inner_begin + inner_len);
    CHECK(query_precedence(kb, outer, inner) == PrecedenceAnswer::kPreferA);
  }
}

TEST_CASE("compatibility finds the border slot for spiculated margins") {
  const auto slot = query_compatibility(pack(), {"border.spiculated", ""}, "MassDescriptionFrame");
  REQUIRE(slot.has_value());
  CHECK(*slot == "border");
}

TEST_CASE("compatibility admits by l1 prefix too") {
  const auto slot =
      query_compatibility(pack(), {"", "propertyValue.border"}, "MassDescriptionFrame");
  REQUIRE(slot.has_value());
  CHECK(*slot == "border");
}

TEST_CASE("orphan admitted by no slot yields none") {
  const auto slot = query_compatibility(pack(), {"locative.preposition", "pos.in"},
                                        "MassDescriptionFrame");
  CHECK(!slot.has_value());
}

TEST_CASE("first declared slot wins when several admit the orphan") {
  auto doc = empty_kb_doc();
  doc["nodes"] = ordered_json::parse(R"([
    {"id": "A", "layer": 2, "kind": "ontologic-primitive", "label": "A"},
    {"id": "F", "layer": 4, "kind": "object-event-frame", "label": "F",
     "slots": [
       {"name": "first", "accepted": ["node:A"], "cardinality": "optional"},
       {"name": "second", "accepted": ["node:A"], "cardinality": "optional"}
     ]}
  ])");
  const auto kb = load_doc(doc);
  // Brute check: scan the slots directly and confirm the query's answer is
  // the first admitting one in declaration order.
  const SemanticNode *frame = kb.find_node("F");
  std::string expected;
  for (const auto &slot : frame->slots) {
    for (const auto &acceptor : slot.accepted) {
      if (acceptor_admits(kb, acceptor, {"A", ""})) {
        expected = slot.name;
        break;
      }
    }
    if (!expected.empty()) break;
  }
  const auto slot = query_compatibility(kb, {"A", ""}, "F");
  REQUIRE(slot.has_value());
  CHECK(*slot == expected);
  CHECK(*slot == "first");
}

TEST_CASE("unknown anchor node raises an error") {
  CHECK_THROWS_AS(query_compatibility(pack(), {"border.spiculated", ""}, "NoSuchNode"), Error);
}

TEST_CASE("superclass chain walks nearest first") {
  const auto chain = superclass_chain(pack(), "LungAnatomy");
  REQUIRE(chain.size() == 2);
  CHECK(chain[0] == "LungAnatomy");
  CHECK(chain[1] == "AnatomyConcept");

  const auto identity = superclass_chain(pack(), "density.value");
  REQUIRE(identity.size() == 1);
  CHECK(identity[0] == "density.value");

  CHECK_THROWS_AS(superclass_chain(pack(), "NoSuchNode"), Error);
}

TEST_CASE("three-level chains resolve transitively in order") {
  auto doc = empty_kb_doc();
  doc["nodes"] = ordered_json::parse(R"([
    {"id": "EyeAnatomy", "layer": 2, "kind": "ontologic-primitive", "label": "Eye"},
    {"id": "HeadAnatomy", "layer": 2, "kind": "ontologic-primitive", "label": "Head"},
    {"id": "AnatomyConcept", "layer": 2, "kind": "ontologic-primitive", "label": "Anatomy"}
  ])");
  doc["genspec"] = ordered_json::parse(R"([
    {"sub": "EyeAnatomy", "super": "HeadAnatomy"},
    {"sub": "HeadAnatomy", "super": "AnatomyConcept"}
  ])");
  const auto kb = load_doc(doc);
  const auto chain = superclass_chain(kb, "EyeAnatomy");
  REQUIRE(chain.size() == 3);
  CHECK(chain[0] == "EyeAnatomy");
  CHECK(chain[1] == "HeadAnatomy");
  CHECK(chain[2] == "AnatomyConcept");
}
