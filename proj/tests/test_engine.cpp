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
#include <set>
#include <string>
#include <vector>

#include "hscm/parse/engine.hpp"
#include "hscm/parse/trace_json.hpp"
#include "test_support.hpp"

using namespace hscm;
using hscm_test::empty_kb_doc;
using hscm_test::load_doc;
using hscm_test::pack;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr const char *kEx1 = "There is a 5.5cm mass in the left upper lobe.";

int accepted_count(const LevelRecord &record) {
  int n = 0;
  for (const auto &d : record.decisions) {
    if (d.action == DecisionAction::kAccepted) ++n;
  }
  return n;
}

const FrameNode *find_slot_filler(const FrameNode &frame, const std::string &slot) {
  for (const auto &[name, fillers] : frame.slots) {
    if (name == slot && !fillers.empty()) return &fillers.front();
  }
  return nullptr;
}

}  // namespace

TEST_CASE("ex1 level 2 reduces 11 tokens to 8") {
  const auto trace = parse(pack(), kEx1);
  REQUIRE(!trace.levels.empty());
  CHECK(trace.levels[0].level == 2);
  CHECK(trace.levels[0].input.size() == 11);
  CHECK(trace.levels[0].output.size() == 8);
  REQUIRE(trace.levels.size() >= 2);
  CHECK(trace.levels[1].level == 3);
  CHECK(trace.levels[1].input.size() == 8);
}

TEST_CASE("ex1 level 3 fuses the value and unit into a size proposition") {
  const auto trace = parse(pack(), kEx1);
  REQUIRE(trace.levels.size() >= 2);
  const LevelRecord &level3 = trace.levels[1];
  bool fused = false;
  for (const auto &token : level3.output) {
    if (token.node && token.node->node_id == "has_1DSizeDescription") {
      fused = true;
      CHECK(token.text == "5.5 cm");
      CHECK(token.children.size() == 2);
    }
  }
  CHECK(fused);
}

TEST_CASE("ex1 ends in a single mass description frame") {
  const auto trace = parse(pack(), kEx1);
  REQUIRE(trace.frames.size() == 1);
  const FrameNode &frame = trace.frames[0];
  CHECK(frame.node_id == "MassDescriptionFrame");
  const FrameNode *size = find_slot_filler(frame, "size");
  REQUIRE(size != nullptr);
  CHECK(size->node_id == "has_1DSizeDescription");
  const FrameNode *value = find_slot_filler(*size, "length-value");
  REQUIRE(value != nullptr);
  CHECK(value->text == "5.5");
  const FrameNode *units = find_slot_filler(*size, "length-units");
  REQUIRE(units != nullptr);
  CHECK(units->text == "cm");
  const FrameNode *location = find_slot_filler(frame, "location");
  REQUIRE(location != nullptr);
  CHECK(location->node_id == "SpatialRelation");
  CHECK(trace.residuals.empty());
}

TEST_CASE("unrecognized input reaches a fixed point untouched") {
  const auto trace = parse(pack(), "qzx wibble");
  REQUIRE(trace.levels.size() == 1);
  const LevelRecord &record = trace.levels[0];
  CHECK(accepted_count(record) == 0);
  REQUIRE(record.output.size() == record.input.size());
  for (const auto &token : record.output) {
    CHECK(token.residual);
    CHECK(token.children.size() == 1);
  }
  CHECK(trace.frames.empty());
  CHECK(trace.residuals.size() == 2);
}

TEST_CASE("empty sentence yields an empty trace") {
  const auto trace = parse(pack(), "");
  CHECK(trace.levels.empty());
  CHECK(trace.frames.empty());
  CHECK(trace.residuals.empty());
}

TEST_CASE("ex2 binds the growth clause under the mass frame") {
  const auto trace =
      parse(pack(), "There is mass in the right lower lobe that is still growing");
  REQUIRE(trace.frames.size() == 1);
  const FrameNode &frame = trace.frames[0];
  CHECK(frame.node_id == "MassDescriptionFrame");
  const FrameNode *change = find_slot_filler(frame, "change");
  REQUIRE(change != nullptr);
  CHECK(change->node_id == "GrowthDescription");
  CHECK(change->text == "that is still growing");

  bool rejected_perturbation = false;
  for (const auto &record : trace.levels) {
    for (const auto &decision : record.decisions) {
      if (decision.action == DecisionAction::kRejected &&
          decision.node_id == "AnatomyPerturbationFrame") {
        rejected_perturbation = true;
        CHECK(!decision.reason.empty());
      }
    }
  }
  CHECK(rejected_perturbation);
}

TEST_CASE("adjudication accepts the phrase and rejects contained singles") {
  const auto trace = parse(pack(), kEx1);
  const LevelRecord &level2 = trace.levels[0];
  int rejected_directions = 0;
  bool accepted_anatomy = false;
  for (const auto &decision : level2.decisions) {
    if (decision.node_id == "direction.concept" &&
        decision.action == DecisionAction::kRejected) {
      ++rejected_directions;
      CHECK(decision.reason.find("AnatomyConcept") != std::string::npos);
    }
    if (decision.node_id == "AnatomyConcept" && decision.action == DecisionAction::kAccepted) {
      accepted_anatomy = true;
      CHECK(decision.range_end - decision.range_begin == 3);
    }
  }
  CHECK(accepted_anatomy);
  CHECK(rejected_directions == 2);
}

TEST_CASE("non-overlapping successful matches are all accepted") {
  // Level 2 of Ex-1: existence, number, unit, mass, locative, anatomy are
  // pairwise disjoint and all accepted.
  const auto trace = parse(pack(), kEx1);
  CHECK(accepted_count(trace.levels[0]) == 6);
}

TEST_CASE("a match covering the whole level produces a single root token") {
  auto doc = empty_kb_doc();
  doc["nodes"] = ordered_json::parse(R"([
    {"id": "Root", "layer": 3, "kind": "ontologic-proposition", "label": "Root", "grammar": "g"}
  ])");
  doc["grammars"] = ordered_json::parse(R"([
    {"id": "g", "elements": [
      {"constraint": {"literal": "a"}},
      {"constraint": {"literal": "b"}},
      {"constraint": {"literal": "c"}}
    ]}
  ])");
  doc["activation"] = ordered_json::parse(R"([
    {"trigger": {"any": true}, "target": "Root", "kind": "floating"}
  ])");
  const auto kb = load_doc(doc);
  const auto trace = parse(kb, "a b c");
  REQUIRE(!trace.levels.empty());
  REQUIRE(trace.levels[0].output.size() == 1);
  const Token &root = trace.levels[0].output[0];
  REQUIRE(root.node.has_value());
  CHECK(root.node->node_id == "Root");
  CHECK(root.children.size() == 3);
  REQUIRE(trace.frames.size() == 1);
}

TEST_CASE("recursion depth is bounded by the configuration") {
  auto doc = empty_kb_doc();
  doc["config"]["max_recursion_depth"] = 3;
  doc["nodes"] = ordered_json::parse(R"([
    {"id": "B", "layer": 2, "kind": "ontologic-primitive", "label": "B", "grammar": "gb"},
    {"id": "Y", "layer": 2, "kind": "ontologic-primitive", "label": "Y", "grammar": "gy"},
    {"id": "F", "layer": 4, "kind": "object-event-frame", "label": "F", "grammar": "gf",
     "slots": [{"name": "extra", "accepted": ["node:Y"], "cardinality": "many"}]}
  ])");
  doc["grammars"] = ordered_json::parse(R"([
    {"id": "gb", "elements": [{"constraint": {"literal": "b"}, "anchor": true}]},
    {"id": "gy", "elements": [{"constraint": {"literal": "y"}, "anchor": true}]},
    {"id": "gf", "recursive": true, "elements": [
      {"constraint": {"isa": "B"}, "anchor": true},
      {"constraint": {"node": "Y"}, "capture": "extra"}
    ]}
  ])");
  doc["activation"] = ordered_json::parse(R"([
    {"trigger": {"literal": "b"}, "target": "B", "kind": "anchored"},
    {"trigger": {"literal": "y"}, "target": "Y", "kind": "anchored"},
    {"trigger": {"node": "B"}, "target": "F", "kind": "anchored"}
  ])");
  doc["genspec"] = ordered_json::parse(R"([{"sub": "F", "super": "B"}])");
  const auto kb = load_doc(doc);

  const auto trace = parse(kb, "b y y y y y");
  int max_nest = 0;
  bool depth_rejection = false;
  for (const auto &record : trace.levels) {
    for (const auto &token : record.output) {
      if (token.node && token.node->node_id == "F") {
        max_nest = std::max(max_nest, token.self_nest_depth);
      }
    }
    for (const auto &decision : record.decisions) {
      if (decision.reason.find("recursion depth") != std::string::npos) depth_rejection = true;
    }
  }
  CHECK(max_nest <= 3);
  CHECK(depth_rejection);
}

// Replays each level's accepted decisions over its input with an independent
// mini-builder and checks the recorded output matches.
TEST_CASE("level records replay consistently") {
  for (const std::string sentence :
       {kEx1, "There is mass in the right lower lobe that is still growing",
        "Mass, June 2020, 2.3cm in right lung, spiculated margins"}) {
    const auto trace = parse(pack(), sentence);
    for (const auto &record : trace.levels) {
      std::vector<std::pair<int, int>> accepted;  // position ranges
      for (const auto &decision : record.decisions) {
        if (decision.action == DecisionAction::kAccepted) {
          accepted.push_back({decision.range_begin, decision.range_end});
        }
      }
      std::sort(accepted.begin(), accepted.end());
      std::vector<std::vector<int>> expected_children;
      size_t a = 0;
      for (int pos = 0; pos < static_cast<int>(record.input.size());) {
        if (a < accepted.size() && accepted[a].first == pos) {
          std::vector<int> children;
          for (int p = accepted[a].first; p < accepted[a].second; ++p) {
            children.push_back(record.input[p].id);
          }
          expected_children.push_back(std::move(children));
          pos = accepted[a].second;
          ++a;
        } else {
          expected_children.push_back({record.input[pos].id});
          ++pos;
        }
      }
      REQUIRE(record.output.size() == expected_children.size());
      for (size_t i = 0; i < record.output.size(); ++i) {
        CHECK(record.output[i].children == expected_children[i]);
      }
    }
  }
}

TEST_CASE("every functional token is reachable from exactly one final token") {
  for (const std::string sentence :
       {kEx1, "Bone mass density is stable.",
        "Mass, June 2020, 2.3cm in right lung, spiculated margins"}) {
    const auto trace = parse(pack(), sentence);
    REQUIRE(!trace.levels.empty());
    std::map<int, Token> registry;
    for (const auto &token : trace.levels.front().input) registry.emplace(token.id, token);
    for (const auto &record : trace.levels) {
      for (const auto &token : record.output) registry.emplace(token.id, token);
    }
    std::map<int, int> leaf_visits;
    std::function<void(int)> walk = [&](int id) {
      const Token &token = registry.at(id);
      if (token.children.empty()) {
        ++leaf_visits[id];
        return;
      }
      for (int child : token.children) walk(child);
    };
    for (const auto &token : trace.levels.back().output) walk(token.id);
    for (const auto &token : trace.levels.front().input) {
      CHECK(leaf_visits[token.id] == 1);
    }
  }
}

TEST_CASE("agent dispatch order does not affect the trace") {
  for (uint64_t seed : {1ULL, 7ULL, 99ULL, 12345ULL}) {
    ParseOptions options;
    options.agent_shuffle_seed = seed;
    const auto shuffled = trace_to_json(parse(pack(), kEx1, {}, options)).dump();
    const auto plain = trace_to_json(parse(pack(), kEx1)).dump();
    CHECK(shuffled == plain);
  }
}

TEST_CASE("generate orders hypotheses canonically and deduplicates") {
  const auto trace = parse(pack(), kEx1);
  const auto &hyps = trace.levels[0].hypotheses;
  REQUIRE(!hyps.empty());
  CHECK(hyps[0].kind == TriggerKind::kFloating);  // empty trigger set sorts first
  std::set<std::pair<std::string, std::vector<int>>> seen;
  for (const auto &h : hyps) {
    auto key = std::make_pair(h.target_node_id, h.trigger_tokens);
    CHECK(!seen.count(key));
    seen.insert(key);
  }
}

TEST_CASE("failed hypotheses are not re-dispatched while their context is unchanged") {
  const auto trace = parse(pack(), "qzx mass wibble");
  // Levels after the first: the tumoral-mass attribute cascade failures from
  // the previous level must not be re-tested when nothing changed.
  REQUIRE(trace.levels.size() >= 2);
  const auto &first = trace.levels[0].hypotheses;
  const auto &second = trace.levels[1].hypotheses;
  CHECK(second.size() < first.size());
}
