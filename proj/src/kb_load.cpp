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

#include "hscm/kb/load.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hscm/error.hpp"
#include "hscm/grammar/runtime.hpp"
#include "hscm/kb/validate.hpp"

namespace hscm {

namespace {

using json = nlohmann::ordered_json;

// Word-level features the lexical analyzer deliberately does not compute in
// this build; a KB referencing them must fail with a clear message.
const std::set<std::string> kStubbedFeatures = {"morphology", "embedding", "spelling"};

[[noreturn]] void schema_error(const std::string &path, const std::string &message) {
  throw Error(ErrorCode::kSchema, path.empty() ? message : path + ": " + message, path);
}

struct Loader {
  Strictness strictness;
  KnowledgeBase kb;

  void check_keys(const json &obj, const std::set<std::string> &allowed, const std::string &path) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      if (allowed.count(it.key())) continue;
      if (kStubbedFeatures.count(it.key())) {
        schema_error(path + "." + it.key(), "feature not supported in this build");
      }
      if (strictness == Strictness::kStrict) {
        schema_error(path, "unknown key '" + it.key() + "'");
      }
      kb.load_warnings.push_back({path, "unknown key '" + it.key() + "'"});
    }
  }

  const json &require(const json &obj, const char *key, const std::string &path) {
    auto it = obj.find(key);
    if (it == obj.end()) schema_error(path, std::string("missing required key '") + key + "'");
    return *it;
  }

  std::string require_string(const json &obj, const char *key, const std::string &path) {
    const json &v = require(obj, key, path);
    if (!v.is_string()) schema_error(path + "." + key, "expected a string");
    return v.get<std::string>();
  }

  std::string optional_string(const json &obj, const char *key, const std::string &path,
                              const std::string &fallback = {}) {
    auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    if (!it->is_string()) schema_error(path + "." + key, "expected a string");
    return it->get<std::string>();
  }

  int require_int(const json &obj, const char *key, const std::string &path) {
    const json &v = require(obj, key, path);
    if (!v.is_number_integer()) schema_error(path + "." + key, "expected an integer");
    return v.get<int>();
  }

  const json &expect_array(const json &v, const std::string &path) {
    if (!v.is_array()) schema_error(path, "expected an array");
    return v;
  }

  const json &expect_object(const json &v, const std::string &path) {
    if (!v.is_object()) schema_error(path, "expected an object");
    return v;
  }

  Acceptor parse_acceptor(const json &v, const std::string &path) {
    if (!v.is_string()) schema_error(path, "expected a tagged string (node:/kind:/l1:)");
    const std::string s = v.get<std::string>();
    Acceptor a;
    if (s.rfind("node:", 0) == 0) {
      a.kind = Acceptor::Kind::kNode;
      a.value = s.substr(5);
    } else if (s.rfind("kind:", 0) == 0) {
      a.kind = Acceptor::Kind::kNodeKind;
      a.value = s.substr(5);
      auto k = node_kind_from_string(a.value);
      if (!k) schema_error(path, "unknown node kind '" + a.value + "'");
      a.node_kind = *k;
    } else if (s.rfind("l1:", 0) == 0) {
      a.kind = Acceptor::Kind::kL1Prefix;
      a.value = s.substr(3);
    } else {
      schema_error(path, "acceptor must start with node:, kind:, or l1:");
    }
    if (a.value.empty()) schema_error(path, "empty acceptor value");
    return a;
  }

  NodeOrKindRef parse_node_or_kind(const json &v, const std::string &path) {
    if (!v.is_string()) schema_error(path, "expected a tagged string (node:/kind:)");
    const std::string s = v.get<std::string>();
    NodeOrKindRef ref;
    if (s.rfind("node:", 0) == 0) {
      ref.is_kind = false;
      ref.node_id = s.substr(5);
    } else if (s.rfind("kind:", 0) == 0) {
      ref.is_kind = true;
      auto k = node_kind_from_string(s.substr(5));
      if (!k) schema_error(path, "unknown node kind '" + s.substr(5) + "'");
      ref.kind = *k;
    } else {
      schema_error(path, "reference must start with node: or kind:");
    }
    return ref;
  }

  Constraint parse_constraint(const json &v, const std::string &path) {
    expect_object(v, path);
    check_keys(v, {"literal", "l1", "node", "kind", "isa"}, path);
    Constraint c;
    int tags = 0;
    if (v.contains("literal")) {
      ++tags;
      c.kind = Constraint::Kind::kLiteral;
      c.value = v["literal"].get<std::string>();
    }
    if (v.contains("l1")) {
      ++tags;
      c.kind = Constraint::Kind::kL1Prefix;
      c.value = v["l1"].get<std::string>();
    }
    if (v.contains("node")) {
      ++tags;
      c.kind = Constraint::Kind::kNode;
      c.value = v["node"].get<std::string>();
    }
    if (v.contains("isa")) {
      ++tags;
      c.kind = Constraint::Kind::kIsa;
      c.value = v["isa"].get<std::string>();
    }
    if (v.contains("kind")) {
      ++tags;
      c.kind = Constraint::Kind::kNodeKind;
      c.value = v["kind"].get<std::string>();
      auto k = node_kind_from_string(c.value);
      if (!k) schema_error(path, "unknown node kind '" + c.value + "'");
      c.node_kind = *k;
    }
    if (tags != 1) schema_error(path, "constraint needs exactly one of literal/l1/node/kind/isa");
    return c;
  }

  TriggerPattern parse_trigger(const json &v, const std::string &path) {
    expect_object(v, path);
    check_keys(v, {"any", "literal", "l1", "node"}, path);
    TriggerPattern t;
    int tags = 0;
    if (v.contains("any")) {
      ++tags;
      t.kind = TriggerPattern::Kind::kAny;
    }
    if (v.contains("literal")) {
      ++tags;
      t.kind = TriggerPattern::Kind::kLiteral;
      t.value = v["literal"].get<std::string>();
    }
    if (v.contains("l1")) {
      ++tags;
      t.kind = TriggerPattern::Kind::kL1Prefix;
      t.value = v["l1"].get<std::string>();
    }
    if (v.contains("node")) {
      ++tags;
      t.kind = TriggerPattern::Kind::kNode;
      t.value = v["node"].get<std::string>();
    }
    if (tags != 1) schema_error(path, "trigger needs exactly one of any/literal/l1/node");
    return t;
  }

  void parse_config(const json &v) {
    expect_object(v, "config");
    check_keys(v, {"max_levels", "max_recursion_depth", "cascade_depth"}, "config");
    if (v.contains("max_levels")) kb.config.max_levels = v["max_levels"].get<int>();
    if (v.contains("max_recursion_depth"))
      kb.config.max_recursion_depth = v["max_recursion_depth"].get<int>();
    if (v.contains("cascade_depth")) kb.config.cascade_depth = v["cascade_depth"].get<int>();
    if (kb.config.max_levels < 1 || kb.config.max_recursion_depth < 1 ||
        kb.config.cascade_depth < 0) {
      schema_error("config", "config values out of range");
    }
  }

  void parse_nodes(const json &v) {
    expect_array(v, "nodes");
    for (size_t i = 0; i < v.size(); ++i) {
      const std::string path = "nodes[" + std::to_string(i) + "]";
      const json &nj = expect_object(v[i], path);
      check_keys(nj, {"id", "layer", "kind", "label", "slots", "grammar", "attributes"}, path);
      SemanticNode node;
      node.id = require_string(nj, "id", path);
      node.layer = require_int(nj, "layer", path);
      const std::string kind = require_string(nj, "kind", path);
      auto k = node_kind_from_string(kind);
      if (!k) schema_error(path + ".kind", "unknown node kind '" + kind + "'");
      node.kind = *k;
      node.label = optional_string(nj, "label", path, node.id);
      node.grammar_id = optional_string(nj, "grammar", path);
      if (nj.contains("slots")) {
        const json &slots = expect_array(nj["slots"], path + ".slots");
        for (size_t s = 0; s < slots.size(); ++s) {
          const std::string spath = path + ".slots[" + std::to_string(s) + "]";
          const json &sj = expect_object(slots[s], spath);
          check_keys(sj, {"name", "accepted", "cardinality"}, spath);
          SlotSpec slot;
          slot.name = require_string(sj, "name", spath);
          const json &acc = expect_array(require(sj, "accepted", spath), spath + ".accepted");
          for (size_t a = 0; a < acc.size(); ++a) {
            slot.accepted.push_back(
                parse_acceptor(acc[a], spath + ".accepted[" + std::to_string(a) + "]"));
          }
          const std::string card = optional_string(sj, "cardinality", spath, "optional");
          auto c = cardinality_from_string(card);
          if (!c) schema_error(spath + ".cardinality", "unknown cardinality '" + card + "'");
          slot.cardinality = *c;
          node.slots.push_back(std::move(slot));
        }
      }
      if (nj.contains("attributes")) {
        const json &attrs = expect_array(nj["attributes"], path + ".attributes");
        for (const auto &a : attrs) {
          if (!a.is_string()) schema_error(path + ".attributes", "expected node id strings");
          node.attribute_node_ids.push_back(a.get<std::string>());
        }
      }
      kb.nodes.push_back(std::move(node));
    }
  }

  void parse_lexicon(const json &v) {
    expect_array(v, "lexicon");
    for (size_t i = 0; i < v.size(); ++i) {
      const std::string path = "lexicon[" + std::to_string(i) + "]";
      const json &ej = expect_object(v[i], path);
      check_keys(ej, {"surface", "functional", "l1", "pos", "kind"}, path);
      LexiconEntry entry;
      const json &surface = require(ej, "surface", path);
      if (surface.is_string()) {
        entry.surface.push_back(surface.get<std::string>());
      } else if (surface.is_array()) {
        for (const auto &s : surface) {
          if (!s.is_string()) schema_error(path + ".surface", "expected strings");
          entry.surface.push_back(s.get<std::string>());
        }
      } else {
        schema_error(path + ".surface", "expected a string or array of strings");
      }
      if (entry.surface.empty()) schema_error(path + ".surface", "empty surface list");
      entry.l1_class = require_string(ej, "l1", path);
      entry.pos = require_string(ej, "pos", path);
      const std::string kind = optional_string(ej, "kind", path, "word");
      auto k = lex_entry_kind_from_string(kind);
      if (!k) schema_error(path + ".kind", "unknown entry kind '" + kind + "'");
      entry.kind = *k;
      std::string joined;
      for (size_t s = 0; s < entry.surface.size(); ++s) {
        if (s > 0) joined += ' ';
        joined += entry.surface[s];
      }
      entry.functional = optional_string(ej, "functional", path, joined);
      kb.lexicon.push_back(std::move(entry));
    }
  }

  void parse_grammars(const json &v) {
    expect_array(v, "grammars");
    for (size_t i = 0; i < v.size(); ++i) {
      const std::string path = "grammars[" + std::to_string(i) + "]";
      const json &gj = expect_object(v[i], path);
      check_keys(gj, {"id", "elements", "recursive"}, path);
      GrammarSpec g;
      g.id = require_string(gj, "id", path);
      const json &elements = expect_array(require(gj, "elements", path), path + ".elements");
      for (size_t e = 0; e < elements.size(); ++e) {
        const std::string epath = path + ".elements[" + std::to_string(e) + "]";
        const json &mj = expect_object(elements[e], epath);
        check_keys(mj, {"constraint", "quantifier", "capture", "anchor"}, epath);
        Matcher m;
        m.constraint = parse_constraint(require(mj, "constraint", epath), epath + ".constraint");
        const std::string q = optional_string(mj, "quantifier", epath, "exactly-one");
        if (q == "exactly-one") {
          m.quantifier = Quantifier::kExactlyOne;
        } else if (q == "optional") {
          m.quantifier = Quantifier::kOptional;
        } else if (q == "zero-or-more") {
          m.quantifier = Quantifier::kZeroOrMore;
        } else if (q == "one-or-more") {
          m.quantifier = Quantifier::kOneOrMore;
        } else {
          schema_error(epath + ".quantifier", "unknown quantifier '" + q + "'");
        }
        m.capture = optional_string(mj, "capture", epath);
        if (mj.contains("anchor")) {
          if (!mj["anchor"].is_boolean()) schema_error(epath + ".anchor", "expected a boolean");
          if (mj["anchor"].get<bool>()) {
            if (g.anchor_index.has_value()) schema_error(path, "multiple anchor elements");
            g.anchor_index = static_cast<int>(e);
          }
        }
        g.elements.push_back(std::move(m));
      }
      if (gj.contains("recursive")) {
        if (!gj["recursive"].is_boolean()) schema_error(path + ".recursive", "expected a boolean");
        g.recursive = gj["recursive"].get<bool>();
      }
      kb.grammars.push_back(std::move(g));
    }
  }

  void parse_activation(const json &v) {
    expect_array(v, "activation");
    for (size_t i = 0; i < v.size(); ++i) {
      const std::string path = "activation[" + std::to_string(i) + "]";
      const json &aj = expect_object(v[i], path);
      check_keys(aj, {"trigger", "target", "kind", "context", "prior"}, path);
      ActivationLink link;
      link.trigger = parse_trigger(require(aj, "trigger", path), path + ".trigger");
      link.target_node_id = require_string(aj, "target", path);
      const std::string kind = require_string(aj, "kind", path);
      if (kind == "anchored") {
        link.kind = TriggerKind::kAnchored;
      } else if (kind == "floating") {
        link.kind = TriggerKind::kFloating;
      } else if (kind == "cascading") {
        link.kind = TriggerKind::kCascading;
      } else {
        schema_error(path + ".kind", "unknown trigger kind '" + kind + "'");
      }
      link.context_filter = optional_string(aj, "context", path);
      if (aj.contains("prior")) {
        if (!aj["prior"].is_number()) schema_error(path + ".prior", "expected a number");
        link.prior = aj["prior"].get<double>();
        if (link.prior < 0.0) schema_error(path + ".prior", "prior must be non-negative");
      }
      kb.activation_links.push_back(std::move(link));
    }
  }

  void parse_suppression(const json &v) {
    expect_array(v, "suppression");
    for (size_t i = 0; i < v.size(); ++i) {
      const std::string path = "suppression[" + std::to_string(i) + "]";
      const json &sj = expect_object(v[i], path);
      check_keys(sj, {"target", "pattern"}, path);
      kb.suppression_patterns.push_back(
          {require_string(sj, "target", path), require_string(sj, "pattern", path)});
    }
  }

  void parse_genspec(const json &v) {
    expect_array(v, "genspec");
    for (size_t i = 0; i < v.size(); ++i) {
      const std::string path = "genspec[" + std::to_string(i) + "]";
      const json &gj = expect_object(v[i], path);
      check_keys(gj, {"sub", "super"}, path);
      kb.genspec_links.push_back(
          {require_string(gj, "sub", path), require_string(gj, "super", path)});
    }
  }

  void parse_precedence(const json &v) {
    expect_array(v, "precedence");
    for (size_t i = 0; i < v.size(); ++i) {
      const std::string path = "precedence[" + std::to_string(i) + "]";
      const json &pj = expect_object(v[i], path);
      check_keys(pj, {"winner", "loser", "condition"}, path);
      PrecedenceRule rule;
      rule.winner = parse_node_or_kind(require(pj, "winner", path), path + ".winner");
      rule.loser = parse_node_or_kind(require(pj, "loser", path), path + ".loser");
      const std::string cond = optional_string(pj, "condition", path, "always");
      auto c = overlap_condition_from_string(cond);
      if (!c) schema_error(path + ".condition", "unknown condition '" + cond + "'");
      rule.condition = *c;
      kb.precedence_rules.push_back(std::move(rule));
    }
  }

  void parse_sequence_model(const json &v) {
    expect_object(v, "sequence_model");
    check_keys(v, {"bigrams"}, "sequence_model");
    if (!v.contains("bigrams")) return;
    const json &bigrams = expect_object(v["bigrams"], "sequence_model.bigrams");
    for (auto left = bigrams.begin(); left != bigrams.end(); ++left) {
      const std::string lpath = "sequence_model.bigrams." + left.key();
      const json &row = expect_object(left.value(), lpath);
      for (auto right = row.begin(); right != row.end(); ++right) {
        if (!right.value().is_number_integer()) {
          schema_error(lpath + "." + right.key(), "expected an integer count");
        }
        long long count = right.value().get<long long>();
        if (count < 0) schema_error(lpath + "." + right.key(), "counts must be non-negative");
        kb.sequence_model.bigram_counts[{left.key(), right.key()}] = count;
      }
    }
  }
};

void build_superclass_chains(KnowledgeBase &kb) {
  // Direct superclasses in declaration order, then a BFS walk per node.
  // Cycles (reported by the validator) are cut by the visited set.
  std::unordered_map<std::string, std::vector<std::string>> supers;
  for (const auto &link : kb.genspec_links) {
    supers[link.subclass_id].push_back(link.superclass_id);
  }
  for (const auto &node : kb.nodes) {
    std::vector<std::string> chain{node.id};
    std::set<std::string> seen{node.id};
    for (size_t k = 0; k < chain.size(); ++k) {
      auto it = supers.find(chain[k]);
      if (it == supers.end()) continue;
      for (const auto &super : it->second) {
        if (seen.insert(super).second) chain.push_back(super);
      }
    }
    kb.superclass_chains[node.id] = std::move(chain);
  }
}

}  // namespace

std::pair<KnowledgeBase, ValidationReport> load_kb_with_report(std::string_view text,
                                                               Strictness strictness) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const nlohmann::json::parse_error &e) {
    // Convert the byte offset into a line/column pair.
    size_t offset = e.byte > 0 ? e.byte - 1 : 0;
    offset = std::min(offset, text.size());
    int line = 1, column = 1;
    for (size_t i = 0; i < offset; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw Error(ErrorCode::kSchema,
                "invalid JSON at line " + std::to_string(line) + ", column " +
                    std::to_string(column) + ": " + e.what(),
                "", line, column);
  }
  if (!doc.is_object()) schema_error("", "KB document must be a JSON object");

  Loader loader{strictness, {}};
  static const std::set<std::string> kSections = {"config",   "nodes",       "lexicon",
                                                  "grammars", "activation",  "suppression",
                                                  "genspec",  "precedence",  "sequence_model"};
  loader.check_keys(doc, kSections, "");
  for (const auto &section : kSections) {
    if (!doc.contains(section)) schema_error("", "missing required section '" + section + "'");
  }

  loader.parse_config(doc["config"]);
  loader.parse_nodes(doc["nodes"]);
  loader.parse_lexicon(doc["lexicon"]);
  loader.parse_grammars(doc["grammars"]);
  loader.parse_activation(doc["activation"]);
  loader.parse_suppression(doc["suppression"]);
  loader.parse_genspec(doc["genspec"]);
  loader.parse_precedence(doc["precedence"]);
  loader.parse_sequence_model(doc["sequence_model"]);

  KnowledgeBase kb = std::move(loader.kb);
  for (size_t i = 0; i < kb.nodes.size(); ++i) {
    kb.node_index.emplace(kb.nodes[i].id, static_cast<int>(i));  // keeps the first on duplicates
  }
  for (size_t i = 0; i < kb.grammars.size(); ++i) {
    kb.grammar_index.emplace(kb.grammars[i].id, static_cast<int>(i));
  }
  build_superclass_chains(kb);
  for (const auto &grammar : kb.grammars) {
    try {
      kb.compiled_grammars[grammar.id] =
          std::make_shared<const CompiledGrammar>(compile_grammar(grammar, kb));
    } catch (const Error &) {
      // Dangling references surface through the validator below.
    }
  }

  ValidationReport report = validate_kb(kb);
  return {std::move(kb), std::move(report)};
}

KnowledgeBase load_kb(std::string_view text, Strictness strictness) {
  auto [kb, report] = load_kb_with_report(text, strictness);
  if (!report.ok()) {
    std::ostringstream message;
    message << report.errors.front().path << ": " << report.errors.front().message;
    if (report.errors.size() > 1) {
      message << " (+" << report.errors.size() - 1 << " more)";
    }
    throw Error(ErrorCode::kValidation, message.str(), report.errors.front().path);
  }
  return std::move(kb);
}

namespace {

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot read KB file: " + path, path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

KnowledgeBase load_kb_file(const std::string &path, Strictness strictness) {
  return load_kb(read_file(path), strictness);
}

std::pair<KnowledgeBase, ValidationReport> load_kb_file_with_report(const std::string &path,
                                                                    Strictness strictness) {
  return load_kb_with_report(read_file(path), strictness);
}

}  // namespace hscm
