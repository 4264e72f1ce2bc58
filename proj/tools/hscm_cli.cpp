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

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hscm/error.hpp"
#include "hscm/kb/load.hpp"
#include "hscm/kb/query.hpp"
#include "hscm/kb/validate.hpp"
#include "hscm/parse/engine.hpp"
#include "hscm/parse/trace_json.hpp"
#include "hscm/text/lexical.hpp"
#include "hscm/text/tokenize.hpp"

namespace {

constexpr const char *kVersion = "1.0.0";

// 0 ok; 1 validation failure, unknown node, not-in-conflict;
// 2 schema/io/argument errors.
constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitSchema = 2;

using hscm::ordered_json;

int exit_code_for(const hscm::Error &error) {
  switch (error.code()) {
    case hscm::ErrorCode::kSchema:
    case hscm::ErrorCode::kIo:
    case hscm::ErrorCode::kIndexOutOfRange:
      return kExitSchema;
    default:
      return kExitValidation;
  }
}

struct GlobalOptions {
  std::string kb_path;
  std::string format = "trace-json";
  std::vector<std::string> context;
  bool strict = false;

  hscm::Strictness strictness() const {
    return strict ? hscm::Strictness::kStrict : hscm::Strictness::kLenient;
  }
};

hscm::KnowledgeBase load_kb_or_exit(const GlobalOptions &options) {
  if (options.kb_path.empty()) {
    throw hscm::Error(hscm::ErrorCode::kIo, "--kb <path> is required for this command");
  }
  return hscm::load_kb_file(options.kb_path, options.strictness());
}

int cmd_validate(const GlobalOptions &options) {
  if (options.kb_path.empty()) {
    throw hscm::Error(hscm::ErrorCode::kIo, "--kb <path> is required for this command");
  }
  auto [kb, report] = hscm::load_kb_file_with_report(options.kb_path, options.strictness());
  (void)kb;
  for (const auto &issue : report.errors) {
    std::cout << "error: " << issue.path << ": " << issue.message << "\n";
  }
  for (const auto &issue : report.warnings) {
    std::cout << "warning: " << issue.path << ": " << issue.message << "\n";
  }
  std::cout << report.errors.size() << " error(s), " << report.warnings.size() << " warning(s)\n";
  if (!report.errors.empty()) return kExitValidation;
  if (options.strict && !report.warnings.empty()) return kExitValidation;
  return kExitOk;
}

int cmd_parse(const GlobalOptions &options, const std::vector<std::string> &sentences,
              const std::string &input_path) {
  hscm::KnowledgeBase kb = load_kb_or_exit(options);

  std::vector<std::string> lines = sentences;
  if (lines.empty()) {
    std::istream *in = &std::cin;
    std::ifstream file;
    if (!input_path.empty()) {
      file.open(input_path, std::ios::binary);
      if (!file) {
        throw hscm::Error(hscm::ErrorCode::kIo, "cannot read input file: " + input_path);
      }
      in = &file;
    }
    std::string line;
    while (std::getline(*in, line)) lines.push_back(line);
  }

  int line_number = 0;
  for (const auto &line : lines) {
    ++line_number;
    if (!hscm::is_valid_utf8(line)) {
      ordered_json error;
      error["error"] = "invalid UTF-8 input";
      error["line"] = line_number;
      std::cout << error.dump() << "\n";
      continue;
    }
    hscm::ParseTrace trace = hscm::parse(kb, line, options.context);
    if (options.format == "trace-json") {
      std::cout << hscm::trace_to_json(trace).dump() << "\n";
    } else if (options.format == "frames-json") {
      std::cout << hscm::frames_to_json(trace).dump() << "\n";
    } else {
      const auto surface = hscm::tokenize_l0(line);
      std::cout << hscm::trace_summary_text(trace, static_cast<int>(surface.size()));
      std::cout << "\n";
    }
  }
  return kExitOk;
}

std::vector<hscm::TokenView> analyze_views(const hscm::KnowledgeBase &kb, const std::string &text,
                                           bool resolve_unknown) {
  const auto surface = hscm::tokenize_l0(text);
  const auto functional = hscm::lexical_analyze(kb, surface, {resolve_unknown});
  std::vector<hscm::TokenView> views;
  for (const auto &token : functional) {
    views.push_back({token.text, token.l1_class, ""});
  }
  return views;
}

int cmd_query_hypotheses(const GlobalOptions &options, const std::string &text) {
  hscm::KnowledgeBase kb = load_kb_or_exit(options);
  const auto views = analyze_views(kb, text, true);
  const auto seeds = hscm::query_hypotheses(kb, views, options.context);
  ordered_json out = ordered_json::array();
  for (const auto &seed : seeds) {
    ordered_json j;
    j["target"] = seed.target_node_id;
    j["kind"] = hscm::to_string(seed.kind);
    j["trigger_tokens"] = seed.trigger_tokens;
    j["prior"] = seed.prior;
    out.push_back(std::move(j));
  }
  std::cout << out.dump() << "\n";
  return kExitOk;
}

int cmd_query_unknown(const GlobalOptions &options, const std::string &text, int index) {
  hscm::KnowledgeBase kb = load_kb_or_exit(options);
  const auto surface = hscm::tokenize_l0(text);
  const auto functional = hscm::lexical_analyze(kb, surface, {false});
  std::vector<std::string> classes;
  for (const auto &token : functional) classes.push_back(token.l1_class);
  const auto ranking = hscm::query_unknown_assignment(kb, classes, index);
  ordered_json out = ordered_json::array();
  for (const auto &[cls, score] : ranking) {
    ordered_json j;
    j["l1"] = cls;
    j["score"] = score;
    out.push_back(std::move(j));
  }
  std::cout << out.dump() << "\n";
  return kExitOk;
}

// Instance syntax: <node-id>@<begin>:<end>, token positions half-open.
hscm::InstanceRef parse_instance(const hscm::KnowledgeBase &kb, const std::string &spec) {
  const auto at = spec.rfind('@');
  const auto colon = spec.rfind(':');
  if (at == std::string::npos || colon == std::string::npos || colon < at) {
    throw hscm::Error(hscm::ErrorCode::kSchema,
                      "instance must look like <node-id>@<begin>:<end>: " + spec);
  }
  hscm::InstanceRef ref;
  ref.node_id = spec.substr(0, at);
  try {
    ref.begin = std::stoi(spec.substr(at + 1, colon - at - 1));
    ref.end = std::stoi(spec.substr(colon + 1));
  } catch (const std::exception &) {
    throw hscm::Error(hscm::ErrorCode::kSchema, "bad token range in instance: " + spec);
  }
  const hscm::SemanticNode *node = kb.find_node(ref.node_id);
  if (node == nullptr) {
    throw hscm::Error(hscm::ErrorCode::kUnknownNode, "unknown node '" + ref.node_id + "'");
  }
  ref.layer = node->layer;
  ref.kind = node->kind;
  ref.trigger_pos = ref.begin;
  return ref;
}

int cmd_query_precedence(const GlobalOptions &options, const std::string &a_spec,
                         const std::string &b_spec) {
  hscm::KnowledgeBase kb = load_kb_or_exit(options);
  const auto a = parse_instance(kb, a_spec);
  const auto b = parse_instance(kb, b_spec);
  const auto answer = hscm::query_precedence(kb, a, b);
  ordered_json out;
  switch (answer) {
    case hscm::PrecedenceAnswer::kPreferA: out["answer"] = "prefer_a"; break;
    case hscm::PrecedenceAnswer::kPreferB: out["answer"] = "prefer_b"; break;
    case hscm::PrecedenceAnswer::kUnresolved: out["answer"] = "unresolved"; break;
  }
  std::cout << out.dump() << "\n";
  return kExitOk;
}

int cmd_query_compatibility(const GlobalOptions &options, const std::vector<std::string> &args) {
  std::string orphan_id;
  std::string anchor_id;
  for (const auto &arg : args) {
    if (arg.rfind("orphan=", 0) == 0) {
      orphan_id = arg.substr(7);
    } else if (arg.rfind("anchor=", 0) == 0) {
      anchor_id = arg.substr(7);
    } else {
      throw hscm::Error(hscm::ErrorCode::kSchema, "expected orphan=<node> anchor=<node>");
    }
  }
  if (orphan_id.empty() || anchor_id.empty()) {
    throw hscm::Error(hscm::ErrorCode::kSchema, "expected orphan=<node> anchor=<node>");
  }
  hscm::KnowledgeBase kb = load_kb_or_exit(options);
  if (kb.find_node(orphan_id) == nullptr) {
    throw hscm::Error(hscm::ErrorCode::kUnknownNode, "unknown node '" + orphan_id + "'");
  }
  const auto slot = hscm::query_compatibility(kb, {orphan_id, ""}, anchor_id);
  ordered_json out;
  out["orphan"] = orphan_id;
  out["anchor"] = anchor_id;
  out["slot"] = slot.has_value() ? ordered_json(*slot) : ordered_json(nullptr);
  std::cout << out.dump() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"HSCM semantic parsing engine"};
  app.require_subcommand(1);

  GlobalOptions options;
  app.add_option("--kb", options.kb_path, "Path to the knowledge-base JSON document");
  app.add_option("--format", options.format, "Output format for parse")
      ->check(CLI::IsMember({"trace-json", "frames-json", "summary-text"}));
  app.add_option("--context", options.context, "Application profile entries (key=value), repeatable");
  app.add_flag("--strict", options.strict,
               "Treat unknown KB keys as schema errors and warnings as validation failures");

  auto *validate = app.add_subcommand("validate", "Validate a knowledge base");

  std::vector<std::string> sentences;
  std::string input_path;
  auto *parse_cmd = app.add_subcommand("parse", "Parse sentences (one per line)");
  parse_cmd->add_option("sentence", sentences, "Sentences to parse");
  parse_cmd->add_option("--input", input_path, "Read sentences from a file instead of stdin");

  auto *query = app.add_subcommand("query", "Knowledge-base queries");
  query->require_subcommand(1);

  std::string hypotheses_text;
  auto *q_hyp = query->add_subcommand("hypotheses", "Hypotheses for a token sequence");
  q_hyp->add_option("text", hypotheses_text, "Token sequence as a mini sentence")->required();

  std::string unknown_text;
  int unknown_index = 0;
  auto *q_unknown = query->add_subcommand("unknown", "Class ranking for an unknown token");
  q_unknown->add_option("text", unknown_text, "Token sequence as a mini sentence")->required();
  q_unknown->add_option("index", unknown_index, "Position of the unknown token")->required();

  std::string prec_a, prec_b;
  auto *q_prec = query->add_subcommand("precedence", "Resolve two conflicting instances");
  q_prec->add_option("a", prec_a, "First instance as <node-id>@<begin>:<end>")->required();
  q_prec->add_option("b", prec_b, "Second instance as <node-id>@<begin>:<end>")->required();

  std::vector<std::string> compat_args;
  auto *q_compat = query->add_subcommand("compatibility", "Slot admitting an orphan constituent");
  q_compat->add_option("args", compat_args, "orphan=<node-id> anchor=<node-id>")->expected(2);

  auto *version = app.add_subcommand("version", "Print version");

  CLI11_PARSE(app, argc, argv);

  try {
    if (version->parsed()) {
      std::cout << "hscm " << kVersion << "\n";
      return kExitOk;
    }
    if (validate->parsed()) return cmd_validate(options);
    if (parse_cmd->parsed()) return cmd_parse(options, sentences, input_path);
    if (q_hyp->parsed()) return cmd_query_hypotheses(options, hypotheses_text);
    if (q_unknown->parsed()) return cmd_query_unknown(options, unknown_text, unknown_index);
    if (q_prec->parsed()) return cmd_query_precedence(options, prec_a, prec_b);
    if (q_compat->parsed()) return cmd_query_compatibility(options, compat_args);
  } catch (const hscm::Error &error) {
    std::cerr << "error: " << error.what() << "\n";
    return exit_code_for(error);
  } catch (const std::exception &error) {
    std::cerr << "error: " << error.what() << "\n";
    return kExitSchema;
  }
  return kExitOk;
}
