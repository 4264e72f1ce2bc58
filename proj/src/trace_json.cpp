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

#include "hscm/parse/trace_json.hpp"

#include <sstream>

#include "hscm/error.hpp"

namespace hscm {

namespace {

ordered_json token_to_json(const Token &token) {
  ordered_json j;
  j["id"] = token.id;
  j["level"] = token.level;
  j["span"] = {token.span_begin, token.span_end};
  j["text"] = token.text;
  j["l1"] = token.l1_class;
  j["pos"] = token.pos;
  if (token.node) {
    ordered_json node;
    node["id"] = token.node->node_id;
    ordered_json slots = ordered_json::object();
    for (const auto &[name, ids] : token.node->slots) slots[name] = ids;
    node["slots"] = std::move(slots);
    j["node"] = std::move(node);
  }
  j["children"] = token.children;
  j["residual"] = token.residual;
  return j;
}

Token token_from_json(const ordered_json &j) {
  Token token;
  token.id = j.at("id").get<int>();
  token.level = j.at("level").get<int>();
  token.span_begin = j.at("span")[0].get<int>();
  token.span_end = j.at("span")[1].get<int>();
  token.text = j.at("text").get<std::string>();
  token.l1_class = j.at("l1").get<std::string>();
  token.pos = j.at("pos").get<std::string>();
  if (j.contains("node")) {
    NodeInstance instance;
    instance.node_id = j["node"].at("id").get<std::string>();
    for (auto it = j["node"].at("slots").begin(); it != j["node"].at("slots").end(); ++it) {
      instance.slots[it.key()] = it.value().get<std::vector<int>>();
    }
    token.node = std::move(instance);
  }
  token.children = j.at("children").get<std::vector<int>>();
  token.residual = j.at("residual").get<bool>();
  return token;
}

const char *trigger_kind_name(TriggerKind kind) { return to_string(kind); }

TriggerKind trigger_kind_from(const std::string &s) {
  if (s == "anchored") return TriggerKind::kAnchored;
  if (s == "floating") return TriggerKind::kFloating;
  if (s == "cascading") return TriggerKind::kCascading;
  throw Error(ErrorCode::kSchema, "unknown trigger kind '" + s + "'");
}

DecisionAction action_from(const std::string &s) {
  if (s == "accepted") return DecisionAction::kAccepted;
  if (s == "rejected") return DecisionAction::kRejected;
  if (s == "unresolved") return DecisionAction::kUnresolved;
  throw Error(ErrorCode::kSchema, "unknown decision action '" + s + "'");
}

ordered_json match_to_json(const MatchResult &match) {
  ordered_json j;
  j["grammar"] = match.grammar_id;
  j["range"] = {match.begin, match.end};
  ordered_json bindings = ordered_json::object();
  for (const auto &[slot, positions] : match.bindings) bindings[slot] = positions;
  j["bindings"] = std::move(bindings);
  return j;
}

MatchResult match_from_json(const ordered_json &j) {
  MatchResult match;
  match.grammar_id = j.at("grammar").get<std::string>();
  match.begin = j.at("range")[0].get<int>();
  match.end = j.at("range")[1].get<int>();
  for (auto it = j.at("bindings").begin(); it != j.at("bindings").end(); ++it) {
    match.bindings[it.key()] = it.value().get<std::vector<int>>();
  }
  return match;
}

ordered_json frame_to_json(const FrameNode &frame) {
  ordered_json j;
  j["token"] = frame.token_id;
  if (!frame.node_id.empty()) {
    j["node"] = frame.node_id;
    j["label"] = frame.label;
  }
  j["span"] = {frame.span_begin, frame.span_end};
  j["text"] = frame.text;
  if (!frame.slots.empty()) {
    ordered_json slots = ordered_json::object();
    for (const auto &[name, fillers] : frame.slots) {
      ordered_json arr = ordered_json::array();
      for (const auto &filler : fillers) arr.push_back(frame_to_json(filler));
      slots[name] = std::move(arr);
    }
    j["slots"] = std::move(slots);
  }
  return j;
}

FrameNode frame_from_json(const ordered_json &j) {
  FrameNode frame;
  frame.token_id = j.at("token").get<int>();
  if (j.contains("node")) {
    frame.node_id = j["node"].get<std::string>();
    frame.label = j.at("label").get<std::string>();
  }
  frame.span_begin = j.at("span")[0].get<int>();
  frame.span_end = j.at("span")[1].get<int>();
  frame.text = j.at("text").get<std::string>();
  if (j.contains("slots")) {
    for (auto it = j["slots"].begin(); it != j["slots"].end(); ++it) {
      std::vector<FrameNode> fillers;
      for (const auto &filler : it.value()) fillers.push_back(frame_from_json(filler));
      frame.slots.push_back({it.key(), std::move(fillers)});
    }
  }
  return frame;
}

}  // namespace

ordered_json trace_to_json(const ParseTrace &trace) {
  ordered_json j;
  j["trace_version"] = kTraceVersion;
  j["sentence"] = trace.sentence;

  ordered_json levels = ordered_json::array();
  for (const auto &record : trace.levels) {
    ordered_json lr;
    lr["level"] = record.level;
    ordered_json input = ordered_json::array();
    for (const auto &token : record.input) input.push_back(token_to_json(token));
    lr["input"] = std::move(input);

    ordered_json hypotheses = ordered_json::array();
    for (const auto &h : record.hypotheses) {
      ordered_json hj;
      hj["id"] = h.id;
      hj["target"] = h.target_node_id;
      hj["kind"] = trigger_kind_name(h.kind);
      hj["trigger_tokens"] = h.trigger_tokens;
      hj["prior"] = h.prior;
      hypotheses.push_back(std::move(hj));
    }
    lr["hypotheses"] = std::move(hypotheses);

    ordered_json reports = ordered_json::array();
    for (const auto &report : record.reports) {
      ordered_json rj;
      rj["hypothesis"] = report.hypothesis_id;
      rj["success"] = report.success;
      ordered_json matches = ordered_json::array();
      for (const auto &match : report.matches) matches.push_back(match_to_json(match));
      rj["matches"] = std::move(matches);
      if (!report.failure_reason.empty()) rj["failure_reason"] = report.failure_reason;
      reports.push_back(std::move(rj));
    }
    lr["reports"] = std::move(reports);

    ordered_json decisions = ordered_json::array();
    for (const auto &decision : record.decisions) {
      ordered_json dj;
      dj["action"] = to_string(decision.action);
      dj["hypothesis"] = decision.hypothesis_id;
      dj["node"] = decision.node_id;
      dj["range"] = {decision.range_begin, decision.range_end};
      if (!decision.reason.empty()) dj["reason"] = decision.reason;
      if (decision.produced_token >= 0) dj["token"] = decision.produced_token;
      decisions.push_back(std::move(dj));
    }
    lr["decisions"] = std::move(decisions);

    ordered_json output = ordered_json::array();
    for (const auto &token : record.output) output.push_back(token_to_json(token));
    lr["output"] = std::move(output);
    levels.push_back(std::move(lr));
  }
  j["levels"] = std::move(levels);

  ordered_json frames = ordered_json::array();
  for (const auto &frame : trace.frames) frames.push_back(frame_to_json(frame));
  j["frames"] = std::move(frames);

  ordered_json residuals = ordered_json::array();
  for (const auto &residual : trace.residuals) {
    ordered_json rj;
    rj["token"] = residual.token_id;
    rj["text"] = residual.text;
    if (!residual.node_id.empty()) rj["node"] = residual.node_id;
    ordered_json attachments = ordered_json::array();
    for (const auto &attachment : residual.attachments) {
      ordered_json aj;
      aj["anchor_token"] = attachment.anchor_token;
      aj["anchor_node"] = attachment.anchor_node;
      aj["slot"] = attachment.slot;
      attachments.push_back(std::move(aj));
    }
    rj["attachments"] = std::move(attachments);
    residuals.push_back(std::move(rj));
  }
  j["residuals"] = std::move(residuals);
  return j;
}

ParseTrace trace_from_json(const ordered_json &doc) {
  if (!doc.is_object() || doc.value("trace_version", -1) != kTraceVersion) {
    throw Error(ErrorCode::kSchema, "not a trace document (trace_version mismatch)");
  }
  ParseTrace trace;
  trace.sentence = doc.at("sentence").get<std::string>();
  for (const auto &lr : doc.at("levels")) {
    LevelRecord record;
    record.level = lr.at("level").get<int>();
    for (const auto &tj : lr.at("input")) record.input.push_back(token_from_json(tj));
    for (const auto &hj : lr.at("hypotheses")) {
      Hypothesis h;
      h.id = hj.at("id").get<int>();
      h.target_node_id = hj.at("target").get<std::string>();
      h.kind = trigger_kind_from(hj.at("kind").get<std::string>());
      h.trigger_tokens = hj.at("trigger_tokens").get<std::vector<int>>();
      h.prior = hj.at("prior").get<double>();
      record.hypotheses.push_back(std::move(h));
    }
    for (const auto &rj : lr.at("reports")) {
      TestReport report;
      report.hypothesis_id = rj.at("hypothesis").get<int>();
      report.success = rj.at("success").get<bool>();
      for (const auto &mj : rj.at("matches")) report.matches.push_back(match_from_json(mj));
      if (rj.contains("failure_reason")) {
        report.failure_reason = rj["failure_reason"].get<std::string>();
      }
      record.reports.push_back(std::move(report));
    }
    for (const auto &dj : lr.at("decisions")) {
      Decision decision;
      decision.action = action_from(dj.at("action").get<std::string>());
      decision.hypothesis_id = dj.at("hypothesis").get<int>();
      decision.node_id = dj.at("node").get<std::string>();
      decision.range_begin = dj.at("range")[0].get<int>();
      decision.range_end = dj.at("range")[1].get<int>();
      if (dj.contains("reason")) decision.reason = dj["reason"].get<std::string>();
      if (dj.contains("token")) decision.produced_token = dj["token"].get<int>();
      record.decisions.push_back(std::move(decision));
    }
    for (const auto &tj : lr.at("output")) record.output.push_back(token_from_json(tj));
    trace.levels.push_back(std::move(record));
  }
  for (const auto &fj : doc.at("frames")) trace.frames.push_back(frame_from_json(fj));
  for (const auto &rj : doc.at("residuals")) {
    ResidualEntry residual;
    residual.token_id = rj.at("token").get<int>();
    residual.text = rj.at("text").get<std::string>();
    if (rj.contains("node")) residual.node_id = rj["node"].get<std::string>();
    for (const auto &aj : rj.at("attachments")) {
      residual.attachments.push_back({aj.at("anchor_token").get<int>(),
                                      aj.at("anchor_node").get<std::string>(),
                                      aj.at("slot").get<std::string>()});
    }
    trace.residuals.push_back(std::move(residual));
  }
  return trace;
}

ordered_json frames_to_json(const ParseTrace &trace) {
  ordered_json full = trace_to_json(trace);
  ordered_json j;
  j["trace_version"] = kTraceVersion;
  j["sentence"] = trace.sentence;
  j["frames"] = full["frames"];
  j["residuals"] = full["residuals"];
  return j;
}

std::string trace_summary_text(const ParseTrace &trace, int l0_token_count) {
  std::ostringstream out;
  out << "sentence: " << trace.sentence << "\n";
  out << "L0 surface tokens: " << l0_token_count << "\n";
  for (const auto &record : trace.levels) {
    int accepted = 0;
    for (const auto &decision : record.decisions) {
      if (decision.action == DecisionAction::kAccepted) ++accepted;
    }
    out << "level " << record.level << ": input " << record.input.size() << " tokens, "
        << record.hypotheses.size() << " hypotheses, " << accepted << " accepted, output "
        << record.output.size() << "\n";
  }
  out << "frames: " << trace.frames.size();
  if (!trace.frames.empty()) {
    out << " (";
    for (size_t i = 0; i < trace.frames.size(); ++i) {
      if (i > 0) out << ", ";
      out << trace.frames[i].node_id;
    }
    out << ")";
  }
  out << "\n";
  out << "residuals: " << trace.residuals.size() << "\n";
  return out.str();
}

}  // namespace hscm
