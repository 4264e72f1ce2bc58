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

#include "hscm/radiology/pack.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hscm/error.hpp"
#include "hscm/kb/load.hpp"

#ifndef HSCM_DATA_DIR
#define HSCM_DATA_DIR "data"
#endif

namespace hscm::radiology {

namespace {

using json = nlohmann::ordered_json;

json read_json_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read file: " + path, path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return json::parse(buffer.str());
}

}  // namespace

std::string pack_dir() {
  if (const char *env = std::getenv("HSCM_DATA_DIR")) {
    return std::string(env) + "/radiology/v1";
  }
  return std::string(HSCM_DATA_DIR) + "/radiology/v1";
}

std::string kb_path() { return pack_dir() + "/kb.json"; }

KnowledgeBase load_pack() { return load_kb_file(kb_path()); }

std::vector<GoldenCase> golden_cases() {
  const std::string dir = pack_dir() + "/golden";
  std::vector<std::string> files;
  for (const auto &entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path().string());
  }
  std::sort(files.begin(), files.end());

  std::vector<GoldenCase> cases;
  for (const auto &file : files) {
    json doc = read_json_file(file);
    GoldenCase golden;
    golden.name = doc.at("name").get<std::string>();
    golden.sentence = doc.at("sentence").get<std::string>();
    if (doc.contains("context")) {
      golden.context = doc["context"].get<std::vector<std::string>>();
    }
    golden.expected = doc.value("expected", json::object());
    if (doc.contains("forbidden_nodes")) {
      golden.forbidden_nodes = doc["forbidden_nodes"].get<std::vector<std::string>>();
    }
    cases.push_back(std::move(golden));
  }
  return cases;
}

namespace {

bool subset_match(const json &expected, const json &actual, const std::string &path,
                  std::string *mismatch);

bool subset_match_object(const json &expected, const json &actual, const std::string &path,
                         std::string *mismatch) {
  static const std::string kCountSuffix = "_count";
  for (auto it = expected.begin(); it != expected.end(); ++it) {
    const std::string &key = it.key();
    // "<key>_count": N asserts that actual[key] is an array of N elements.
    if (key.size() > kCountSuffix.size() &&
        key.compare(key.size() - kCountSuffix.size(), kCountSuffix.size(), kCountSuffix) == 0 &&
        it.value().is_number_integer()) {
      const std::string target = key.substr(0, key.size() - kCountSuffix.size());
      if (!actual.contains(target) || !actual[target].is_array() ||
          static_cast<long long>(actual[target].size()) != it.value().get<long long>()) {
        if (mismatch != nullptr) *mismatch = path + "." + key;
        return false;
      }
      continue;
    }
    if (!actual.contains(key)) {
      if (mismatch != nullptr) *mismatch = path + "." + key + " (missing)";
      return false;
    }
    if (!subset_match(it.value(), actual[key], path + "." + key, mismatch)) return false;
  }
  return true;
}

// Expected arrays must be in-order subsequences of the actual ones.
bool subset_match_array(const json &expected, const json &actual, const std::string &path,
                        std::string *mismatch) {
  size_t a = 0;
  for (size_t e = 0; e < expected.size(); ++e) {
    bool found = false;
    while (a < actual.size()) {
      std::string scratch;
      if (subset_match(expected[e], actual[a], path + "[" + std::to_string(e) + "]", &scratch)) {
        found = true;
        ++a;
        break;
      }
      ++a;
    }
    if (!found) {
      if (mismatch != nullptr) {
        *mismatch = path + "[" + std::to_string(e) + "] (no matching element)";
      }
      return false;
    }
  }
  return true;
}

bool subset_match(const json &expected, const json &actual, const std::string &path,
                  std::string *mismatch) {
  if (expected.is_object()) {
    if (!actual.is_object()) {
      if (mismatch != nullptr) *mismatch = path + " (expected object)";
      return false;
    }
    return subset_match_object(expected, actual, path, mismatch);
  }
  if (expected.is_array()) {
    if (!actual.is_array()) {
      if (mismatch != nullptr) *mismatch = path + " (expected array)";
      return false;
    }
    return subset_match_array(expected, actual, path, mismatch);
  }
  if (expected != actual) {
    if (mismatch != nullptr) {
      *mismatch = path + " (expected " + expected.dump() + ", got " + actual.dump() + ")";
    }
    return false;
  }
  return true;
}

void collect_node_ids(const json &value, std::vector<std::string> &out) {
  if (value.is_object()) {
    // Instantiations are token node instances ({"node": {"id": ...}}) and
    // frame/residual entries ({"token": ..., "node": "..."}). Decision and
    // hypothesis records name nodes too but are not instantiations.
    if (value.contains("node")) {
      const json &node = value["node"];
      if (node.is_object() && node.contains("id") && node["id"].is_string()) {
        out.push_back(node["id"].get<std::string>());
      } else if (node.is_string() && value.contains("token")) {
        out.push_back(node.get<std::string>());
      }
    }
    for (auto it = value.begin(); it != value.end(); ++it) collect_node_ids(it.value(), out);
  } else if (value.is_array()) {
    for (const auto &element : value) collect_node_ids(element, out);
  }
}

}  // namespace

bool structural_subset(const json &expected, const json &actual, std::string *mismatch) {
  return subset_match(expected, actual, "$", mismatch);
}

bool trace_avoids_nodes(const json &trace_doc, const std::vector<std::string> &node_ids,
                        std::string *found) {
  std::vector<std::string> instantiated;
  collect_node_ids(trace_doc, instantiated);
  for (const auto &forbidden : node_ids) {
    if (std::find(instantiated.begin(), instantiated.end(), forbidden) != instantiated.end()) {
      if (found != nullptr) *found = forbidden;
      return false;
    }
  }
  return true;
}

}  // namespace hscm::radiology
