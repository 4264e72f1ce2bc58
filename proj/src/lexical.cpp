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

#include "hscm/text/lexical.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>

#include "hscm/kb/query.hpp"

namespace hscm {

namespace {

std::string casefold(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool is_number_text(std::string_view text) {
  if (text.empty()) return false;
  size_t i = 0;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
  if (i == 0) return false;
  if (i == text.size()) return true;
  if (text[i] != '.') return false;
  ++i;
  if (i == text.size()) return false;
  while (i < text.size()) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) return false;
    ++i;
  }
  return true;
}

struct Unit {
  std::string text;  // as written
  int begin = 0;
  int end = 0;
  std::vector<int> source;
  bool classified = false;
  std::string functional;
  std::string l1_class;
  std::string pos;
};

}  // namespace

std::vector<FunctionalToken> lexical_analyze(const KnowledgeBase &kb,
                                             std::span<const SurfaceToken> surface,
                                             const LexOptions &options) {
  // Lookup structures. First entry wins on duplicate surfaces.
  std::unordered_map<std::string, const LexiconEntry *> words;
  std::vector<const LexiconEntry *> splitters;
  std::vector<std::pair<std::vector<std::string>, const LexiconEntry *>> phrases;
  for (const auto &entry : kb.lexicon) {
    switch (entry.kind) {
      case LexEntryKind::kCollocation:
      case LexEntryKind::kIdiom: {
        std::vector<std::string> folded;
        for (const auto &s : entry.surface) folded.push_back(casefold(s));
        phrases.push_back({std::move(folded), &entry});
        break;
      }
      case LexEntryKind::kMeasurementSplitter:
        splitters.push_back(&entry);
        [[fallthrough]];  // the unit surface doubles as a word entry
      case LexEntryKind::kWord:
      case LexEntryKind::kAbbreviation:
        if (entry.surface.size() == 1) {
          words.emplace(casefold(entry.surface[0]), &entry);
        }
        break;
    }
  }
  // Longest unit suffix first ("mm" before "m").
  std::stable_sort(splitters.begin(), splitters.end(), [](const auto *a, const auto *b) {
    return a->surface[0].size() > b->surface[0].size();
  });
  // Longest collocation first.
  std::stable_sort(phrases.begin(), phrases.end(), [](const auto &a, const auto &b) {
    return a.first.size() > b.first.size();
  });

  // Measurement splits: digit(.digit)? + known unit suffix becomes two units
  // with adjacent sub-spans of the source span.
  std::vector<Unit> units;
  for (int i = 0; i < static_cast<int>(surface.size()); ++i) {
    const SurfaceToken &token = surface[i];
    const std::string folded = casefold(token.text);
    bool split = false;
    for (const auto *splitter : splitters) {
      const std::string &unit_form = casefold(splitter->surface[0]);
      if (folded.size() <= unit_form.size()) continue;
      if (folded.compare(folded.size() - unit_form.size(), unit_form.size(), unit_form) != 0) {
        continue;
      }
      const std::string head = token.text.substr(0, token.text.size() - unit_form.size());
      if (!is_number_text(head)) continue;
      const int cut = token.begin + static_cast<int>(head.size());
      units.push_back({head, token.begin, cut, {i}, false, {}, {}, {}});
      units.push_back({token.text.substr(head.size()), cut, token.end, {i}, false, {}, {}, {}});
      split = true;
      break;
    }
    if (!split) units.push_back({token.text, token.begin, token.end, {i}, false, {}, {}, {}});
  }

  // Collocation / idiom merges, longest match first, left to right.
  std::vector<Unit> merged;
  for (size_t i = 0; i < units.size();) {
    const LexiconEntry *hit = nullptr;
    size_t hit_len = 0;
    for (const auto &[forms, entry] : phrases) {
      if (i + forms.size() > units.size()) continue;
      bool all = true;
      for (size_t k = 0; k < forms.size(); ++k) {
        if (casefold(units[i + k].text) != forms[k]) {
          all = false;
          break;
        }
      }
      if (all) {
        hit = entry;
        hit_len = forms.size();
        break;  // phrases are sorted longest first
      }
    }
    if (hit != nullptr) {
      Unit unit;
      unit.text = hit->functional;
      unit.begin = units[i].begin;
      unit.end = units[i + hit_len - 1].end;
      for (size_t k = 0; k < hit_len; ++k) {
        for (int s : units[i + k].source) unit.source.push_back(s);
      }
      unit.classified = true;
      unit.functional = hit->functional;
      unit.l1_class = hit->l1_class;
      unit.pos = hit->pos;
      merged.push_back(std::move(unit));
      i += hit_len;
    } else {
      merged.push_back(std::move(units[i]));
      ++i;
    }
  }

  // Lexicon lookup; built-in number recognition; _UNKNOWN fallback.
  for (auto &unit : merged) {
    if (unit.classified) continue;
    const std::string folded = casefold(unit.text);
    auto it = words.find(folded);
    if (it != words.end()) {
      unit.functional = it->second->functional;
      unit.l1_class = it->second->l1_class;
      unit.pos = it->second->pos;
    } else if (is_number_text(unit.text)) {
      unit.functional = unit.text;
      unit.l1_class = "number";
      unit.pos = "adjective";
    } else {
      unit.functional = folded;
      unit.l1_class = kUnknownL1Class;
      unit.pos = kUnknownPos;
    }
    unit.classified = true;
  }

  // Sequence-model rewrite of _UNKNOWN tokens with a unique top candidate.
  if (options.resolve_unknown) {
    std::vector<std::string> classes;
    classes.reserve(merged.size());
    for (const auto &unit : merged) classes.push_back(unit.l1_class);
    for (size_t i = 0; i < merged.size(); ++i) {
      if (classes[i] != kUnknownL1Class) continue;
      auto ranking = query_unknown_assignment(kb, classes, static_cast<int>(i));
      if (ranking.empty()) continue;
      if (ranking.size() >= 2 && ranking[0].second == ranking[1].second) continue;
      classes[i] = ranking[0].first;
      merged[i].l1_class = ranking[0].first;
    }
  }

  std::vector<FunctionalToken> out;
  out.reserve(merged.size());
  for (auto &unit : merged) {
    out.push_back({std::move(unit.functional), unit.begin, unit.end, std::move(unit.l1_class),
                   std::move(unit.pos), std::move(unit.source)});
  }
  return out;
}

}  // namespace hscm
