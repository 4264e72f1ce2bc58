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

#ifndef HSCM_TEXT_LEXICAL_HPP_
#define HSCM_TEXT_LEXICAL_HPP_

#include <span>
#include <string>
#include <vector>

#include "hscm/kb/model.hpp"
#include "hscm/text/tokenize.hpp"

namespace hscm {

// Reserved L1 class for out-of-vocabulary tokens.
inline constexpr const char *kUnknownL1Class = "_UNKNOWN";
inline constexpr const char *kUnknownPos = "unknown";

// Functional word with its word-level features. The functional text is the
// canonical (case-folded, abbreviation-expanded) form; the span still points
// at the original characters.
struct FunctionalToken {
  std::string text;
  int begin = 0;
  int end = 0;
  std::string l1_class;
  std::string pos;
  std::vector<int> source;  // indices of the surface tokens it derives from
};

struct LexOptions {
  // Consult the sequence model to rewrite _UNKNOWN tokens that have a unique
  // top-ranked class.
  bool resolve_unknown = true;
};

// Surface -> functional mapping: measurement splits (digit+unit fusions),
// collocation/idiom merges (longest match first), abbreviation expansion,
// then lexicon lookup. Pure digit tokens classify as "number"/"adjective"
// unless an exact entry overrides; everything else out of vocabulary gets
// _UNKNOWN (optionally rewritten via the sequence model).
std::vector<FunctionalToken> lexical_analyze(const KnowledgeBase &kb,
                                             std::span<const SurfaceToken> surface,
                                             const LexOptions &options = {});

}  // namespace hscm

#endif  // HSCM_TEXT_LEXICAL_HPP_
