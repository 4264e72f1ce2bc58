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

#ifndef HSCM_TOKEN_VIEW_HPP_
#define HSCM_TOKEN_VIEW_HPP_

#include <string>

namespace hscm {

// Minimal token surface the KB queries and the grammar runtime match
// against: functional text, L1 class path, and the bound node id (empty for
// plain tokens). Every leveled token type adapts to this.
struct TokenView {
  std::string text;
  std::string l1_class;
  std::string node_id;  // empty when the token carries no node instance
};

}  // namespace hscm

#endif  // HSCM_TOKEN_VIEW_HPP_
