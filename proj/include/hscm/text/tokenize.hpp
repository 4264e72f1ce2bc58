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

#ifndef HSCM_TEXT_TOKENIZE_HPP_
#define HSCM_TEXT_TOKENIZE_HPP_

#include <string>
#include <string_view>
#include <vector>

namespace hscm {

// Verbatim surface word. Spans are byte offsets into the UTF-8 input,
// start inclusive / end exclusive; text always equals the spanned substring.
struct SurfaceToken {
  std::string text;
  int begin = 0;
  int end = 0;
};

// Surface tokenization: splits on whitespace and brackets, drops quote
// characters, detaches trailing sentence punctuation (.,;:) as ignorable.
// Hyphens and slashes stay intact here. Throws Error{kEncoding} for byte
// sequences that are not valid UTF-8.
std::vector<SurfaceToken> tokenize_l0(std::string_view sentence);

bool is_valid_utf8(std::string_view text);

}  // namespace hscm

#endif  // HSCM_TEXT_TOKENIZE_HPP_
