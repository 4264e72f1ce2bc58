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

#include "hscm/text/tokenize.hpp"

#include <cctype>

#include "hscm/error.hpp"

namespace hscm {

namespace {

bool is_delimiter(char c) {
  switch (c) {
    case ' ':
    case '\t':
    case '\n':
    case '\r':
    case '\f':
    case '\v':
    case '(':
    case ')':
    case '[':
    case ']':
    case '{':
    case '}':
      return true;
    default:
      return false;
  }
}

bool is_quote(char c) { return c == '"'; }

bool is_trailing_punct(char c) { return c == '.' || c == ',' || c == ';' || c == ':'; }

}  // namespace

bool is_valid_utf8(std::string_view text) {
  size_t i = 0;
  while (i < text.size()) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    int extra;
    unsigned int code_floor;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      extra = 1;
      code_floor = 0x80;
    } else if ((c & 0xF0) == 0xE0) {
      extra = 2;
      code_floor = 0x800;
    } else if ((c & 0xF8) == 0xF0) {
      extra = 3;
      code_floor = 0x10000;
    } else {
      return false;
    }
    if (i + extra >= text.size()) return false;
    unsigned int code = c & (0x3F >> extra);
    for (int k = 1; k <= extra; ++k) {
      unsigned char cont = static_cast<unsigned char>(text[i + k]);
      if ((cont & 0xC0) != 0x80) return false;
      code = (code << 6) | (cont & 0x3F);
    }
    if (code < code_floor) return false;               // overlong encoding
    if (code > 0x10FFFF) return false;
    if (code >= 0xD800 && code <= 0xDFFF) return false;  // surrogate range
    i += 1 + extra;
  }
  return true;
}

std::vector<SurfaceToken> tokenize_l0(std::string_view sentence) {
  if (!is_valid_utf8(sentence)) {
    throw Error(ErrorCode::kEncoding, "input is not valid UTF-8");
  }

  std::vector<SurfaceToken> tokens;
  const int n = static_cast<int>(sentence.size());
  int i = 0;
  while (i < n) {
    if (is_delimiter(sentence[i]) || is_quote(sentence[i])) {
      ++i;
      continue;
    }
    int begin = i;
    while (i < n && !is_delimiter(sentence[i]) && !is_quote(sentence[i])) ++i;
    int end = i;
    // Trailing sentence punctuation detaches as ignorable. Internal periods
    // (e.g. decimal points) are untouched because only the tail is trimmed.
    while (end > begin && is_trailing_punct(sentence[end - 1])) --end;
    if (end == begin) continue;  // pure punctuation run
    tokens.push_back(SurfaceToken{std::string(sentence.substr(begin, end - begin)), begin, end});
  }
  return tokens;
}

}  // namespace hscm
