// Copyright 2026 The Provesizer Authors
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

#include "provesizer/sexpr.hpp"

#include <cctype>
#include <charconv>
#include <stdexcept>

namespace provesizer::smt {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)); }

// Skips whitespace and ';' comments. Returns npos if a comment is unterminated.
std::size_t skip_blank(std::string_view s, std::size_t i) {
  while (i < s.size()) {
    if (is_space(s[i])) {
      ++i;
    } else if (s[i] == ';') {
      const auto nl = s.find('\n', i);
      if (nl == std::string_view::npos) return std::string_view::npos;
      i = nl + 1;
    } else {
      break;
    }
  }
  return i;
}

// End of a string literal or |quoted| symbol starting at i, or npos.
std::size_t skip_quoted(std::string_view s, std::size_t i) {
  const char q = s[i];
  ++i;
  while (i < s.size()) {
    if (s[i] == q) {
      // "" is an escaped quote inside SMT-LIB strings.
      if (q == '"' && i + 1 < s.size() && s[i + 1] == '"') {
        i += 2;
        continue;
      }
      return i + 1;
    }
    ++i;
  }
  return std::string_view::npos;
}

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  SExpr parse_one() {
    pos_ = skip_blank(s_, pos_);
    if (pos_ == std::string_view::npos || pos_ >= s_.size()) {
      throw std::invalid_argument("unexpected end of s-expression");
    }
    if (s_[pos_] == ')') throw std::invalid_argument("unbalanced ')'");
    SExpr e;
    if (s_[pos_] == '(') {
      e.is_list = true;
      ++pos_;
      for (;;) {
        pos_ = skip_blank(s_, pos_);
        if (pos_ == std::string_view::npos || pos_ >= s_.size()) {
          throw std::invalid_argument("unterminated list");
        }
        if (s_[pos_] == ')') {
          ++pos_;
          break;
        }
        e.list.push_back(parse_one());
      }
      return e;
    }
    const std::size_t start = pos_;
    if (s_[pos_] == '"' || s_[pos_] == '|') {
      pos_ = skip_quoted(s_, pos_);
      if (pos_ == std::string_view::npos) {
        throw std::invalid_argument("unterminated quoted token");
      }
    } else {
      while (pos_ < s_.size() && !is_space(s_[pos_]) && s_[pos_] != '(' &&
             s_[pos_] != ')' && s_[pos_] != ';') {
        ++pos_;
      }
    }
    e.atom = std::string(s_.substr(start, pos_ - start));
    return e;
  }

  std::size_t pos() const { return pos_; }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

std::optional<std::size_t> complete_prefix(std::string_view buf) {
  std::size_t i = skip_blank(buf, 0);
  if (i == std::string_view::npos || i >= buf.size()) return std::nullopt;
  if (buf[i] != '(') {
    // An atom is complete once a delimiter follows it.
    if (buf[i] == '"' || buf[i] == '|') {
      const auto end = skip_quoted(buf, i);
      if (end == std::string_view::npos) return std::nullopt;
      return end;
    }
    while (i < buf.size() && !is_space(buf[i]) && buf[i] != '(' &&
           buf[i] != ')') {
      ++i;
    }
    if (i >= buf.size()) return std::nullopt;
    return i;
  }
  int depth = 0;
  while (i < buf.size()) {
    const char c = buf[i];
    if (c == '(') {
      ++depth;
      ++i;
    } else if (c == ')') {
      --depth;
      ++i;
      if (depth == 0) return i;
    } else if (c == '"' || c == '|') {
      i = skip_quoted(buf, i);
      if (i == std::string_view::npos) return std::nullopt;
    } else if (c == ';') {
      i = skip_blank(buf, i);
      if (i == std::string_view::npos) return std::nullopt;
    } else {
      ++i;
    }
  }
  return std::nullopt;
}

SExpr parse(std::string_view text) {
  Parser p(text);
  SExpr e = p.parse_one();
  const auto rest = skip_blank(text, p.pos());
  if (rest != std::string_view::npos && rest < text.size()) {
    throw std::invalid_argument("trailing input after s-expression");
  }
  return e;
}

std::int64_t to_int(const SExpr& e) {
  if (e.is_list) {
    if (e.list.size() == 2 && e.list[0].is_atom("-")) return -to_int(e.list[1]);
    throw std::invalid_argument("not an integer term: " + to_string(e));
  }
  std::int64_t v = 0;
  const char* first = e.atom.data();
  const char* last = first + e.atom.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw std::invalid_argument("not an integer literal: " + e.atom);
  }
  return v;
}

std::string to_string(const SExpr& e) {
  if (!e.is_list) return e.atom;
  std::string out = "(";
  for (std::size_t i = 0; i < e.list.size(); ++i) {
    if (i) out += ' ';
    out += to_string(e.list[i]);
  }
  out += ')';
  return out;
}

}  // namespace provesizer::smt
