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

#ifndef PROVESIZER_SEXPR_HPP_
#define PROVESIZER_SEXPR_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace provesizer::smt {

// Minimal SMT-LIB2 s-expression: an atom or a list.
struct SExpr {
  std::string atom;
  std::vector<SExpr> list;
  bool is_list = false;

  bool is_atom(std::string_view s) const { return !is_list && atom == s; }
};

/// Length of the first complete s-expression in `buf` (including leading
/// whitespace and comments), or nullopt if more input is needed.
std::optional<std::size_t> complete_prefix(std::string_view buf);

/// Parses exactly one s-expression; throws std::invalid_argument.
SExpr parse(std::string_view text);

/// Integer literal or (- literal). Throws std::invalid_argument otherwise.
std::int64_t to_int(const SExpr& e);

std::string to_string(const SExpr& e);

}  // namespace provesizer::smt

#endif  // PROVESIZER_SEXPR_HPP_
