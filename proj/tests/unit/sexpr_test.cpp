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

#include <stdexcept>

#include "doctest.h"

#include "provesizer/sexpr.hpp"

using namespace provesizer::smt;

TEST_CASE("complete_prefix waits for balanced input") {
  CHECK_FALSE(complete_prefix("").has_value());
  CHECK_FALSE(complete_prefix("((x 1)").has_value());
  CHECK_FALSE(complete_prefix("(msg \"a)").has_value());
  CHECK(complete_prefix("sat\n").value() == 3);
  CHECK(complete_prefix("  (a (b c)) tail").value() == 11);
  CHECK(complete_prefix("; note\n(a)").value() == 10);
}

TEST_CASE("parse models returned by get-value") {
  const SExpr e = parse("((n_super 2) (batch_epoch_cs (- 5)) (total_cost 220602503))");
  REQUIRE(e.is_list);
  REQUIRE(e.list.size() == 3);
  CHECK(e.list[0].list[0].is_atom("n_super"));
  CHECK(to_int(e.list[0].list[1]) == 2);
  CHECK(to_int(e.list[1].list[1]) == -5);
  CHECK(to_int(e.list[2].list[1]) == 220602503);
}

TEST_CASE("strings keep escaped quotes and parens") {
  const SExpr e = parse("(error \"line 1: \"\"x\"\" (bad)\")");
  REQUIRE(e.list.size() == 2);
  CHECK(e.list[0].is_atom("error"));
  CHECK(to_string(e) == "(error \"line 1: \"\"x\"\" (bad)\")");
}

TEST_CASE("malformed input throws") {
  CHECK_THROWS_AS(parse(")"), std::invalid_argument);
  CHECK_THROWS_AS(parse("(a b"), std::invalid_argument);
  CHECK_THROWS_AS(to_int(parse("abc")), std::invalid_argument);
  CHECK_THROWS_AS(to_int(parse("(a b)")), std::invalid_argument);
}
