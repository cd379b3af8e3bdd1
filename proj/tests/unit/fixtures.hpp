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

#ifndef PROVESIZER_TESTS_FIXTURES_HPP_
#define PROVESIZER_TESTS_FIXTURES_HPP_

#include <cstdlib>
#include <string>

#include "provesizer/cli.hpp"
#include "provesizer/optimizer.hpp"
#include "provesizer/scenarios.hpp"

namespace provesizer::testing {

inline PipelineParams scenario_params(const std::string& name,
                                      const std::string& machine = "gpu-8xl4") {
  const Catalog& c = builtin_catalog();
  return to_params(find_scenario(c, name), find_machine(c, machine));
}

// The solver under test; PROVESIZER_SOLVER overrides "z3 -in".
inline SolverEndpoint test_solver() {
  SolverEndpoint e;
  if (const char* env = std::getenv("PROVESIZER_SOLVER"); env && *env) {
    cli::apply_solver_command(e, env);
  }
  return e;
}

}  // namespace provesizer::testing

#endif  // PROVESIZER_TESTS_FIXTURES_HPP_
