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

#ifndef PROVESIZER_SMT_PROCESS_HPP_
#define PROVESIZER_SMT_PROCESS_HPP_

#include <sys/types.h>

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace provesizer::smt {

using Clock = std::chrono::steady_clock;

// A solver subprocess speaking SMT-LIB2 on stdin/stdout. stderr is discarded.
class SolverProcess {
 public:
  // Throws Error(kSolverUnavailable) if the command cannot be executed.
  SolverProcess(const std::string& command,
                const std::vector<std::string>& args);
  ~SolverProcess();

  SolverProcess(const SolverProcess&) = delete;
  SolverProcess& operator=(const SolverProcess&) = delete;

  // Returns false if the solver closed its input.
  bool send(std::string_view text);

  // Next complete s-expression from stdout; nullopt on deadline or EOF.
  std::optional<std::string> read_response(Clock::time_point deadline);

  bool eof() const { return eof_; }

  void kill();

 private:
  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
  bool eof_ = false;
};

}  // namespace provesizer::smt

#endif  // PROVESIZER_SMT_PROCESS_HPP_
