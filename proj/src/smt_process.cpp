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

#include "provesizer/smt_process.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <mutex>

#include "provesizer/error.hpp"
#include "provesizer/sexpr.hpp"

namespace provesizer::smt {

namespace {

void ignore_sigpipe_once() {
  // A solver that dies mid-write must surface as a failed send(), not kill us.
  static std::once_flag flag;
  std::call_once(flag, [] { ::signal(SIGPIPE, SIG_IGN); });
}

void close_fd(int& fd) {
  if (fd >= 0) {
    ::close(fd);
    fd = -1;
  }
}

}  // namespace

SolverProcess::SolverProcess(const std::string& command,
                             const std::vector<std::string>& args) {
  ignore_sigpipe_once();
  int in_pipe[2];
  int out_pipe[2];
  int exec_pipe[2];
  if (::pipe(in_pipe) != 0) {
    throw Error(ErrorCode::kSolverUnavailable, "pipe() failed");
  }
  if (::pipe(out_pipe) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw Error(ErrorCode::kSolverUnavailable, "pipe() failed");
  }
  if (::pipe2(exec_pipe, O_CLOEXEC) != 0) {
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) {
      ::close(fd);
    }
    throw Error(ErrorCode::kSolverUnavailable, "pipe2() failed");
  }

  std::vector<std::string> argv_store;
  argv_store.push_back(command);
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  argv.push_back(nullptr);

  pid_ = ::fork();
  if (pid_ < 0) {
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1],
                   exec_pipe[0], exec_pipe[1]}) {
      ::close(fd);
    }
    throw Error(ErrorCode::kSolverUnavailable, "fork() failed");
  }
  if (pid_ == 0) {
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    const int devnull = ::open("/dev/null", O_WRONLY);
    if (devnull >= 0) ::dup2(devnull, STDERR_FILENO);
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    ::close(out_pipe[1]);
    ::close(exec_pipe[0]);
    ::execvp(argv[0], argv.data());
    const int err = errno;
    [[maybe_unused]] auto n = ::write(exec_pipe[1], &err, sizeof(err));
    ::_exit(127);
  }

  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  ::close(exec_pipe[1]);
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];

  int child_errno = 0;
  ssize_t n;
  do {
    n = ::read(exec_pipe[0], &child_errno, sizeof(child_errno));
  } while (n < 0 && errno == EINTR);
  ::close(exec_pipe[0]);
  if (n > 0) {
    int status = 0;
    ::waitpid(pid_, &status, 0);
    pid_ = -1;
    close_fd(to_child_);
    close_fd(from_child_);
    throw Error(ErrorCode::kSolverUnavailable,
                "cannot execute solver '" + command +
                    "': " + std::strerror(child_errno));
  }
}

SolverProcess::~SolverProcess() { kill(); }

bool SolverProcess::send(std::string_view text) {
  if (to_child_ < 0) return false;
  while (!text.empty()) {
    const ssize_t n = ::write(to_child_, text.data(), text.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    text.remove_prefix(static_cast<std::size_t>(n));
  }
  return true;
}

std::optional<std::string> SolverProcess::read_response(
    Clock::time_point deadline) {
  for (;;) {
    if (auto end = complete_prefix(buffer_)) {
      std::string out = buffer_.substr(0, *end);
      buffer_.erase(0, *end);
      const auto first = out.find_first_not_of(" \t\r\n");
      return first == std::string::npos ? std::string() : out.substr(first);
    }
    if (eof_ || from_child_ < 0) return std::nullopt;
    const auto now = Clock::now();
    if (now >= deadline) return std::nullopt;
    const auto remaining =
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now);
    pollfd pfd{from_child_, POLLIN, 0};
    const int timeout_ms =
        static_cast<int>(std::min<long long>(remaining.count() + 1, 1 << 30));
    const int rc = ::poll(&pfd, 1, timeout_ms);
    if (rc < 0) {
      if (errno == EINTR) continue;
      return std::nullopt;
    }
    if (rc == 0) continue;
    char chunk[4096];
    const ssize_t n = ::read(from_child_, chunk, sizeof(chunk));
    if (n < 0) {
      if (errno == EINTR) continue;
      eof_ = true;
    } else if (n == 0) {
      eof_ = true;
      // A bare trailing atom without newline is still a response.
      if (!buffer_.empty() && buffer_.find_first_not_of(" \t\r\n") !=
                                  std::string::npos) {
        buffer_ += '\n';
      }
    } else {
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }
}

void SolverProcess::kill() {
  close_fd(to_child_);
  close_fd(from_child_);
  if (pid_ > 0) {
    ::kill(pid_, SIGKILL);
    int status = 0;
    while (::waitpid(pid_, &status, 0) < 0 && errno == EINTR) {
    }
    pid_ = -1;
  }
}

}  // namespace provesizer::smt
