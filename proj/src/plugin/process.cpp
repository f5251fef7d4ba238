// Copyright 2026 The Bento Authors
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

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "bento/error.hpp"
#include "bento/plugin.hpp"
#include "bento/util.hpp"

namespace bento::plugin {

namespace {

constexpr std::size_t kTailBytes = 4096;

void append_tail(std::string& tail, const char* data, std::size_t n) {
  tail.append(data, n);
  if (tail.size() > 2 * kTailBytes) tail.erase(0, tail.size() - kTailBytes);
}

}  // namespace

ProcessResult run_process(const std::filesystem::path& exe, const std::vector<std::string>& args,
                          const std::filesystem::path& working_dir,
                          std::chrono::milliseconds timeout,
                          const std::filesystem::path& stdout_path) {
  int err_pipe[2];
  if (::pipe2(err_pipe, O_CLOEXEC) != 0) {
    raise(ErrorCode::kIo, std::string("pipe: ") + std::strerror(errno));
  }

  std::vector<std::string> argv_storage;
  argv_storage.push_back(exe.string());
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());
  argv.push_back(nullptr);
  const std::string out_path = stdout_path.empty() ? "/dev/null" : stdout_path.string();
  const std::string cwd = working_dir.string();

  const pid_t pid = ::fork();
  if (pid < 0) {
    ::close(err_pipe[0]);
    ::close(err_pipe[1]);
    raise(ErrorCode::kIo, std::string("fork: ") + std::strerror(errno));
  }
  if (pid == 0) {
    ::setpgid(0, 0);
    int out = ::open(out_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    if (out >= 0) ::dup2(out, STDOUT_FILENO);
    ::dup2(err_pipe[1], STDERR_FILENO);
    int null_in = ::open("/dev/null", O_RDONLY);
    if (null_in >= 0) ::dup2(null_in, STDIN_FILENO);
    if (!cwd.empty() && ::chdir(cwd.c_str()) != 0) _exit(126);
    ::execv(argv[0], argv.data());
    const char msg[] = "exec failed\n";
    (void)!::write(STDERR_FILENO, msg, sizeof(msg) - 1);
    _exit(127);
  }
  ::close(err_pipe[1]);

  ProcessResult result;
  const std::int64_t deadline = now_ns() + std::chrono::nanoseconds(timeout).count();
  bool pipe_open = true;
  int status = 0;
  bool exited = false;
  char buf[4096];
  while (!exited) {
    const std::int64_t remaining_ms = (deadline - now_ns()) / 1'000'000;
    if (remaining_ms <= 0) {
      ::kill(-pid, SIGKILL);
      ::kill(pid, SIGKILL);
      ::waitpid(pid, &status, 0);
      result.timed_out = true;
      exited = true;
      break;
    }
    if (pipe_open) {
      pollfd pfd{err_pipe[0], POLLIN, 0};
      int rc = ::poll(&pfd, 1, static_cast<int>(std::min<std::int64_t>(remaining_ms, 50)));
      if (rc > 0) {
        ssize_t n = ::read(err_pipe[0], buf, sizeof(buf));
        if (n > 0) {
          append_tail(result.stderr_tail, buf, static_cast<std::size_t>(n));
        } else if (n == 0) {
          pipe_open = false;
        }
      }
    } else {
      ::usleep(1000);
    }
    pid_t w = ::waitpid(pid, &status, WNOHANG);
    if (w == pid) exited = true;
  }
  // Drain whatever the child wrote just before exiting.
  ::fcntl(err_pipe[0], F_SETFL, O_NONBLOCK);
  for (;;) {
    ssize_t n = ::read(err_pipe[0], buf, sizeof(buf));
    if (n <= 0) break;
    append_tail(result.stderr_tail, buf, static_cast<std::size_t>(n));
  }
  ::close(err_pipe[0]);
  if (result.stderr_tail.size() > kTailBytes) {
    result.stderr_tail.erase(0, result.stderr_tail.size() - kTailBytes);
  }

  if (result.timed_out) {
    result.exit_code = 128 + SIGKILL;
    result.signal = SIGKILL;
  } else if (WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  } else if (WIFSIGNALED(status)) {
    result.signal = WTERMSIG(status);
    result.exit_code = 128 + result.signal;
  }
  return result;
}

}  // namespace bento::plugin
