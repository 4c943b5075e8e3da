#include "vcass/common/subprocess.hpp"

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <stdexcept>

#include "vcass/common/errors.hpp"

namespace vcass::subprocess {

namespace {

struct Pipe {
  int fds[2] = {-1, -1};
  Pipe() {
    if (::pipe(fds) != 0) throw std::runtime_error("pipe() failed");
  }
  ~Pipe() {
    close_read();
    close_write();
  }
  void close_read() {
    if (fds[0] >= 0) ::close(fds[0]);
    fds[0] = -1;
  }
  void close_write() {
    if (fds[1] >= 0) ::close(fds[1]);
    fds[1] = -1;
  }
};

// Reads both pipes until EOF without ordering assumptions; a child filling
// one pipe while the parent blocks on the other would otherwise deadlock.
void drain_both(int out_fd, int err_fd, std::string& out, std::string& err) {
  struct pollfd fds[2] = {{out_fd, POLLIN, 0}, {err_fd, POLLIN, 0}};
  std::string* sinks[2] = {&out, &err};
  bool open_fds[2] = {true, true};
  char buf[4096];
  while (open_fds[0] || open_fds[1]) {
    for (int i = 0; i < 2; ++i) fds[i].events = open_fds[i] ? POLLIN : 0;
    int rc = ::poll(fds, 2, -1);
    if (rc < 0) {
      if (errno == EINTR) continue;
      break;
    }
    for (int i = 0; i < 2; ++i) {
      if (!open_fds[i] || !(fds[i].revents & (POLLIN | POLLHUP | POLLERR))) continue;
      ssize_t n = ::read(fds[i].fd, buf, sizeof(buf));
      if (n > 0) {
        sinks[i]->append(buf, static_cast<size_t>(n));
      } else if (n == 0 || (n < 0 && errno != EINTR && errno != EAGAIN)) {
        open_fds[i] = false;
      }
    }
  }
}

}  // namespace

RunResult run(const std::vector<std::string>& argv) {
  if (argv.empty()) throw ConfigError("subprocess: empty argv");

  Pipe out_pipe, err_pipe, exec_pipe;
  // exec_pipe reports execvp errno back to the parent; CLOEXEC means a
  // successful exec closes it without writing.
  ::fcntl(exec_pipe.fds[1], F_SETFD, FD_CLOEXEC);

  pid_t pid = ::fork();
  if (pid < 0) throw std::runtime_error("fork() failed");

  if (pid == 0) {
    ::dup2(out_pipe.fds[1], STDOUT_FILENO);
    ::dup2(err_pipe.fds[1], STDERR_FILENO);
    out_pipe.close_read();
    out_pipe.close_write();
    err_pipe.close_read();
    err_pipe.close_write();
    exec_pipe.close_read();

    std::vector<char*> cargv;
    cargv.reserve(argv.size() + 1);
    for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
    cargv.push_back(nullptr);
    ::execvp(cargv[0], cargv.data());

    int err = errno;
    ssize_t ignored = ::write(exec_pipe.fds[1], &err, sizeof(err));
    (void)ignored;
    ::_exit(127);
  }

  out_pipe.close_write();
  err_pipe.close_write();
  exec_pipe.close_write();

  int exec_errno = 0;
  ssize_t got = ::read(exec_pipe.fds[0], &exec_errno, sizeof(exec_errno));

  RunResult result;
  drain_both(out_pipe.fds[0], err_pipe.fds[0], result.out, result.err);

  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }

  if (got == sizeof(exec_errno)) {
    throw DecoderUnavailable("cannot exec '" + argv[0] +
                             "': " + std::strerror(exec_errno));
  }

  if (WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  } else if (WIFSIGNALED(status)) {
    result.exit_code = 128 + WTERMSIG(status);
  }
  return result;
}

std::vector<std::string> render_argv(const std::vector<std::string>& argv_template,
                                     const std::map<std::string, std::string>& bindings) {
  std::vector<std::string> out;
  out.reserve(argv_template.size());
  for (const auto& token : argv_template) {
    std::string rendered;
    size_t pos = 0;
    while (pos < token.size()) {
      size_t open = token.find('{', pos);
      if (open == std::string::npos) {
        rendered.append(token, pos, std::string::npos);
        break;
      }
      size_t close = token.find('}', open + 1);
      if (close == std::string::npos) {
        rendered.append(token, pos, std::string::npos);
        break;
      }
      rendered.append(token, pos, open - pos);
      std::string key = token.substr(open + 1, close - open - 1);
      auto it = bindings.find(key);
      if (it == bindings.end()) {
        throw ConfigError("argv template references unknown placeholder {" + key + "}");
      }
      rendered += it->second;
      pos = close + 1;
    }
    out.push_back(std::move(rendered));
  }
  return out;
}

std::string join_for_log(const std::vector<std::string>& argv) {
  std::string out;
  for (size_t i = 0; i < argv.size(); ++i) {
    if (i) out += ' ';
    bool needs_quotes = argv[i].find(' ') != std::string::npos || argv[i].empty();
    if (needs_quotes) out += '\'';
    out += argv[i];
    if (needs_quotes) out += '\'';
  }
  return out;
}

}  // namespace vcass::subprocess
