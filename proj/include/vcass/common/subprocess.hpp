// Thin POSIX subprocess runner plus the argv-template rendering used by the
// external decoder/muxer contract. Templates are token lists; each token may
// contain `{placeholder}` markers replaced verbatim before exec.
#pragma once

#include <map>
#include <string>
#include <vector>

namespace vcass::subprocess {

struct RunResult {
  int exit_code = -1;
  std::string out;  // captured stdout
  std::string err;  // captured stderr
};

// Throws DecoderUnavailable when the executable cannot be spawned (missing
// binary). Nonzero exit is reported in the result, not thrown.
RunResult run(const std::vector<std::string>& argv);

// Replaces every `{key}` occurrence in every token. Throws ConfigError on
// placeholders without a binding.
std::vector<std::string> render_argv(const std::vector<std::string>& argv_template,
                                     const std::map<std::string, std::string>& bindings);

std::string join_for_log(const std::vector<std::string>& argv);

}  // namespace vcass::subprocess
