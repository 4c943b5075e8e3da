// Backend endpoint descriptor shared by the four model services (vlm, llm,
// tts, embed). Credentials never live in config files; only the *name* of
// the environment variable holding them does. A `mock://` base_url routes
// the client to the in-process deterministic mock.
#pragma once

#include <string>

namespace vcass::backends {

struct BackendEndpoint {
  std::string base_url;
  std::string auth_token_env;  // "" = unauthenticated
  double timeout_s = 30.0;
  int max_retries = 2;

  bool is_mock() const { return base_url.rfind("mock://", 0) == 0; }
  void validate() const;
  std::string canonical() const;  // stable string for cache keys
};

}  // namespace vcass::backends
