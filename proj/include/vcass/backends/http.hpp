// HTTP transport for backend calls: bearer auth from the environment,
// exponential backoff (base 1 s, factor 2) on timeouts and 5xx only; 4xx is
// never retried.
#pragma once

#include <string>

#include "vcass/backends/endpoint.hpp"

namespace vcass::backends {

struct HttpResponse {
  int status = 0;
  std::string body;
  std::string content_type;
};

// POSTs `json_body` to {base_url}{path}. Throws BackendTimeout after
// max_retries exhausted on timeouts, BackendRejected on non-2xx (body
// preserved in the message), ConfigError when the credential env var is
// named but unset.
HttpResponse post_json(const BackendEndpoint& endpoint, const std::string& path,
                       const std::string& json_body);

}  // namespace vcass::backends
