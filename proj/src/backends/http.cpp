#include "vcass/backends/http.hpp"

#include <chrono>
#include <cstdlib>
#include <memory>
#include <thread>

#include <httplib.h>

#include "vcass/common/errors.hpp"

namespace vcass::backends {

namespace {

struct SplitUrl {
  std::string scheme_host_port;  // what httplib::Client wants
  std::string path_prefix;       // anything after the authority
};

SplitUrl split_url(const std::string& base_url) {
  auto scheme_end = base_url.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError("endpoint base_url missing scheme: " + base_url);
  }
  auto path_start = base_url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) {
    return {base_url, ""};
  }
  std::string prefix = base_url.substr(path_start);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {base_url.substr(0, path_start), prefix};
}

// Backoff base is 1 s; tests may shrink it through the environment.
int backoff_base_ms() {
  if (const char* v = std::getenv("VCASS_RETRY_BASE_MS")) {
    int ms = std::atoi(v);
    if (ms > 0) return ms;
  }
  return 1000;
}

}  // namespace

void BackendEndpoint::validate() const {
  if (base_url.empty()) throw ConfigError("endpoint base_url is empty");
  if (timeout_s <= 0.0) throw ConfigError("endpoint timeout_s must be positive");
  if (max_retries < 0) throw ConfigError("endpoint max_retries must be >= 0");
  if (!is_mock() && base_url.find("://") == std::string::npos) {
    throw ConfigError("endpoint base_url missing scheme: " + base_url);
  }
}

std::string BackendEndpoint::canonical() const {
  return base_url + ";auth_env=" + auth_token_env;
}

HttpResponse post_json(const BackendEndpoint& endpoint, const std::string& path,
                       const std::string& json_body) {
  endpoint.validate();
  SplitUrl url = split_url(endpoint.base_url);

  httplib::Client client(url.scheme_host_port);
  auto timeout = std::chrono::milliseconds(static_cast<int64_t>(endpoint.timeout_s * 1000));
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);

  httplib::Headers headers;
  if (!endpoint.auth_token_env.empty()) {
    const char* token = std::getenv(endpoint.auth_token_env.c_str());
    if (!token || !*token) {
      throw ConfigError("credential env var " + endpoint.auth_token_env + " is not set");
    }
    headers.emplace("Authorization", std::string("Bearer ") + token);
  }

  const std::string full_path = url.path_prefix + path;
  const int base_ms = backoff_base_ms();

  for (int attempt = 0;; ++attempt) {
    auto res = client.Post(full_path, headers, json_body, "application/json");
    if (res) {
      if (res->status >= 200 && res->status < 300) {
        HttpResponse out;
        out.status = res->status;
        out.body = res->body;
        out.content_type = res->get_header_value("Content-Type");
        return out;
      }
      bool retryable = res->status >= 500;
      if (!retryable || attempt >= endpoint.max_retries) {
        throw BackendRejected("POST " + full_path + " -> " + std::to_string(res->status) +
                              ": " + res->body);
      }
    } else {
      if (attempt >= endpoint.max_retries) {
        throw BackendTimeout("POST " + full_path + " (" + to_string(res.error()) + ") after " +
                             std::to_string(attempt + 1) + " attempts");
      }
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(base_ms << attempt));
  }
}

}  // namespace vcass::backends
