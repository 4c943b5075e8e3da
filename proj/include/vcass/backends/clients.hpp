// Typed clients over the four wire contracts. `mock://` endpoints dispatch
// to the in-process deterministic mocks; anything else goes over HTTP.
//
//   POST {base}/v1/analyze    {prompt, frames:[{hash, png_base64}]} -> {text}
//   POST {base}/v1/complete   {prompt}                              -> {text}
//   POST {base}/v1/synthesize {instruction}                -> audio/wav body
//   POST {base}/v1/embed      {texts:[...]}                -> {vectors:[[..]]}
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vcass/backends/endpoint.hpp"

namespace vcass::backends {

struct FramePayload {
  std::string hash;
  std::vector<uint8_t> png_bytes;
};

class VlmClient {
 public:
  explicit VlmClient(BackendEndpoint endpoint) : endpoint_(std::move(endpoint)) {}
  // Returns the raw response text. Throws BackendTimeout/BackendRejected/
  // ParseFailure (response not matching {text}).
  std::string analyze(const std::string& prompt, const std::vector<FramePayload>& frames) const;
  const BackendEndpoint& endpoint() const { return endpoint_; }

 private:
  BackendEndpoint endpoint_;
};

class LlmClient {
 public:
  explicit LlmClient(BackendEndpoint endpoint) : endpoint_(std::move(endpoint)) {}
  std::string complete(const std::string& prompt) const;
  const BackendEndpoint& endpoint() const { return endpoint_; }

 private:
  BackendEndpoint endpoint_;
};

class TtsClient {
 public:
  explicit TtsClient(BackendEndpoint endpoint) : endpoint_(std::move(endpoint)) {}
  // Returns the raw WAV body; callers validate it.
  std::vector<uint8_t> synthesize(const std::string& instruction) const;
  const BackendEndpoint& endpoint() const { return endpoint_; }

 private:
  BackendEndpoint endpoint_;
};

class EmbedClient {
 public:
  explicit EmbedClient(BackendEndpoint endpoint) : endpoint_(std::move(endpoint)) {}
  std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) const;
  const BackendEndpoint& endpoint() const { return endpoint_; }

 private:
  BackendEndpoint endpoint_;
};

}  // namespace vcass::backends
