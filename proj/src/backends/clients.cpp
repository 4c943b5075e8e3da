#include "vcass/backends/clients.hpp"

#include <json.hpp>

#include "vcass/backends/http.hpp"
#include "vcass/backends/mock.hpp"
#include "vcass/common/base64.hpp"
#include "vcass/common/errors.hpp"

namespace vcass::backends {

using nlohmann::json;

namespace {

std::string text_field_or_throw(const std::string& body, const std::string& context) {
  if (body.empty()) throw ParseFailure(context + ": empty response body");
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::exception& e) {
    throw ParseFailure(context + ": response is not JSON (" + e.what() + "); raw: " + body);
  }
  if (!doc.contains("text") || !doc["text"].is_string()) {
    throw ParseFailure(context + ": response lacks a text field; raw: " + body);
  }
  return doc["text"].get<std::string>();
}

}  // namespace

std::string VlmClient::analyze(const std::string& prompt,
                               const std::vector<FramePayload>& frames) const {
  if (endpoint_.is_mock()) {
    std::vector<std::string> hashes;
    hashes.reserve(frames.size());
    for (const auto& f : frames) hashes.push_back(f.hash);
    return mock::vlm_analyze(prompt, hashes);
  }
  json req;
  req["prompt"] = prompt;
  req["frames"] = json::array();
  for (const auto& f : frames) {
    req["frames"].push_back({{"hash", f.hash}, {"png_base64", base64::encode(f.png_bytes)}});
  }
  auto res = post_json(endpoint_, "/v1/analyze", req.dump());
  return text_field_or_throw(res.body, "vlm analyze");
}

std::string LlmClient::complete(const std::string& prompt) const {
  if (endpoint_.is_mock()) return mock::llm_complete(prompt);
  json req{{"prompt", prompt}};
  auto res = post_json(endpoint_, "/v1/complete", req.dump());
  return text_field_or_throw(res.body, "llm complete");
}

std::vector<uint8_t> TtsClient::synthesize(const std::string& instruction) const {
  if (endpoint_.is_mock()) return mock::tts_synthesize(instruction);
  json req{{"instruction", instruction}};
  auto res = post_json(endpoint_, "/v1/synthesize", req.dump());
  return std::vector<uint8_t>(res.body.begin(), res.body.end());
}

std::vector<std::vector<double>> EmbedClient::embed(const std::vector<std::string>& texts) const {
  if (endpoint_.is_mock()) return mock::embed(texts);
  json req;
  req["texts"] = texts;
  auto res = post_json(endpoint_, "/v1/embed", req.dump());
  json doc;
  try {
    doc = json::parse(res.body);
  } catch (const json::exception& e) {
    throw ParseFailure(std::string("embed: response is not JSON (") + e.what() + ")");
  }
  if (!doc.contains("vectors") || !doc["vectors"].is_array()) {
    throw ParseFailure("embed: response lacks a vectors array");
  }
  std::vector<std::vector<double>> out;
  try {
    out = doc["vectors"].get<std::vector<std::vector<double>>>();
  } catch (const json::exception& e) {
    throw ParseFailure(std::string("embed: malformed vectors (") + e.what() + ")");
  }
  if (out.size() != texts.size()) {
    throw ParseFailure("embed: vector count " + std::to_string(out.size()) +
                       " does not match text count " + std::to_string(texts.size()));
  }
  return out;
}

}  // namespace vcass::backends
