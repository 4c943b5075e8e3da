#include "vcass/pipeline/config.hpp"

#include <json.hpp>

#include "vcass/common/digest.hpp"
#include "vcass/common/errors.hpp"
#include "vcass/common/fsutil.hpp"
#include "vcass/kb/kb.hpp"

namespace fs = std::filesystem;

namespace vcass::pipeline {

using nlohmann::json;

namespace {

const std::vector<std::string> kBackendNames = {"vlm", "llm", "tts", "embed"};

std::map<std::string, std::string> default_prompt_versions() {
  return {{"vlm_analyze", "vlm_analyze.v1"},
          {"classify", "llm_classify.v1"},
          {"map_emotion", "llm_map.v1"},
          {"compose", "llm_compose.v1"},
          {"single_shot", "llm_single.v1"}};
}

backends::BackendEndpoint endpoint_from_json(const json& doc) {
  backends::BackendEndpoint ep;
  ep.base_url = doc.at("base_url").get<std::string>();
  ep.auth_token_env = doc.value("auth_token_env", std::string());
  ep.timeout_s = doc.value("timeout_s", 30.0);
  ep.max_retries = doc.value("max_retries", 2);
  return ep;
}

fs::path resolve(const fs::path& base, const fs::path& p) {
  if (p.empty() || p.is_absolute()) return p;
  return base / p;
}

}  // namespace

PipelineConfig PipelineConfig::mock_defaults(const fs::path& data_root) {
  PipelineConfig cfg;
  for (const auto& name : kBackendNames) {
    backends::BackendEndpoint ep;
    ep.base_url = "mock://" + name;
    ep.timeout_s = 10.0;
    ep.max_retries = 2;
    cfg.endpoints[name] = ep;
  }
  cfg.kb_path = data_root / "data" / "kb" / "vcass_default.kb";
  cfg.prompts_dir = data_root / "config" / "prompts";
  cfg.prompt_versions = default_prompt_versions();
  cfg.media_tool = media::MediaToolConfig::reference_defaults();
  return cfg;
}

PipelineConfig PipelineConfig::load(const fs::path& config_path) {
  if (!fs::exists(config_path)) throw FileNotFound(config_path.string());
  json doc;
  try {
    doc = json::parse(fsutil::read_text_file(config_path));
  } catch (const json::exception& e) {
    throw ConfigError("config " + config_path.string() + ": " + e.what());
  }

  fs::path base = fs::absolute(config_path).parent_path();
  PipelineConfig cfg;
  try {
    for (const auto& name : kBackendNames) {
      if (!doc.at("endpoints").contains(name)) {
        throw ConfigError("config: endpoints." + name + " is missing");
      }
      cfg.endpoints[name] = endpoint_from_json(doc["endpoints"][name]);
    }

    if (doc.contains("keyframe_policy")) {
      const auto& kp = doc["keyframe_policy"];
      std::string mode = kp.value("mode", "uniform");
      if (mode == "uniform") cfg.keyframe_policy.mode = media::KeyframeMode::kUniform;
      else if (mode == "scene_change" || mode == "scene")
        cfg.keyframe_policy.mode = media::KeyframeMode::kSceneChange;
      else throw ConfigError("config: unknown keyframe mode '" + mode + "'");
      cfg.keyframe_policy.k = kp.value("k", 5);
      cfg.keyframe_policy.diff_threshold = kp.value("diff_threshold", 0.18);
      cfg.keyframe_policy.max_frames = kp.value("max_frames", 32);
    }

    cfg.kb_path = resolve(base, doc.at("kb_path").get<std::string>());
    cfg.prompts_dir = resolve(base, doc.at("prompts_dir").get<std::string>());

    cfg.prompt_versions = default_prompt_versions();
    if (doc.contains("prompt_versions")) {
      for (const auto& [step, id] : doc["prompt_versions"].items()) {
        cfg.prompt_versions[step] = id.get<std::string>();
      }
    }

    if (doc.contains("compose_policy")) {
      cfg.compose_policy.overrun =
          media::overrun_from_string(doc["compose_policy"].value("overrun", "error"));
      cfg.compose_policy.underrun = media::underrun_from_string(
          doc["compose_policy"].value("underrun", "pad_audio_silence"));
    }

    cfg.cache_dir = resolve(base, doc.value("cache_dir", std::string(".vcass-cache")));

    cfg.media_tool = media::MediaToolConfig::reference_defaults();
    if (doc.contains("media_tool")) {
      const auto& mt = doc["media_tool"];
      if (mt.contains("probe")) cfg.media_tool.probe_argv = mt["probe"].get<std::vector<std::string>>();
      if (mt.contains("frame")) cfg.media_tool.frame_argv = mt["frame"].get<std::vector<std::string>>();
      if (mt.contains("mux")) cfg.media_tool.mux_argv = mt["mux"].get<std::vector<std::string>>();
    }
  } catch (const json::exception& e) {
    throw ConfigError("config " + config_path.string() + ": " + e.what());
  }
  return cfg;
}

const backends::BackendEndpoint& PipelineConfig::endpoint(const std::string& name) const {
  auto it = endpoints.find(name);
  if (it == endpoints.end()) throw ConfigError("endpoint '" + name + "' is not configured");
  return it->second;
}

void PipelineConfig::validate() const {
  for (const auto& name : kBackendNames) {
    endpoint(name).validate();
  }
  keyframe_policy.validate();
  if (!fs::exists(kb_path)) throw ConfigError("kb_path does not exist: " + kb_path.string());
  if (!fs::exists(prompts_dir)) {
    throw ConfigError("prompts_dir does not exist: " + prompts_dir.string());
  }
  for (const auto& step : {"vlm_analyze", "classify", "map_emotion", "compose"}) {
    auto it = prompt_versions.find(step);
    if (it == prompt_versions.end()) {
      throw ConfigError(std::string("prompt_versions missing step '") + step + "'");
    }
    fs::path f = prompts_dir / (it->second + ".txt");
    if (!fs::exists(f)) throw ConfigError("prompt template missing: " + f.string());
  }
  if (media_tool.probe_argv.empty() || media_tool.frame_argv.empty() ||
      media_tool.mux_argv.empty()) {
    throw ConfigError("media_tool argv templates must not be empty");
  }
}

std::string PipelineConfig::canonical() const {
  json doc;
  for (const auto& [name, ep] : endpoints) {
    doc["endpoints"][name] = {{"base_url", ep.base_url},
                              {"auth_token_env", ep.auth_token_env}};
  }
  doc["keyframe_policy"] = keyframe_policy.canonical();
  doc["compose_policy"] = compose_policy.canonical();
  doc["kb_checksum"] = kb::load_kb(kb_path).checksum;
  json prompts = json::object();
  for (const auto& [step, id] : prompt_versions) {
    fs::path f = prompts_dir / (id + ".txt");
    prompts[step] = {{"id", id},
                     {"sha256", fs::exists(f) ? digest::sha256_hex_file(f) : std::string("absent")}};
  }
  doc["prompts"] = prompts;
  // argv[0] enters by filename only so install location does not perturb
  // run ids; flags and order still do
  auto canonical_argv = [](const std::vector<std::string>& argv) {
    std::vector<std::string> out = argv;
    if (!out.empty()) out[0] = fs::path(out[0]).filename().string();
    return out;
  };
  doc["media_tool"] = {{"probe", canonical_argv(media_tool.probe_argv)},
                       {"frame", canonical_argv(media_tool.frame_argv)},
                       {"mux", canonical_argv(media_tool.mux_argv)}};
  return doc.dump();
}

std::string PipelineConfig::config_digest() const { return digest::sha256_hex16(canonical()); }

}  // namespace vcass::pipeline
