// Pipeline configuration: one JSON file, relative paths resolved against the
// config file's directory, secrets only ever named (env var), never stored.
#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "vcass/backends/endpoint.hpp"
#include "vcass/media/compose.hpp"
#include "vcass/media/keyframes.hpp"
#include "vcass/media/probe.hpp"

namespace vcass::pipeline {

struct PipelineConfig {
  std::map<std::string, backends::BackendEndpoint> endpoints;  // vlm, llm, tts, embed
  media::KeyframePolicy keyframe_policy;
  std::filesystem::path kb_path;
  std::filesystem::path prompts_dir;
  std::map<std::string, std::string> prompt_versions;  // step -> template_id
  media::ComposePolicy compose_policy;
  std::filesystem::path cache_dir = ".vcass-cache";
  media::MediaToolConfig media_tool;

  // All four endpoints mock, bundled KB/prompts resolved against `data_root`
  // (the repo or install prefix).
  static PipelineConfig mock_defaults(const std::filesystem::path& data_root);

  static PipelineConfig load(const std::filesystem::path& config_path);

  const backends::BackendEndpoint& endpoint(const std::string& name) const;

  // Paths exist, all four endpoints present and valid.
  void validate() const;

  // Content-addressed canonical form: kb and prompt files enter as content
  // digests, so renaming never changes it and editing always does.
  // cache_dir is excluded (relocating a cache is not a config change).
  std::string canonical() const;
  std::string config_digest() const;
};

}  // namespace vcass::pipeline
