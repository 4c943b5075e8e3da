// End-to-end orchestration of ingest -> analyze -> match -> instruct ->
// synth -> compose, with content-addressed caching of every stage output,
// incremental manifest persistence (resumable), and line-delimited run logs.
#pragma once

#include <functional>
#include <map>
#include <string>

#include "vcass/pipeline/cache.hpp"
#include "vcass/pipeline/config.hpp"
#include "vcass/synth/synth.hpp"

namespace vcass::pipeline {

struct StageRecord {
  std::string artifact;  // path relative to cache root
  std::string sha256;

  bool operator==(const StageRecord&) const = default;
};

struct RunManifest {
  std::string run_id;
  std::string config_digest;
  std::string video_path;       // as given at run start
  std::string transcript_path;
  std::string video_sha;
  std::string transcript_sha;
  std::string mode;  // "expressive" | "neutral_baseline"
  bool single_shot = false;
  std::vector<std::string> completed;  // stage names in execution order
  std::map<std::string, StageRecord> stage_artifacts;
  std::map<std::string, int64_t> timings_ms;
  std::map<std::string, int64_t> backend_calls;  // vlm, llm, tts, embed

  bool is_complete(const std::vector<std::string>& stages) const;
  std::string to_json() const;
  static RunManifest from_json(const std::string& text);
};

struct RunOptions {
  synth::SynthesisMode mode = synth::SynthesisMode::kExpressive;
  bool single_shot = false;
  bool verbose = false;  // mirror the run log to stderr
  // Invoked after each stage persists; a throw aborts the run exactly there
  // (the fault-injection seam the resume tests use).
  std::function<void(const std::string& stage)> after_stage;
};

class PipelineRunner {
 public:
  explicit PipelineRunner(PipelineConfig config);

  // Stage order for a mode. The neutral baseline never consults the vision
  // or language backends, mirroring the style-ablated experimental arm.
  static std::vector<std::string> stages_for(synth::SynthesisMode mode);

  static std::string compute_run_id(const std::string& config_digest,
                                    const std::string& video_sha,
                                    const std::string& transcript_sha, const std::string& mode,
                                    bool single_shot);

  RunManifest run(const std::filesystem::path& video_path,
                  const std::filesystem::path& transcript_path, const RunOptions& options = {});

  // Completes only missing stages of a prior run. Throws UnknownRun when no
  // manifest exists, ConfigDrift when the current config digest or inputs
  // disagree with the recorded ones.
  RunManifest resume(const std::string& run_id, const RunOptions& options = {});

  const PipelineConfig& config() const { return config_; }

 private:
  RunManifest execute(RunManifest manifest, const RunOptions& options);

  PipelineConfig config_;
};

}  // namespace vcass::pipeline
