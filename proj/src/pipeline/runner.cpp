#include "vcass/pipeline/runner.hpp"

#include <chrono>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "vcass/common/digest.hpp"
#include "vcass/common/errors.hpp"
#include "vcass/common/fsutil.hpp"
#include "vcass/instruct/builder.hpp"
#include "vcass/kb/kb.hpp"
#include "vcass/kb/match.hpp"
#include "vcass/vision/analyze.hpp"

namespace fs = std::filesystem;

namespace vcass::pipeline {

using nlohmann::json;

namespace {

int64_t now_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

// line-delimited structured run log at <cache>/<run_id>/run.log
class RunLog {
 public:
  RunLog(const fs::path& cache_root, const std::string& run_id, bool verbose)
      : path_(cache_root / run_id / "run.log"), run_id_(run_id), verbose_(verbose) {
    fs::create_directories(path_.parent_path());
  }

  void event(const std::string& stage, const std::string& what, int64_t duration_ms = -1,
             const std::string& detail = "") {
    json line = {{"ts_ms", now_ms()}, {"run_id", run_id_}, {"stage", stage}, {"event", what}};
    if (duration_ms >= 0) line["duration_ms"] = duration_ms;
    if (!detail.empty()) line["detail"] = detail;
    std::ofstream out(path_, std::ios::app);
    out << line.dump() << "\n";
    if (verbose_) std::cerr << line.dump() << "\n";
  }

 private:
  fs::path path_;
  std::string run_id_;
  bool verbose_;
};

// keyframes.json artifact: still paths stored relative to the cache root
json keyframes_to_json(const media::KeyframeSet& set, const fs::path& cache_root) {
  json frames = json::array();
  for (const auto& f : set.frames) {
    frames.push_back({{"index", f.index},
                      {"timestamp_s", f.timestamp_s},
                      {"object", fs::relative(f.image_path, cache_root).string()},
                      {"content_hash", f.content_hash}});
  }
  return json{{"video",
               {{"path", set.video.path.string()},
                {"duration_s", set.video.duration_s},
                {"frame_count", set.video.frame_count},
                {"fps", set.video.fps}}},
              {"frames", frames}};
}

media::KeyframeSet keyframes_from_json(const json& doc, const fs::path& cache_root) {
  media::KeyframeSet set;
  set.video.path = doc.at("video").at("path").get<std::string>();
  set.video.duration_s = doc.at("video").at("duration_s").get<double>();
  set.video.frame_count = doc.at("video").at("frame_count").get<int64_t>();
  set.video.fps = doc.at("video").at("fps").get<double>();
  for (const auto& f : doc.at("frames")) {
    media::Keyframe kf;
    kf.index = f.at("index").get<int64_t>();
    kf.timestamp_s = f.at("timestamp_s").get<double>();
    kf.image_path = cache_root / f.at("object").get<std::string>();
    kf.content_hash = f.at("content_hash").get<std::string>();
    set.frames.push_back(std::move(kf));
  }
  return set;
}

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out.push_back(sep);
    out += parts[i];
  }
  return out;
}

}  // namespace

bool RunManifest::is_complete(const std::vector<std::string>& stages) const {
  for (const auto& s : stages) {
    if (std::find(completed.begin(), completed.end(), s) == completed.end()) return false;
  }
  return true;
}

std::string RunManifest::to_json() const {
  json artifacts = json::object();
  for (const auto& [stage, rec] : stage_artifacts) {
    artifacts[stage] = {{"artifact", rec.artifact}, {"sha256", rec.sha256}};
  }
  json doc = {{"run_id", run_id},
              {"config_digest", config_digest},
              {"video_path", video_path},
              {"transcript_path", transcript_path},
              {"video_sha", video_sha},
              {"transcript_sha", transcript_sha},
              {"mode", mode},
              {"single_shot", single_shot},
              {"completed", completed},
              {"stage_artifacts", artifacts},
              {"timings_ms", timings_ms},
              {"backend_calls", backend_calls}};
  return doc.dump(2);
}

RunManifest RunManifest::from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseFailure(std::string("manifest JSON: ") + e.what());
  }
  RunManifest m;
  try {
    m.run_id = doc.at("run_id").get<std::string>();
    m.config_digest = doc.at("config_digest").get<std::string>();
    m.video_path = doc.at("video_path").get<std::string>();
    m.transcript_path = doc.at("transcript_path").get<std::string>();
    m.video_sha = doc.at("video_sha").get<std::string>();
    m.transcript_sha = doc.at("transcript_sha").get<std::string>();
    m.mode = doc.at("mode").get<std::string>();
    m.single_shot = doc.at("single_shot").get<bool>();
    m.completed = doc.at("completed").get<std::vector<std::string>>();
    for (const auto& [stage, rec] : doc.at("stage_artifacts").items()) {
      m.stage_artifacts[stage] = {rec.at("artifact").get<std::string>(),
                                  rec.at("sha256").get<std::string>()};
    }
    m.timings_ms = doc.at("timings_ms").get<std::map<std::string, int64_t>>();
    m.backend_calls = doc.at("backend_calls").get<std::map<std::string, int64_t>>();
  } catch (const json::exception& e) {
    throw ParseFailure(std::string("manifest JSON missing field: ") + e.what());
  }
  return m;
}

PipelineRunner::PipelineRunner(PipelineConfig config) : config_(std::move(config)) {}

std::vector<std::string> PipelineRunner::stages_for(synth::SynthesisMode mode) {
  if (mode == synth::SynthesisMode::kNeutralBaseline) {
    return {"ingest", "synth", "compose"};
  }
  return {"ingest", "analyze", "match", "instruct", "synth", "compose"};
}

std::string PipelineRunner::compute_run_id(const std::string& config_digest,
                                           const std::string& video_sha,
                                           const std::string& transcript_sha,
                                           const std::string& mode, bool single_shot) {
  return digest::sha256_hex16(config_digest + ":" + video_sha + ":" + transcript_sha + ":" +
                              mode + ":" + (single_shot ? "1" : "0"));
}

RunManifest PipelineRunner::run(const fs::path& video_path, const fs::path& transcript_path,
                                const RunOptions& options) {
  config_.validate();
  if (!fs::exists(video_path)) throw FileNotFound(video_path.string());
  if (!fs::exists(transcript_path)) throw FileNotFound(transcript_path.string());

  RunManifest manifest;
  manifest.config_digest = config_.config_digest();
  manifest.video_path = fs::absolute(video_path).string();
  manifest.transcript_path = fs::absolute(transcript_path).string();
  manifest.video_sha = digest::sha256_hex_file(video_path);
  manifest.transcript_sha = digest::sha256_hex_file(transcript_path);
  manifest.mode = synth::to_string(options.mode);
  manifest.single_shot = options.single_shot;
  manifest.run_id = compute_run_id(manifest.config_digest, manifest.video_sha,
                                   manifest.transcript_sha, manifest.mode, options.single_shot);
  manifest.backend_calls = {{"vlm", 0}, {"llm", 0}, {"tts", 0}, {"embed", 0}};
  return execute(std::move(manifest), options);
}

RunManifest PipelineRunner::resume(const std::string& run_id, const RunOptions& options) {
  config_.validate();
  fs::path manifest_path = config_.cache_dir / run_id / "manifest";
  if (!fs::exists(manifest_path)) throw UnknownRun(run_id);
  RunManifest manifest = RunManifest::from_json(fsutil::read_text_file(manifest_path));

  if (manifest.config_digest != config_.config_digest()) {
    throw ConfigDrift("manifest config digest " + manifest.config_digest +
                      " != current " + config_.config_digest());
  }
  if (!fs::exists(manifest.video_path) ||
      digest::sha256_hex_file(manifest.video_path) != manifest.video_sha) {
    throw ConfigDrift("video input missing or content changed: " + manifest.video_path);
  }
  if (!fs::exists(manifest.transcript_path) ||
      digest::sha256_hex_file(manifest.transcript_path) != manifest.transcript_sha) {
    throw ConfigDrift("transcript input missing or content changed: " + manifest.transcript_path);
  }

  RunOptions effective = options;
  effective.mode = synth::mode_from_string(manifest.mode);
  effective.single_shot = manifest.single_shot;
  if (manifest.is_complete(stages_for(effective.mode))) {
    return manifest;  // finished run: no-op
  }
  return execute(std::move(manifest), effective);
}

RunManifest PipelineRunner::execute(RunManifest manifest, const RunOptions& options) {
  Cache cache(config_.cache_dir);
  RunLog log(cache.root(), manifest.run_id, options.verbose);
  const auto stages = stages_for(options.mode);
  const fs::path manifest_path = cache.root() / manifest.run_id / "manifest";
  fs::create_directories(manifest_path.parent_path());

  // resources shared by the stage closures
  kb::KnowledgeBase knowledge = kb::load_kb(config_.kb_path);
  backends::VlmClient vlm(config_.endpoint("vlm"));
  backends::LlmClient llm(config_.endpoint("llm"));
  backends::TtsClient tts(config_.endpoint("tts"));

  // dataflow carried between stages
  media::KeyframeSet keyframes;
  vision::VisualCueReport report;
  std::vector<kb::MatchResult> matches;
  instruct::SpeechInstruction instruction;
  instruct::Transcript transcript =
      instruct::load_transcript(manifest.transcript_path);

  auto persist = [&] { fsutil::atomic_write(manifest_path, manifest.to_json()); };

  auto already_done = [&](const std::string& stage) {
    if (std::find(manifest.completed.begin(), manifest.completed.end(), stage) ==
        manifest.completed.end()) {
      return false;
    }
    auto it = manifest.stage_artifacts.find(stage);
    if (it == manifest.stage_artifacts.end()) return false;
    fs::path artifact = cache.root() / it->second.artifact;
    return fs::exists(artifact) && digest::sha256_hex_file(artifact) == it->second.sha256;
  };

  // Runs one stage: cache lookup by key, else compute; links the object into
  // the run directory and persists the manifest before the after_stage hook.
  auto run_stage = [&](const std::string& stage, const std::string& key, const std::string& ext,
                       const std::function<std::vector<uint8_t>()>& compute,
                       const std::function<bool(const fs::path&)>& cached_valid,
                       const std::function<void(const fs::path&)>& load) {
    auto started = std::chrono::steady_clock::now();
    auto cached = cache.lookup(key, ext);
    bool hit = cached && (!cached_valid || cached_valid(*cached));
    if (!hit) {
      auto bytes = compute();
      cache.put_bytes(key, ext, bytes);
    }
    fs::path linked = cache.link_into_run(manifest.run_id, stage, key, ext);
    load(linked);

    StageRecord rec;
    rec.artifact = fs::relative(linked, cache.root()).string();
    rec.sha256 = digest::sha256_hex_file(linked);
    manifest.stage_artifacts[stage] = rec;
    if (std::find(manifest.completed.begin(), manifest.completed.end(), stage) ==
        manifest.completed.end()) {
      manifest.completed.push_back(stage);
    }
    manifest.timings_ms[stage] = std::chrono::duration_cast<std::chrono::milliseconds>(
                                     std::chrono::steady_clock::now() - started)
                                     .count();
    persist();
    log.event(stage, hit ? "cache_hit" : "computed", manifest.timings_ms[stage]);
    if (options.after_stage) options.after_stage(stage);
  };

  auto wrap_stage_errors = [&](const std::string& stage, const std::function<void()>& body) {
    try {
      body();
    } catch (const Error& e) {
      log.event(stage, "error", -1, e.what());
      throw Error(e.error_class(), e.name(), "[" + stage + "] " + e.detail());
    } catch (const std::exception& e) {
      log.event(stage, "error", -1, e.what());
      throw Error(ErrorClass::Validation, "StageFailure", "[" + stage + "] " + e.what());
    }
  };

  log.event("run", manifest.completed.empty() ? "start" : "resume");

  for (const auto& stage : stages) {
    if (already_done(stage)) {
      // reload dataflow from the recorded artifact, no recompute
      fs::path artifact = cache.root() / manifest.stage_artifacts[stage].artifact;
      wrap_stage_errors(stage, [&] {
        if (stage == "ingest") {
          keyframes = keyframes_from_json(json::parse(fsutil::read_text_file(artifact)),
                                          cache.root());
          keyframes.video.path = manifest.video_path;  // current invocation wins
        } else if (stage == "analyze") {
          report = vision::VisualCueReport::from_json(fsutil::read_text_file(artifact));
        } else if (stage == "match") {
          matches = kb::matches_from_json(fsutil::read_text_file(artifact));
        } else if (stage == "instruct") {
          json doc = json::parse(fsutil::read_text_file(artifact));
          instruction = instruct::SpeechInstruction::from_json(doc.at("instruction").dump());
        } else if (stage == "synth" && options.mode == synth::SynthesisMode::kNeutralBaseline) {
          instruction = instruct::neutral_instruction(transcript);
        }
      });
      log.event(stage, "already_complete");
      continue;
    }

    wrap_stage_errors(stage, [&] {
      if (stage == "ingest") {
        std::string key = digest::sha256_hex16(
            "ingest:" + manifest.video_sha + ":" + config_.keyframe_policy.canonical() + ":" +
            join(config_.media_tool.probe_argv, ' ') + ":" +
            join(config_.media_tool.frame_argv, ' '));
        run_stage(
            stage, key, "json",
            [&]() -> std::vector<uint8_t> {
              media::VideoRef video = media::probe(manifest.video_path, config_.media_tool);
              fsutil::ScratchDir scratch("vcass-ingest");
              media::KeyframeSet extracted = media::extract_keyframes(
                  video, config_.keyframe_policy, scratch.path(), config_.media_tool);
              // move stills into the object store, addressed by content
              for (auto& frame : extracted.frames) {
                fs::path obj = cache.put_file(frame.content_hash, "png", frame.image_path);
                frame.image_path = obj;
              }
              std::string text = keyframes_to_json(extracted, cache.root()).dump(2);
              return std::vector<uint8_t>(text.begin(), text.end());
            },
            [&](const fs::path& cached) {
              // a cached ingest artifact is only valid while its stills live
              try {
                auto set = keyframes_from_json(json::parse(fsutil::read_text_file(cached)),
                                               cache.root());
                for (const auto& f : set.frames) {
                  if (!fs::exists(f.image_path)) return false;
                }
                return true;
              } catch (const std::exception&) {
                return false;
              }
            },
            [&](const fs::path& artifact) {
              keyframes = keyframes_from_json(json::parse(fsutil::read_text_file(artifact)),
                                              cache.root());
              keyframes.video.path = manifest.video_path;
            });
      } else if (stage == "analyze") {
        vision::PromptTemplate prompt =
            vision::load_prompt(config_.prompts_dir, config_.prompt_versions.at("vlm_analyze"));
        std::string key = digest::sha256_hex16(
            "analyze:" + join(keyframes.content_hashes(), ',') + ":" +
            digest::sha256_hex(prompt.text) + ":" + config_.endpoint("vlm").canonical());
        run_stage(
            stage, key, "json",
            [&]() -> std::vector<uint8_t> {
              report = vision::analyze(keyframes, prompt, vlm);
              manifest.backend_calls["vlm"] += 1;
              std::string text = report.to_json();
              return std::vector<uint8_t>(text.begin(), text.end());
            },
            nullptr,
            [&](const fs::path& artifact) {
              report = vision::VisualCueReport::from_json(fsutil::read_text_file(artifact));
            });
      } else if (stage == "match") {
        std::string report_sha = digest::sha256_hex(report.to_json());
        std::string key =
            digest::sha256_hex16("match:" + report_sha + ":" + knowledge.checksum);
        run_stage(
            stage, key, "json",
            [&]() -> std::vector<uint8_t> {
              matches = kb::match_cues(knowledge, report);
              std::string text = kb::matches_to_json(matches);
              return std::vector<uint8_t>(text.begin(), text.end());
            },
            nullptr,
            [&](const fs::path& artifact) {
              matches = kb::matches_from_json(fsutil::read_text_file(artifact));
            });
      } else if (stage == "instruct") {
        instruct::CotPrompts prompts{
            vision::load_prompt(config_.prompts_dir, config_.prompt_versions.at("classify")),
            vision::load_prompt(config_.prompts_dir, config_.prompt_versions.at("map_emotion")),
            vision::load_prompt(config_.prompts_dir, config_.prompt_versions.at("compose")),
            std::nullopt};
        if (options.single_shot) {
          prompts.single_shot =
              vision::load_prompt(config_.prompts_dir, config_.prompt_versions.at("single_shot"));
        }
        std::string prompt_shas = digest::sha256_hex(
            prompts.classify.text + "\x1f" + prompts.map_emotion.text + "\x1f" +
            prompts.compose.text + "\x1f" +
            (prompts.single_shot ? prompts.single_shot->text : ""));
        std::string key = digest::sha256_hex16(
            "instruct:" + digest::sha256_hex(report.to_json()) + ":" +
            digest::sha256_hex(kb::matches_to_json(matches)) + ":" + manifest.transcript_sha +
            ":" + knowledge.checksum + ":" + prompt_shas + ":" +
            config_.endpoint("llm").canonical() + ":" + (options.single_shot ? "1" : "0"));
        run_stage(
            stage, key, "json",
            [&]() -> std::vector<uint8_t> {
              instruct::BuildOptions build_options;
              build_options.single_shot = options.single_shot;
              auto [built, trace] = instruct::build_instruction(
                  report, matches, knowledge, transcript, prompts, llm, build_options);
              instruction = built;
              manifest.backend_calls["llm"] += trace.backend_calls;
              json doc = {{"instruction", json::parse(built.to_json())},
                          {"trace", json::parse(trace.to_json())}};
              std::string text = doc.dump(2);
              return std::vector<uint8_t>(text.begin(), text.end());
            },
            nullptr,
            [&](const fs::path& artifact) {
              json doc = json::parse(fsutil::read_text_file(artifact));
              instruction = instruct::SpeechInstruction::from_json(doc.at("instruction").dump());
            });
      } else if (stage == "synth") {
        if (options.mode == synth::SynthesisMode::kNeutralBaseline) {
          instruction = instruct::neutral_instruction(transcript);
        }
        std::string payload = synth::request_payload(instruction, options.mode);
        std::string key = digest::sha256_hex16("synth:" + digest::sha256_hex(payload) + ":" +
                                               config_.endpoint("tts").canonical());
        run_stage(
            stage, key, "wav",
            [&]() -> std::vector<uint8_t> {
              audio::AudioClip clip = synth::synthesize(instruction, options.mode, tts);
              manifest.backend_calls["tts"] += 1;
              return audio::write_wav(clip);
            },
            nullptr, [](const fs::path&) {});
      } else if (stage == "compose") {
        fs::path speech = cache.root() / manifest.stage_artifacts.at("synth").artifact;
        std::string audio_sha = digest::sha256_hex_file(speech);
        std::string key = digest::sha256_hex16(
            "compose:" + manifest.video_sha + ":" + audio_sha + ":" +
            config_.compose_policy.canonical() + ":" + join(config_.media_tool.mux_argv, ' '));
        run_stage(
            stage, key, "vcav",
            [&]() -> std::vector<uint8_t> {
              media::VideoRef video = media::probe(manifest.video_path, config_.media_tool);
              audio::AudioClip clip = audio::validate_wav_file(speech);
              fsutil::ScratchDir scratch("vcass-out");
              fs::path out = scratch.path() / "composed.vcav";
              media::compose(video, clip, config_.compose_policy, out, config_.media_tool);
              return fsutil::read_binary_file(out);
            },
            nullptr, [](const fs::path&) {});
      }
    });
  }

  log.event("run", "done");
  return manifest;
}

}  // namespace vcass::pipeline
