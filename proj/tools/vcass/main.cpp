// vcass: vision-context-aware speech synthesis pipeline CLI.
//
// Subcommands: frames, kb lint, kb query, instruct, synth, compose, run,
// resume, eval tendency|similarity|preference, cache gc.
// Exit codes: 0 success, 2 validation error, 3 backend error, 4 media-tool
// error.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vcass/backends/clients.hpp"
#include "vcass/common/errors.hpp"
#include "vcass/common/fsutil.hpp"
#include "vcass/eval/metrics.hpp"
#include "vcass/eval/similarity.hpp"
#include "vcass/instruct/builder.hpp"
#include "vcass/kb/kb.hpp"
#include "vcass/kb/match.hpp"
#include "vcass/media/compose.hpp"
#include "vcass/media/keyframes.hpp"
#include "vcass/media/probe.hpp"
#include "vcass/pipeline/cache.hpp"
#include "vcass/pipeline/config.hpp"
#include "vcass/pipeline/runner.hpp"
#include "vcass/synth/synth.hpp"
#include "vcass/vision/report.hpp"

namespace fs = std::filesystem;
using namespace vcass;
using nlohmann::json;

namespace {

pipeline::PipelineConfig load_config_or_default(const std::string& config_path) {
  if (!config_path.empty()) return pipeline::PipelineConfig::load(config_path);
  fs::path data_root = fs::current_path();
  if (const char* env = std::getenv("VCASS_DATA_ROOT")) data_root = env;
  return pipeline::PipelineConfig::mock_defaults(data_root);
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text << "\n";
  } else {
    fsutil::atomic_write(out_path, text + "\n");
  }
}

int cmd_frames(const std::string& video_path, const std::string& policy_name, int k,
               double threshold, int max_frames, const std::string& out_dir) {
  media::KeyframePolicy policy;
  policy.mode = (policy_name == "scene" || policy_name == "scene_change")
                    ? media::KeyframeMode::kSceneChange
                    : media::KeyframeMode::kUniform;
  policy.k = k;
  policy.diff_threshold = threshold;
  policy.max_frames = max_frames;
  policy.validate();

  auto tool = media::MediaToolConfig::reference_defaults();
  media::VideoRef video = media::probe(video_path, tool);
  media::KeyframeSet set = media::extract_keyframes(video, policy, out_dir, tool);

  json frames = json::array();
  for (const auto& f : set.frames) {
    frames.push_back({{"index", f.index},
                      {"timestamp_s", f.timestamp_s},
                      {"image_path", f.image_path.string()},
                      {"content_hash", f.content_hash}});
  }
  std::cout << json{{"video",
                     {{"path", video.path.string()},
                      {"duration_s", video.duration_s},
                      {"frame_count", video.frame_count},
                      {"fps", video.fps}}},
                    {"frames", frames}}
                   .dump(2)
            << "\n";
  return 0;
}

int cmd_kb_lint(const std::string& kb_path) {
  kb::KnowledgeBase knowledge = kb::load_kb(kb_path);
  std::cout << "ok: " << knowledge.rules.size() << " rules, version " << knowledge.version
            << ", checksum " << knowledge.checksum.substr(0, 16) << "\n";
  return 0;
}

int cmd_kb_query(const std::string& kb_path, const std::string& cue) {
  kb::KnowledgeBase knowledge = kb::load_kb(kb_path);
  auto results = kb::match_cue(knowledge, cue);
  if (results.empty()) {
    std::cout << "no matches\n";
    return 0;
  }
  int rank = 1;
  for (const auto& m : results) {
    const kb::MappingRule* rule = knowledge.find(m.rule_id);
    std::printf("rank=%d rule=%s score=%d keyword=\"%s\" state=\"%s\"\n", rank++,
                m.rule_id.c_str(), m.score, m.matched_keyword.c_str(),
                rule ? rule->emotional_state.c_str() : "?");
  }
  return 0;
}

int cmd_instruct(const std::string& report_path, const std::string& transcript_path,
                 const std::string& kb_path, bool single_shot, const std::string& config_path,
                 const std::string& out_path) {
  auto config = load_config_or_default(config_path);
  vision::VisualCueReport report =
      vision::VisualCueReport::from_json(fsutil::read_text_file(report_path));
  instruct::Transcript transcript = instruct::load_transcript(transcript_path);
  kb::KnowledgeBase knowledge = kb::load_kb(kb_path.empty() ? config.kb_path : fs::path(kb_path));
  auto matches = kb::match_cues(knowledge, report);

  instruct::CotPrompts prompts{
      vision::load_prompt(config.prompts_dir, config.prompt_versions.at("classify")),
      vision::load_prompt(config.prompts_dir, config.prompt_versions.at("map_emotion")),
      vision::load_prompt(config.prompts_dir, config.prompt_versions.at("compose")),
      std::nullopt};
  if (single_shot) {
    prompts.single_shot =
        vision::load_prompt(config.prompts_dir, config.prompt_versions.at("single_shot"));
  }

  backends::LlmClient llm(config.endpoint("llm"));
  instruct::BuildOptions options;
  options.single_shot = single_shot;
  auto [instruction, trace] =
      instruct::build_instruction(report, matches, knowledge, transcript, prompts, llm, options);

  json doc = {{"instruction", json::parse(instruction.to_json())},
              {"trace", json::parse(trace.to_json())}};
  emit(doc.dump(2), out_path);
  return 0;
}

int cmd_synth(const std::string& instruction_path, const std::string& mode_name,
              const std::string& out_path, const std::string& config_path) {
  auto config = load_config_or_default(config_path);
  json doc = json::parse(fsutil::read_text_file(instruction_path));
  if (doc.contains("instruction")) doc = doc["instruction"];
  instruct::SpeechInstruction instruction = instruct::SpeechInstruction::from_json(doc.dump());

  backends::TtsClient tts(config.endpoint("tts"));
  audio::AudioClip clip =
      synth::synthesize(instruction, synth::mode_from_string(mode_name), tts);
  audio::write_wav_file(out_path, clip);
  std::cerr << "wrote " << out_path << " (" << clip.duration_s << " s)\n";
  return 0;
}

int cmd_compose(const std::string& video_path, const std::string& audio_path,
                const std::string& overrun, const std::string& underrun,
                const std::string& out_path) {
  auto tool = media::MediaToolConfig::reference_defaults();
  media::VideoRef video = media::probe(video_path, tool);
  audio::AudioClip clip = audio::validate_wav_file(audio_path);
  media::ComposePolicy policy;
  policy.overrun = media::overrun_from_string(overrun);
  policy.underrun = media::underrun_from_string(underrun);
  media::compose(video, clip, policy, out_path, tool);
  std::cerr << "wrote " << out_path << "\n";
  return 0;
}

int cmd_run(const std::string& video_path, const std::string& transcript_path,
            const std::string& config_path, const std::string& mode_name, bool single_shot,
            bool verbose) {
  auto config = load_config_or_default(config_path);
  pipeline::PipelineRunner runner(std::move(config));
  pipeline::RunOptions options;
  options.mode = synth::mode_from_string(mode_name);
  options.single_shot = single_shot;
  options.verbose = verbose;
  auto manifest = runner.run(video_path, transcript_path, options);
  std::cerr << "run " << manifest.run_id << " complete; composed artifact: "
            << (runner.config().cache_dir / manifest.stage_artifacts.at("compose").artifact).string()
            << "\n";
  std::cout << manifest.to_json() << "\n";
  return 0;
}

int cmd_resume(const std::string& run_id, const std::string& config_path, bool verbose) {
  auto config = load_config_or_default(config_path);
  pipeline::PipelineRunner runner(std::move(config));
  pipeline::RunOptions options;
  options.verbose = verbose;
  auto manifest = runner.resume(run_id, options);
  std::cout << manifest.to_json() << "\n";
  return 0;
}

int cmd_eval_tendency(const std::string& records_path, const std::string& condition_name,
                      const std::string& out_path) {
  auto records = eval::load_rating_records(records_path);
  eval::Condition condition = eval::condition_from_string(condition_name);
  eval::TendencyTable t = eval::tendency_table(records, condition);

  std::printf("%-16s %10s %10s %10s %10s %12s %14s\n", "condition", "PPT", "PNT", "NPT", "NNT",
              "Consistent", "Inconsistent");
  std::printf("%-16s %9.2f%% %9.2f%% %9.2f%% %9.2f%% %11.2f%% %13.2f%%\n",
              condition_name.c_str(), 100 * t.ppt, 100 * t.pnt, 100 * t.npt, 100 * t.nnt,
              100 * t.consistent, 100 * t.inconsistent);

  json doc = {{"condition", condition_name},
              {"ppt", t.ppt},
              {"pnt", t.pnt},
              {"npt", t.npt},
              {"nnt", t.nnt},
              {"consistent", t.consistent},
              {"inconsistent", t.inconsistent},
              {"positive_intent_count", t.positive_intent_count},
              {"negative_intent_count", t.negative_intent_count}};
  emit(doc.dump(2), out_path.empty() ? "" : out_path);
  return 0;
}

// similarity corpus layout: model dirs hold <video_id>.txt, the human dir
// holds <video_id>.<rater>.txt (at least one per video)
std::map<std::string, std::string> read_model_dir(const std::string& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (!e.is_regular_file() || e.path().extension() != ".txt") continue;
    out[e.path().stem().string()] = fsutil::read_text_file(e.path());
  }
  if (out.empty()) throw ConfigError("no .txt files in " + dir);
  return out;
}

std::map<std::string, std::vector<std::string>> read_human_dir(const std::string& dir) {
  std::map<std::string, std::vector<std::string>> out;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".txt") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    std::string stem = f.stem().string();  // "<video_id>.<rater>"
    std::string video_id = stem.substr(0, stem.find('.'));
    out[video_id].push_back(fsutil::read_text_file(f));
  }
  if (out.empty()) throw ConfigError("no .txt files in " + dir);
  return out;
}

int cmd_eval_similarity(const std::string& human_dir, const std::string& kb_dir,
                        const std::string& plain_dir, const std::string& config_path,
                        const std::string& out_path) {
  auto config = load_config_or_default(config_path);
  backends::EmbedClient embedder(config.endpoint("embed"));
  auto report = eval::similarity_report(read_human_dir(human_dir), read_model_dir(kb_dir),
                                        read_model_dir(plain_dir), embedder);

  std::printf("%-24s", "Video ID");
  for (const auto& [id, scores] : report.per_video) std::printf(" %8s", id.c_str());
  std::printf(" %8s\n", "Average");
  std::printf("%-24s", "Knowledge-infused LLM");
  for (const auto& [id, scores] : report.per_video) std::printf(" %8.2f", scores.first);
  std::printf(" %8.2f\n", report.kb_llm_average);
  std::printf("%-24s", "Plain LLM");
  for (const auto& [id, scores] : report.per_video) std::printf(" %8.2f", scores.second);
  std::printf(" %8.2f\n", report.plain_llm_average);

  emit(report.to_json(), out_path.empty() ? "" : out_path);
  return 0;
}

int cmd_eval_preference(const std::string& choices_path, const std::string& out_path) {
  auto choices = eval::load_preference_choices(choices_path);
  eval::PreferenceRate rate = eval::preference_rate(choices);
  std::printf("%-12s %-10s %-10s\n", "expressive", "total", "preference");
  std::printf("%-12lld %-10lld %9.2f%%\n", static_cast<long long>(rate.expressive),
              static_cast<long long>(rate.total), rate.percent_rounded());
  json doc = {{"expressive", rate.expressive},
              {"total", rate.total},
              {"fraction", rate.fraction()},
              {"percent", rate.percent_rounded()}};
  emit(doc.dump(2), out_path.empty() ? "" : out_path);
  return 0;
}

int cmd_cache_gc(const std::string& cache_dir, const std::string& config_path,
                 uint64_t max_bytes) {
  fs::path root = cache_dir;
  if (root.empty()) {
    auto config = load_config_or_default(config_path);
    root = config.cache_dir;
  }
  auto result = pipeline::gc_cache(root, max_bytes);
  std::cout << json{{"bytes_before", result.bytes_before},
                    {"bytes_after", result.bytes_after},
                    {"runs_removed", result.runs_removed},
                    {"objects_removed", result.objects_removed}}
                   .dump()
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vcass: vision-context-aware speech synthesis pipeline"};
  app.require_subcommand(1);

  std::string video, transcript, config_path, out_path, kb_path, cue, report_path;
  std::string instruction_path, audio_path, records_path, choices_path, run_id;
  std::string human_dir, kb_llm_dir, plain_llm_dir, cache_dir;
  std::string policy_name = "uniform", mode_name = "expressive";
  std::string condition_name = "neutral", overrun = "error", underrun = "pad_audio_silence";
  int k = 5, max_frames = 32;
  double threshold = 0.18;
  uint64_t max_bytes = 0;
  bool single_shot = false, verbose = false;

  auto* frames = app.add_subcommand("frames", "extract keyframes from a video");
  frames->add_option("video", video)->required();
  frames->add_option("--policy", policy_name)->check(CLI::IsMember({"uniform", "scene"}));
  frames->add_option("--k", k);
  frames->add_option("--threshold", threshold);
  frames->add_option("--max", max_frames);
  frames->add_option("--out", out_path)->required();

  auto* kb_cmd = app.add_subcommand("kb", "knowledge base utilities");
  kb_cmd->require_subcommand(1);
  auto* kb_lint = kb_cmd->add_subcommand("lint", "validate a KB file");
  kb_lint->add_option("file", kb_path)->required();
  auto* kb_query = kb_cmd->add_subcommand("query", "rank rules against a cue");
  kb_query->add_option("--cue", cue)->required();
  kb_query->add_option("--kb", kb_path, "KB file (default: bundled)");

  auto* instruct_cmd = app.add_subcommand("instruct", "build a speech instruction from a report");
  instruct_cmd->add_option("--report", report_path)->required();
  instruct_cmd->add_option("--transcript", transcript)->required();
  instruct_cmd->add_option("--kb", kb_path)->required();
  instruct_cmd->add_flag("--single-shot", single_shot);
  instruct_cmd->add_option("--config", config_path);
  instruct_cmd->add_option("--out", out_path);

  auto* synth_cmd = app.add_subcommand("synth", "synthesize speech from an instruction");
  synth_cmd->add_option("--instruction", instruction_path)->required();
  synth_cmd->add_option("--mode", mode_name)->check(CLI::IsMember({"expressive", "neutral"}));
  synth_cmd->add_option("--out", out_path)->required();
  synth_cmd->add_option("--config", config_path);

  auto* compose_cmd = app.add_subcommand("compose", "attach a speech track to a video");
  compose_cmd->add_option("--video", video)->required();
  compose_cmd->add_option("--audio", audio_path)->required();
  compose_cmd->add_option("--overrun", overrun)
      ->check(CLI::IsMember({"error", "pad_video_tail_black", "truncate_audio"}));
  compose_cmd->add_option("--underrun", underrun)
      ->check(CLI::IsMember({"pad_audio_silence", "leave_short"}));
  compose_cmd->add_option("--out", out_path)->required();

  auto* run_cmd = app.add_subcommand("run", "run the full pipeline");
  run_cmd->add_option("--video", video)->required();
  run_cmd->add_option("--transcript", transcript)->required();
  run_cmd->add_option("--config", config_path);
  run_cmd->add_option("--mode", mode_name)->check(CLI::IsMember({"expressive", "neutral"}));
  run_cmd->add_flag("--single-shot", single_shot);
  run_cmd->add_flag("-v,--verbose", verbose);

  auto* resume_cmd = app.add_subcommand("resume", "complete a partial run");
  resume_cmd->add_option("--run-id", run_id)->required();
  resume_cmd->add_option("--config", config_path);
  resume_cmd->add_flag("-v,--verbose", verbose);

  auto* eval_cmd = app.add_subcommand("eval", "study measurement harness");
  eval_cmd->require_subcommand(1);
  auto* tendency = eval_cmd->add_subcommand("tendency", "intent/tendency consistency rates");
  tendency->add_option("--records", records_path)->required();
  tendency->add_option("--condition", condition_name)
      ->required()
      ->check(CLI::IsMember({"neutral", "aligned", "contradictory"}));
  tendency->add_option("--out", out_path);
  auto* similarity = eval_cmd->add_subcommand("similarity", "embedding similarity comparison");
  similarity->add_option("--human", human_dir)->required();
  similarity->add_option("--kb-llm", kb_llm_dir)->required();
  similarity->add_option("--plain-llm", plain_llm_dir)->required();
  similarity->add_option("--config", config_path);
  similarity->add_option("--out", out_path);
  auto* preference = eval_cmd->add_subcommand("preference", "expressive-vs-neutral preference rate");
  preference->add_option("--choices", choices_path)->required();
  preference->add_option("--out", out_path);

  auto* cache_cmd = app.add_subcommand("cache", "cache utilities");
  cache_cmd->require_subcommand(1);
  auto* gc = cache_cmd->add_subcommand("gc", "shrink the cache to a byte budget");
  gc->add_option("--max-bytes", max_bytes)->required();
  gc->add_option("--cache-dir", cache_dir);
  gc->add_option("--config", config_path);

  try {
    app.parse(argc, argv);
    if (frames->parsed()) {
      return cmd_frames(video, policy_name, k, threshold, max_frames, out_path);
    }
    if (kb_lint->parsed()) return cmd_kb_lint(kb_path);
    if (kb_query->parsed()) {
      if (kb_path.empty()) {
        kb_path = (load_config_or_default("").kb_path).string();
      }
      return cmd_kb_query(kb_path, cue);
    }
    if (instruct_cmd->parsed()) {
      return cmd_instruct(report_path, transcript, kb_path, single_shot, config_path, out_path);
    }
    if (synth_cmd->parsed()) return cmd_synth(instruction_path, mode_name, out_path, config_path);
    if (compose_cmd->parsed()) return cmd_compose(video, audio_path, overrun, underrun, out_path);
    if (run_cmd->parsed()) {
      return cmd_run(video, transcript, config_path, mode_name, single_shot, verbose);
    }
    if (resume_cmd->parsed()) return cmd_resume(run_id, config_path, verbose);
    if (tendency->parsed()) return cmd_eval_tendency(records_path, condition_name, out_path);
    if (similarity->parsed()) {
      return cmd_eval_similarity(human_dir, kb_llm_dir, plain_llm_dir, config_path, out_path);
    }
    if (preference->parsed()) return cmd_eval_preference(choices_path, out_path);
    if (gc->parsed()) return cmd_cache_gc(cache_dir, config_path, max_bytes);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const Error& e) {
    std::cerr << "vcass: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "vcass: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
