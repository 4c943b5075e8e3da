// End-to-end CLI checks over the real binaries: subcommand plumbing, output
// artifacts, and the documented exit codes (0/2/3/4).
#include <doctest.h>

#include <json.hpp>

#include "test_util.hpp"
#include "vcass/common/wav.hpp"
#include "vcass/vision/report.hpp"

using namespace vcass;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string vcass_bin() { return testutil::vcass_bin().string(); }

// config file pointing at repo data + build-tree tools, mock backends
fs::path write_config(const fs::path& dir, const std::string& cache_name = "cache") {
  json tool = {
      {"probe", {testutil::mediatool_bin().string(), "probe", "{input}"}},
      {"frame",
       {testutil::mediatool_bin().string(), "frame", "--input", "{input}", "--out-dir",
        "{out_dir}", "--index", "{frame_index}"}},
      {"mux",
       {testutil::mediatool_bin().string(), "mux", "--video", "{video}", "--audio", "{audio}",
        "--out", "{out}", "--pad-video-frames", "{video_pad_frames}"}},
  };
  json cfg = {
      {"endpoints",
       {{"vlm", {{"base_url", "mock://vlm"}}},
        {"llm", {{"base_url", "mock://llm"}}},
        {"tts", {{"base_url", "mock://tts"}}},
        {"embed", {{"base_url", "mock://embed"}}}}},
      {"keyframe_policy", {{"mode", "uniform"}, {"k", 5}, {"max_frames", 32}}},
      {"kb_path", (testutil::source_dir() / "data" / "kb" / "vcass_default.kb").string()},
      {"prompts_dir", testutil::prompts_dir().string()},
      {"compose_policy", {{"overrun", "error"}, {"underrun", "pad_audio_silence"}}},
      {"cache_dir", (dir / cache_name).string()},
      {"media_tool", tool},
  };
  fs::path path = dir / ("vcass-" + cache_name + ".json");
  fsutil::atomic_write(path, cfg.dump(2));
  return path;
}

}  // namespace

TEST_CASE("frames subcommand extracts stills and prints json") {
  fsutil::ScratchDir scratch("cli-frames");
  fs::path clip = scratch.path() / "clip.y4m";
  testutil::write_y4m(clip, "gradient", 50, 5);

  auto r = testutil::run_cmd({vcass_bin(), "frames", clip.string(), "--policy", "uniform", "--k",
                              "3", "--out", (scratch.path() / "frames").string()});
  REQUIRE(r.exit_code == 0);
  json doc = json::parse(r.out);
  REQUIRE(doc.at("frames").size() == 3);
  CHECK(doc["frames"][0].at("index") == 0);
  CHECK(doc["frames"][2].at("index") == 49);
  CHECK(fs::exists(doc["frames"][1].at("image_path").get<std::string>()));
}

TEST_CASE("kb lint: ok and failure exit codes") {
  auto ok = testutil::run_cmd({vcass_bin(), "kb", "lint", testutil::default_kb().string()});
  CHECK(ok.exit_code == 0);
  CHECK(ok.out.find("rules") != std::string::npos);

  fsutil::ScratchDir scratch("cli-kb");
  fs::path bad = scratch.path() / "bad.kb";
  fsutil::atomic_write(bad, std::string("id: a\ncue_category: color\nbroken line\n"));
  auto fail = testutil::run_cmd({vcass_bin(), "kb", "lint", bad.string()});
  CHECK(fail.exit_code == 2);
  CHECK(fail.err.find("bad.kb:3") != std::string::npos);
}

TEST_CASE("kb query ranks the calm rule first for the smooth-lines cue") {
  auto r = testutil::run_cmd({vcass_bin(), "kb", "query", "--kb", testutil::default_kb().string(),
                              "--cue", "smooth lines across the horizon"});
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.rfind("rank=1 rule=line-smooth-calm", 0) == 0);
  CHECK(r.out.find("calm and peaceful") != std::string::npos);
}

TEST_CASE("run + instruct + synth + compose round trip through files") {
  fsutil::ScratchDir scratch("cli-e2e");
  fs::path clip = scratch.path() / "clip.y4m";
  testutil::write_y4m(clip, "gradient", 50, 5);
  fs::path transcript = scratch.path() / "t.txt";
  fsutil::atomic_write(transcript, std::string("People gather in the square.\n"));
  fs::path config = write_config(scratch.path());

  auto run = testutil::run_cmd({vcass_bin(), "run", "--video", clip.string(), "--transcript",
                                transcript.string(), "--config", config.string()});
  REQUIRE_MESSAGE(run.exit_code == 0, run.err);
  json manifest = json::parse(run.out);
  CHECK(manifest.at("backend_calls").at("vlm") == 1);
  CHECK(manifest.at("backend_calls").at("llm") == 3);

  // reuse the cached analyze artifact as instruct input
  fs::path cache = scratch.path() / "cache";
  fs::path report_path =
      cache / manifest.at("stage_artifacts").at("analyze").at("artifact").get<std::string>();
  REQUIRE(fs::exists(report_path));

  fs::path instruction_path = scratch.path() / "instruction.json";
  auto instruct = testutil::run_cmd({vcass_bin(), "instruct", "--report", report_path.string(),
                                     "--transcript", transcript.string(), "--kb",
                                     testutil::default_kb().string(), "--config", config.string(),
                                     "--out", instruction_path.string()});
  REQUIRE_MESSAGE(instruct.exit_code == 0, instruct.err);
  json instruction_doc = json::parse(fsutil::read_text_file(instruction_path));
  CHECK(instruction_doc.at("instruction").at("rendered_instruction").get<std::string>().find(
            "People gather in the square.") != std::string::npos);
  CHECK(instruction_doc.at("trace").at("backend_calls") == 3);

  fs::path wav_path = scratch.path() / "speech.wav";
  auto synth = testutil::run_cmd({vcass_bin(), "synth", "--instruction",
                                  instruction_path.string(), "--mode", "expressive", "--out",
                                  wav_path.string(), "--config", config.string()});
  REQUIRE_MESSAGE(synth.exit_code == 0, synth.err);
  CHECK_NOTHROW(audio::validate_wav_file(wav_path));

  fs::path composed = scratch.path() / "composed.vcav";
  auto compose = testutil::run_cmd({vcass_bin(), "compose", "--video", clip.string(), "--audio",
                                    wav_path.string(), "--out", composed.string()});
  // the default vcass-mediatool sits next to the vcass binary in the build
  REQUIRE_MESSAGE(compose.exit_code == 0, compose.err);
  CHECK(fs::exists(composed));
}

TEST_CASE("exit codes: validation 2, backend 3, media-tool 4") {
  fsutil::ScratchDir scratch("cli-exit");
  fs::path clip = scratch.path() / "clip.y4m";
  testutil::write_y4m(clip, "gradient", 10, 5);
  fs::path transcript = scratch.path() / "t.txt";
  fsutil::atomic_write(transcript, std::string("Words.\n"));

  // 2: missing input file
  auto missing = testutil::run_cmd({vcass_bin(), "run", "--video",
                                    (scratch.path() / "nope.y4m").string(), "--transcript",
                                    transcript.string(), "--config",
                                    write_config(scratch.path(), "c2").string()});
  CHECK(missing.exit_code == 2);

  // 3: unreachable backend (no retries to stay fast)
  json cfg = json::parse(fsutil::read_text_file(write_config(scratch.path(), "c3")));
  cfg["endpoints"]["vlm"] = {
      {"base_url", "http://127.0.0.1:1"}, {"timeout_s", 0.2}, {"max_retries", 0}};
  fs::path backend_cfg = scratch.path() / "backend.json";
  fsutil::atomic_write(backend_cfg, cfg.dump());
  auto backend = testutil::run_cmd({vcass_bin(), "run", "--video", clip.string(), "--transcript",
                                    transcript.string(), "--config", backend_cfg.string()});
  CHECK(backend.exit_code == 3);

  // 4: broken muxer template
  json cfg4 = json::parse(fsutil::read_text_file(write_config(scratch.path(), "c4")));
  cfg4["media_tool"]["mux"] = {"/bin/sh", "-c", "exit 5"};
  fs::path muxer_cfg = scratch.path() / "muxer.json";
  fsutil::atomic_write(muxer_cfg, cfg4.dump());
  auto muxer = testutil::run_cmd({vcass_bin(), "run", "--video", clip.string(), "--transcript",
                                  transcript.string(), "--config", muxer_cfg.string()});
  CHECK(muxer.exit_code == 4);
}

TEST_CASE("eval subcommands print tables and machine-readable reports") {
  fsutil::ScratchDir scratch("cli-eval");

  fs::path records = scratch.path() / "records.csv";
  std::string csv = "video_id,participant_id,condition,intent,judged_tendency\n";
  // 10 positive-intent (7 judged positive), 10 negative-intent (6 judged negative)
  for (int i = 0; i < 10; ++i) {
    csv += "vp,p" + std::to_string(i) + ",neutral,positive," + (i < 7 ? "positive" : "negative") +
           "\n";
    csv += "vn,p" + std::to_string(i) + ",neutral,negative," + (i < 6 ? "negative" : "positive") +
           "\n";
  }
  fsutil::atomic_write(records, csv);
  fs::path report = scratch.path() / "tendency.json";
  auto tendency = testutil::run_cmd({vcass_bin(), "eval", "tendency", "--records",
                                     records.string(), "--condition", "neutral", "--out",
                                     report.string()});
  REQUIRE_MESSAGE(tendency.exit_code == 0, tendency.err);
  CHECK(tendency.out.find("Consistent") != std::string::npos);
  json doc = json::parse(fsutil::read_text_file(report));
  CHECK(doc.at("consistent").get<double>() == doctest::Approx(0.65));

  fs::path choices = scratch.path() / "choices.csv";
  fsutil::atomic_write(choices, std::string("participant_id,video_id,chosen\n"
                                            "p1,v1,expressive\np2,v1,expressive\np3,v1,neutral\n"));
  auto pref = testutil::run_cmd(
      {vcass_bin(), "eval", "preference", "--choices", choices.string()});
  REQUIRE(pref.exit_code == 0);
  CHECK(pref.out.find("66.67%") != std::string::npos);

  // similarity over tiny corpora
  fs::path human = scratch.path() / "human";
  fs::path kb_dir = scratch.path() / "kb";
  fs::path plain = scratch.path() / "plain";
  fs::create_directories(human);
  fs::create_directories(kb_dir);
  fs::create_directories(plain);
  fsutil::atomic_write(human / "01.r1.txt", std::string("warm festive square"));
  fsutil::atomic_write(human / "01.r2.txt", std::string("golden lively evening"));
  fsutil::atomic_write(kb_dir / "01.txt", std::string("warm festive square"));
  fsutil::atomic_write(plain / "01.txt", std::string("a street"));
  auto sim = testutil::run_cmd({vcass_bin(), "eval", "similarity", "--human", human.string(),
                                "--kb-llm", kb_dir.string(), "--plain-llm", plain.string()});
  REQUIRE_MESSAGE(sim.exit_code == 0, sim.err);
  CHECK(sim.out.find("Average") != std::string::npos);
  CHECK(sim.out.find("Knowledge-infused LLM") != std::string::npos);
}

TEST_CASE("resume subcommand returns the manifest of a finished run") {
  fsutil::ScratchDir scratch("cli-resume");
  fs::path clip = scratch.path() / "clip.y4m";
  testutil::write_y4m(clip, "gradient", 20, 5);
  fs::path transcript = scratch.path() / "t.txt";
  fsutil::atomic_write(transcript, std::string("Short line.\n"));
  fs::path config = write_config(scratch.path());

  auto run = testutil::run_cmd({vcass_bin(), "run", "--video", clip.string(), "--transcript",
                                transcript.string(), "--config", config.string()});
  REQUIRE_MESSAGE(run.exit_code == 0, run.err);
  std::string run_id = json::parse(run.out).at("run_id");

  auto resume = testutil::run_cmd(
      {vcass_bin(), "resume", "--run-id", run_id, "--config", config.string()});
  REQUIRE_MESSAGE(resume.exit_code == 0, resume.err);
  CHECK(json::parse(resume.out).at("run_id") == run_id);

  auto unknown = testutil::run_cmd(
      {vcass_bin(), "resume", "--run-id", "0000000000000000", "--config", config.string()});
  CHECK(unknown.exit_code == 2);
}

TEST_CASE("cache gc subcommand reports byte counts") {
  fsutil::ScratchDir scratch("cli-gc");
  fs::path cache = scratch.path() / "cache";
  fs::create_directories(cache / "objects");
  fsutil::atomic_write(cache / "objects" / "aaaa.bin", std::string(4096, 'x'));
  auto r = testutil::run_cmd({vcass_bin(), "cache", "gc", "--max-bytes", "1024", "--cache-dir",
                              cache.string()});
  REQUIRE(r.exit_code == 0);
  json doc = json::parse(r.out);
  CHECK(doc.at("bytes_after").get<uint64_t>() <= 1024);
}
