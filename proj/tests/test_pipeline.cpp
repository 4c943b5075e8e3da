#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <sstream>

#include <json.hpp>

#include "test_util.hpp"
#include "vcass/common/digest.hpp"
#include "vcass/common/errors.hpp"
#include "vcass/pipeline/cache.hpp"
#include "vcass/pipeline/config.hpp"
#include "vcass/pipeline/runner.hpp"

using namespace vcass;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct PipelineFixture {
  fsutil::ScratchDir scratch{"pipe"};
  fs::path video;
  fs::path transcript;

  PipelineFixture() {
    video = scratch.path() / "clip.y4m";
    testutil::write_y4m(video, "gradient", 50, 5);  // 10 s
    transcript = scratch.path() / "commentary.txt";
    fsutil::atomic_write(transcript, std::string("People gather in the square.\n"));
  }

  pipeline::PipelineConfig config(const std::string& cache_name = "cache") const {
    auto cfg = pipeline::PipelineConfig::mock_defaults(testutil::source_dir());
    cfg.cache_dir = scratch.path() / cache_name;
    cfg.media_tool = testutil::tool_config();
    return cfg;
  }
};

json normalized(const pipeline::RunManifest& m) {
  json doc = json::parse(m.to_json());
  doc.erase("timings_ms");
  return doc;
}

int64_t total_calls(const pipeline::RunManifest& m) {
  int64_t total = 0;
  for (const auto& [k, v] : m.backend_calls) total += v;
  return total;
}

}  // namespace

TEST_CASE("cold run: six artifacts, expected backend call counts") {
  PipelineFixture fx;
  pipeline::PipelineRunner runner(fx.config());
  auto manifest = runner.run(fx.video, fx.transcript);

  CHECK(manifest.completed ==
        std::vector<std::string>{"ingest", "analyze", "match", "instruct", "synth", "compose"});
  CHECK(manifest.stage_artifacts.size() == 6);
  CHECK(manifest.backend_calls.at("vlm") == 1);
  CHECK(manifest.backend_calls.at("llm") == 3);
  CHECK(manifest.backend_calls.at("tts") == 1);
  CHECK(manifest.backend_calls.at("embed") == 0);

  for (const auto& [stage, rec] : manifest.stage_artifacts) {
    fs::path p = fx.config().cache_dir / rec.artifact;
    REQUIRE_MESSAGE(fs::exists(p), "missing artifact for ", stage);
    CHECK(digest::sha256_hex_file(p) == rec.sha256);
  }
}

TEST_CASE("warm re-run: zero backend calls, byte-identical composed media") {
  PipelineFixture fx;
  pipeline::PipelineRunner runner(fx.config());
  auto first = runner.run(fx.video, fx.transcript);
  auto second = runner.run(fx.video, fx.transcript);

  CHECK(second.run_id == first.run_id);
  CHECK(total_calls(second) == 0);
  CHECK(second.stage_artifacts.at("compose").sha256 ==
        first.stage_artifacts.at("compose").sha256);
}

TEST_CASE("two cold runs in separate caches: identical manifests modulo timings") {
  PipelineFixture fx;
  pipeline::PipelineRunner a(fx.config("cache-a"));
  pipeline::PipelineRunner b(fx.config("cache-b"));
  auto ma = a.run(fx.video, fx.transcript);
  auto mb = b.run(fx.video, fx.transcript);
  CHECK(normalized(ma) == normalized(mb));

  auto bytes_a =
      fsutil::read_binary_file(fx.config("cache-a").cache_dir / ma.stage_artifacts.at("compose").artifact);
  auto bytes_b =
      fsutil::read_binary_file(fx.config("cache-b").cache_dir / mb.stage_artifacts.at("compose").artifact);
  CHECK(bytes_a == bytes_b);
}

TEST_CASE("changed transcript: media stages hit cache, downstream recomputes") {
  PipelineFixture fx;
  pipeline::PipelineRunner runner(fx.config());
  auto first = runner.run(fx.video, fx.transcript);

  fsutil::atomic_write(fx.transcript, std::string("A different commentary line.\n"));
  auto second = runner.run(fx.video, fx.transcript);

  CHECK(second.run_id != first.run_id);
  // cache-key dependency oracle: ingest/analyze/match keys are
  // transcript-independent, instruct/synth/compose keys are not
  CHECK(second.stage_artifacts.at("ingest").sha256 == first.stage_artifacts.at("ingest").sha256);
  CHECK(second.stage_artifacts.at("analyze").sha256 ==
        first.stage_artifacts.at("analyze").sha256);
  CHECK(second.stage_artifacts.at("match").sha256 == first.stage_artifacts.at("match").sha256);
  CHECK(second.stage_artifacts.at("instruct").sha256 !=
        first.stage_artifacts.at("instruct").sha256);
  CHECK(second.backend_calls.at("vlm") == 0);  // analyze cache hit
  CHECK(second.backend_calls.at("llm") == 3);  // instruct recomputed
  CHECK(second.backend_calls.at("tts") == 1);
}

TEST_CASE("renaming the input never invalidates the cache; editing bytes does") {
  PipelineFixture fx;
  pipeline::PipelineRunner runner(fx.config());
  auto first = runner.run(fx.video, fx.transcript);

  fs::path renamed = fx.scratch.path() / "renamed.y4m";
  fs::rename(fx.video, renamed);
  auto second = runner.run(renamed, fx.transcript);
  CHECK(second.run_id == first.run_id);
  CHECK(total_calls(second) == 0);

  // edit one luma byte inside frame 0 (always a selected keyframe): the
  // still's hash changes, so analysis and everything downstream recompute
  auto bytes = fsutil::read_binary_file(renamed);
  std::string marker = "FRAME\n";
  auto it = std::search(bytes.begin(), bytes.end(), marker.begin(), marker.end());
  REQUIRE(it != bytes.end());
  *(it + static_cast<long>(marker.size()) + 10) ^= 0x40;
  fs::path edited = fx.scratch.path() / "edited.y4m";
  fsutil::atomic_write(edited, bytes);
  auto third = runner.run(edited, fx.transcript);
  CHECK(third.run_id != first.run_id);
  CHECK(third.backend_calls.at("vlm") == 1);
  CHECK(third.backend_calls.at("llm") == 3);
}

TEST_CASE("neutral mode: three stages, tts only, style-free payload") {
  PipelineFixture fx;
  pipeline::PipelineRunner runner(fx.config());
  pipeline::RunOptions options;
  options.mode = synth::SynthesisMode::kNeutralBaseline;
  auto manifest = runner.run(fx.video, fx.transcript, options);

  CHECK(manifest.completed == std::vector<std::string>{"ingest", "synth", "compose"});
  CHECK(manifest.backend_calls.at("vlm") == 0);
  CHECK(manifest.backend_calls.at("llm") == 0);
  CHECK(manifest.backend_calls.at("tts") == 1);

  // expressive and neutral runs produce different composed audio
  auto expressive = runner.run(fx.video, fx.transcript);
  CHECK(expressive.run_id != manifest.run_id);
  CHECK(expressive.stage_artifacts.at("synth").sha256 !=
        manifest.stage_artifacts.at("synth").sha256);
}

TEST_CASE("single-shot mode runs one llm call under its own run id") {
  PipelineFixture fx;
  pipeline::PipelineRunner runner(fx.config());
  pipeline::RunOptions options;
  options.single_shot = true;
  auto manifest = runner.run(fx.video, fx.transcript, options);
  CHECK(manifest.backend_calls.at("llm") == 1);
  CHECK(manifest.backend_calls.at("vlm") == 1);
  CHECK(manifest.single_shot);

  auto chained = runner.run(fx.video, fx.transcript);
  CHECK(chained.run_id != manifest.run_id);
  CHECK(chained.backend_calls.at("llm") == 3);
  // analyze/match artifacts are shared between the two flavors
  CHECK(chained.stage_artifacts.at("analyze").sha256 ==
        manifest.stage_artifacts.at("analyze").sha256);
  CHECK(chained.backend_calls.at("vlm") == 0);
}

TEST_CASE("fault injection after every stage, then resume: identical manifest, no repeat calls") {
  PipelineFixture fx;

  // reference: uninterrupted run in its own cache
  pipeline::PipelineRunner ref_runner(fx.config("cache-ref"));
  auto reference = ref_runner.run(fx.video, fx.transcript);

  const std::vector<std::string> stages = {"ingest", "analyze", "match",
                                           "instruct", "synth", "compose"};
  for (const auto& crash_after : stages) {
    auto cfg = fx.config("cache-crash-" + crash_after);
    pipeline::PipelineRunner runner(cfg);

    pipeline::RunOptions options;
    options.after_stage = [&](const std::string& stage) {
      if (stage == crash_after) throw std::runtime_error("injected crash after " + stage);
    };
    CHECK_THROWS(runner.run(fx.video, fx.transcript, options));

    auto resumed = runner.resume(reference.run_id);
    CHECK_MESSAGE(normalized(resumed) == normalized(reference), "crash point: ", crash_after);
    // accumulated backend calls equal the uninterrupted run's: nothing re-ran
    CHECK(resumed.backend_calls == reference.backend_calls);
  }
}

TEST_CASE("resume of a completed run is a no-op") {
  PipelineFixture fx;
  pipeline::PipelineRunner runner(fx.config());
  auto manifest = runner.run(fx.video, fx.transcript);
  auto resumed = runner.resume(manifest.run_id);
  CHECK(normalized(resumed) == normalized(manifest));
  CHECK(resumed.timings_ms == manifest.timings_ms);  // untouched manifest
}

TEST_CASE("resume: unknown run and config drift") {
  PipelineFixture fx;
  pipeline::PipelineRunner runner(fx.config());
  CHECK_THROWS_AS(runner.resume("deadbeefdeadbeef"), UnknownRun);

  auto manifest = runner.run(fx.video, fx.transcript);

  // drift: point the config at a KB with different content
  auto drifted_cfg = fx.config();
  fs::path other_kb = fx.scratch.path() / "other.kb";
  std::string kb_text = fsutil::read_text_file(drifted_cfg.kb_path);
  kb_text +=
      "\nid: extra-rule\ncue_category: other\ncue_keywords: zzz\nemotional_state: odd\n"
      "tone: odd\npriority: 1\n";
  fsutil::atomic_write(other_kb, kb_text);
  drifted_cfg.kb_path = other_kb;
  pipeline::PipelineRunner drifted(drifted_cfg);
  CHECK_THROWS_AS(drifted.resume(manifest.run_id), ConfigDrift);
}

TEST_CASE("run ids are stable and sensitive to each identity input") {
  PipelineFixture fx;
  auto cfg = fx.config();
  std::string digest_now = cfg.config_digest();
  CHECK(digest_now == fx.config().config_digest());  // reproducible

  std::string id = pipeline::PipelineRunner::compute_run_id(digest_now, "v-sha", "t-sha",
                                                            "expressive", false);
  CHECK(id == pipeline::PipelineRunner::compute_run_id(digest_now, "v-sha", "t-sha",
                                                       "expressive", false));
  CHECK(id != pipeline::PipelineRunner::compute_run_id(digest_now, "v-sha2", "t-sha",
                                                       "expressive", false));
  CHECK(id != pipeline::PipelineRunner::compute_run_id(digest_now, "v-sha", "t-sha2",
                                                       "expressive", false));
  CHECK(id != pipeline::PipelineRunner::compute_run_id("other-config", "v-sha", "t-sha",
                                                       "expressive", false));
  CHECK(id !=
        pipeline::PipelineRunner::compute_run_id(digest_now, "v-sha", "t-sha", "expressive", true));
  CHECK(id.size() == 16);
}

TEST_CASE("run log records one line per stage event") {
  PipelineFixture fx;
  pipeline::PipelineRunner runner(fx.config());
  auto manifest = runner.run(fx.video, fx.transcript);
  fs::path log_path = fx.config().cache_dir / manifest.run_id / "run.log";
  REQUIRE(fs::exists(log_path));
  std::istringstream in(fsutil::read_text_file(log_path));
  std::string line;
  int computed = 0;
  while (std::getline(in, line)) {
    json entry = json::parse(line);  // every line is valid json
    CHECK(entry.at("run_id") == manifest.run_id);
    if (entry.at("event") == "computed") ++computed;
  }
  CHECK(computed == 6);
}

TEST_CASE("cache gc shrinks to budget, keeps newest runs") {
  PipelineFixture fx;
  auto cfg = fx.config();
  pipeline::PipelineRunner runner(cfg);
  auto first = runner.run(fx.video, fx.transcript);

  fsutil::atomic_write(fx.transcript, std::string("Another line of commentary.\n"));
  auto second = runner.run(fx.video, fx.transcript);
  REQUIRE(first.run_id != second.run_id);

  // make run dirs' mtimes clearly ordered
  fs::last_write_time(cfg.cache_dir / first.run_id,
                      fs::last_write_time(cfg.cache_dir / second.run_id) -
                          std::chrono::hours(1));

  // budget just below the current size: the oldest run must go, the newest
  // must survive
  auto probe = pipeline::gc_cache(cfg.cache_dir, UINT64_MAX);
  uint64_t budget = probe.bytes_before - 8 * 1024;
  auto result = pipeline::gc_cache(cfg.cache_dir, budget);
  CHECK(result.bytes_after <= budget);
  CHECK(result.runs_removed >= 1);
  CHECK(!fs::exists(cfg.cache_dir / first.run_id));   // oldest went first
  CHECK(fs::exists(cfg.cache_dir / second.run_id / "manifest"));

  // shrinking to (almost) nothing removes orphaned objects too
  auto full = pipeline::gc_cache(cfg.cache_dir, 1024);
  CHECK(full.objects_removed + full.runs_removed >= 1);
  CHECK(full.bytes_after <= 1024);
}

TEST_CASE("pipeline errors are annotated with the failing stage") {
  PipelineFixture fx;
  auto cfg = fx.config();
  cfg.media_tool.mux_argv = {"/bin/sh", "-c", "exit 3"};
  pipeline::PipelineRunner runner(cfg);
  try {
    runner.run(fx.video, fx.transcript);
    FAIL("expected MuxerFailure");
  } catch (const Error& e) {
    CHECK(e.name() == "MuxerFailure");
    CHECK(std::string(e.what()).find("[compose]") != std::string::npos);
  }
}

TEST_CASE("manifest json round trip") {
  PipelineFixture fx;
  pipeline::PipelineRunner runner(fx.config());
  auto manifest = runner.run(fx.video, fx.transcript);
  auto back = pipeline::RunManifest::from_json(manifest.to_json());
  CHECK(back.to_json() == manifest.to_json());
}
