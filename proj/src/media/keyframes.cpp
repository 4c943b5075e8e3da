#include "vcass/media/keyframes.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "vcass/common/digest.hpp"
#include "vcass/common/errors.hpp"
#include "vcass/common/fsutil.hpp"
#include "vcass/common/png_io.hpp"
#include "vcass/common/subprocess.hpp"

namespace fs = std::filesystem;

namespace vcass::media {

void KeyframePolicy::validate() const {
  if (max_frames < 1) throw ConfigError("KeyframePolicy: max_frames must be >= 1");
  if (mode == KeyframeMode::kUniform) {
    if (k < 1) throw ConfigError("KeyframePolicy: k must be >= 1");
    if (k > max_frames) throw ConfigError("KeyframePolicy: k exceeds max_frames");
  }
  if (diff_threshold < 0.0 || diff_threshold > 1.0) {
    throw ConfigError("KeyframePolicy: diff_threshold outside [0,1]");
  }
}

std::string KeyframePolicy::canonical() const {
  std::ostringstream out;
  out << (mode == KeyframeMode::kUniform ? "uniform" : "scene_change") << ";k=" << k
      << ";thr=" << diff_threshold << ";max=" << max_frames;
  return out.str();
}

std::vector<std::string> KeyframeSet::content_hashes() const {
  std::vector<std::string> out;
  out.reserve(frames.size());
  for (const auto& f : frames) out.push_back(f.content_hash);
  return out;
}

std::vector<int64_t> uniform_indices(int64_t frame_count, int k) {
  std::vector<int64_t> out;
  if (frame_count < 1 || k < 1) return out;
  if (k == 1 || frame_count == 1) {
    out.push_back(0);
    return out;
  }
  int64_t span = frame_count - 1;
  int64_t steps = k - 1;
  for (int64_t i = 0; i < k; ++i) {
    // round(i*span/steps) with ties up, in exact integer arithmetic
    int64_t idx = (2 * i * span + steps) / (2 * steps);
    if (out.empty() || out.back() != idx) out.push_back(idx);
  }
  return out;
}

double mean_abs_diff(const std::vector<uint8_t>& a, const std::vector<uint8_t>& b) {
  if (a.size() != b.size() || a.empty()) {
    throw ConfigError("mean_abs_diff: frame size mismatch");
  }
  uint64_t total = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    total += static_cast<uint64_t>(a[i] > b[i] ? a[i] - b[i] : b[i] - a[i]);
  }
  return static_cast<double>(total) / (255.0 * static_cast<double>(a.size()));
}

namespace {

fs::path extract_one(const VideoRef& video, int64_t index, const fs::path& work_dir,
                     const MediaToolConfig& tool) {
  auto argv = subprocess::render_argv(tool.frame_argv,
                                      {{"input", video.path.string()},
                                       {"out_dir", work_dir.string()},
                                       {"frame_index", std::to_string(index)}});
  auto result = subprocess::run(argv);
  if (result.exit_code != 0) {
    throw DecoderFailure("frame " + std::to_string(index) + " of " + video.path.string() +
                         " (exit " + std::to_string(result.exit_code) + "): " + result.err);
  }
  char name[32];
  std::snprintf(name, sizeof(name), "frame_%06lld.png", static_cast<long long>(index));
  fs::path still = work_dir / name;
  if (!fs::exists(still)) {
    throw DecoderFailure("decoder did not produce " + still.string());
  }
  return still;
}

Keyframe make_keyframe(const VideoRef& video, int64_t index, const fs::path& still) {
  Keyframe kf;
  kf.index = index;
  kf.timestamp_s = static_cast<double>(index) / video.fps;
  kf.image_path = still;
  kf.content_hash = digest::sha256_hex_file(still);
  return kf;
}

}  // namespace

KeyframeSet extract_keyframes(const VideoRef& video, const KeyframePolicy& policy,
                              const fs::path& work_dir, const MediaToolConfig& tool) {
  policy.validate();
  video.validate();
  fs::create_directories(work_dir);

  KeyframeSet set;
  set.video = video;

  if (policy.mode == KeyframeMode::kUniform) {
    for (int64_t idx : uniform_indices(video.frame_count, policy.k)) {
      fs::path still = extract_one(video, idx, work_dir, tool);
      set.frames.push_back(make_keyframe(video, idx, still));
    }
    return set;
  }

  // scene_change: walk every frame, keep those that differ enough from the
  // previously *selected* frame.
  std::vector<uint8_t> last_selected;
  for (int64_t idx = 0; idx < video.frame_count; ++idx) {
    if (static_cast<int>(set.frames.size()) >= policy.max_frames) break;
    fs::path still = extract_one(video, idx, work_dir, tool);
    auto gray = png_io::read_gray_png(still);
    bool selected = false;
    if (idx == 0) {
      selected = true;
    } else {
      selected = mean_abs_diff(gray.pixels, last_selected) > policy.diff_threshold;
    }
    if (selected) {
      last_selected = std::move(gray.pixels);
      set.frames.push_back(make_keyframe(video, idx, still));
    } else {
      std::error_code ec;
      fs::remove(still, ec);
    }
  }
  return set;
}

}  // namespace vcass::media
