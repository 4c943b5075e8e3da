// Keyframe selection over the decoder subprocess contract.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "vcass/media/probe.hpp"

namespace vcass::media {

struct Keyframe {
  int64_t index = 0;           // 0-based frame index in the source
  double timestamp_s = 0.0;    // index / fps
  std::filesystem::path image_path;
  std::string content_hash;    // sha256 of the PNG bytes
};

enum class KeyframeMode { kUniform, kSceneChange };

struct KeyframePolicy {
  KeyframeMode mode = KeyframeMode::kUniform;
  int k = 5;                    // requested count, uniform mode
  double diff_threshold = 0.18; // mean-abs-diff threshold in [0,1], scene mode
  int max_frames = 32;

  void validate() const;
  std::string canonical() const;  // stable string for cache keys
};

struct KeyframeSet {
  VideoRef video;
  std::vector<Keyframe> frames;

  std::vector<std::string> content_hashes() const;
};

// Uniform selection indices: round(i*(frame_count-1)/(k-1)) for i in 0..k-1,
// deduplicated (exact integer arithmetic, half rounds up). k == 1 selects
// frame 0.
std::vector<int64_t> uniform_indices(int64_t frame_count, int k);

// Mean absolute pixel difference of two 8-bit gray frames, normalized to
// [0, 1].
double mean_abs_diff(const std::vector<uint8_t>& a, const std::vector<uint8_t>& b);

// Extracts stills into `work_dir` via the frame template and returns the
// selected keyframes in strictly increasing index order.
KeyframeSet extract_keyframes(const VideoRef& video, const KeyframePolicy& policy,
                              const std::filesystem::path& work_dir,
                              const MediaToolConfig& tool);

}  // namespace vcass::media
