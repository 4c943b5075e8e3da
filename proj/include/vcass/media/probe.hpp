// Video probing through the external decoder contract.
#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace vcass::media {

// Argv templates for the external decoder/muxer utility. Placeholders:
//   probe: {input}
//   frame: {input} {out_dir} {frame_index}
//   mux:   {video} {audio} {out} {video_pad_frames}
// Tokens whose executable has no path separator are resolved against the
// directory of the running binary first, then PATH.
struct MediaToolConfig {
  std::vector<std::string> probe_argv;
  std::vector<std::string> frame_argv;
  std::vector<std::string> mux_argv;

  static MediaToolConfig reference_defaults();
};

struct VideoRef {
  std::filesystem::path path;
  double duration_s = 0.0;
  int64_t frame_count = 0;
  double fps = 0.0;

  // duration*fps must agree with frame_count within one frame;
  // throws ConfigError otherwise.
  void validate() const;
};

// Runs the probe template on `path`. Throws FileNotFound, DecoderUnavailable,
// or CorruptMedia (probe output unparseable / nonzero exit).
VideoRef probe(const std::filesystem::path& path, const MediaToolConfig& tool);

}  // namespace vcass::media
