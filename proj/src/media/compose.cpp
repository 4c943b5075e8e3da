#include "vcass/media/compose.hpp"

#include <cmath>
#include <cstdio>

#include "vcass/common/errors.hpp"
#include "vcass/common/fsutil.hpp"
#include "vcass/common/subprocess.hpp"

namespace fs = std::filesystem;

namespace vcass::media {

std::string ComposePolicy::canonical() const {
  std::string over = overrun == OverrunPolicy::kError ? "error"
                     : overrun == OverrunPolicy::kPadVideoTailBlack ? "pad_video_tail_black"
                                                                    : "truncate_audio";
  std::string under =
      underrun == UnderrunPolicy::kPadAudioSilence ? "pad_audio_silence" : "leave_short";
  return "overrun=" + over + ";underrun=" + under;
}

OverrunPolicy overrun_from_string(const std::string& s) {
  if (s == "error") return OverrunPolicy::kError;
  if (s == "pad_video_tail_black") return OverrunPolicy::kPadVideoTailBlack;
  if (s == "truncate_audio") return OverrunPolicy::kTruncateAudio;
  throw ConfigError("unknown overrun policy '" + s + "'");
}

UnderrunPolicy underrun_from_string(const std::string& s) {
  if (s == "pad_audio_silence") return UnderrunPolicy::kPadAudioSilence;
  if (s == "leave_short") return UnderrunPolicy::kLeaveShort;
  throw ConfigError("unknown underrun policy '" + s + "'");
}

void compose(const VideoRef& video, const audio::AudioClip& audio_clip,
             const ComposePolicy& policy, const fs::path& out_path,
             const MediaToolConfig& tool) {
  video.validate();
  if (audio_clip.channels != 1 || audio_clip.bit_depth != 16) {
    throw AudioInvalid("channels");
  }

  audio::AudioClip prepared = audio_clip;
  int pad_video_frames = 0;
  const double over_s = audio_clip.duration_s - video.duration_s;
  const auto target_samples = static_cast<size_t>(
      std::llround(video.duration_s * audio_clip.sample_rate_hz));

  if (over_s > 0.5 / audio_clip.sample_rate_hz) {
    switch (policy.overrun) {
      case OverrunPolicy::kError: {
        char msg[128];
        std::snprintf(msg, sizeof(msg), "audio exceeds video by %.3f s", over_s);
        throw OverrunError(msg);
      }
      case OverrunPolicy::kTruncateAudio:
        prepared.samples.resize(target_samples);
        break;
      case OverrunPolicy::kPadVideoTailBlack:
        pad_video_frames = static_cast<int>(std::ceil(over_s * video.fps - 1e-9));
        break;
    }
  } else if (over_s < -0.5 / audio_clip.sample_rate_hz &&
             policy.underrun == UnderrunPolicy::kPadAudioSilence) {
    prepared.samples.resize(target_samples, 0);
  }
  prepared.duration_s =
      static_cast<double>(prepared.samples.size()) / prepared.sample_rate_hz;

  fsutil::ScratchDir scratch("vcass-compose");
  fs::path audio_tmp = scratch.path() / "speech.wav";
  audio::write_wav_file(audio_tmp, prepared);

  fs::create_directories(out_path.parent_path().empty() ? fs::path(".")
                                                        : out_path.parent_path());
  fs::path out_tmp = fsutil::sibling_temp_path(out_path);

  auto argv = subprocess::render_argv(tool.mux_argv,
                                      {{"video", video.path.string()},
                                       {"audio", audio_tmp.string()},
                                       {"out", out_tmp.string()},
                                       {"video_pad_frames", std::to_string(pad_video_frames)}});
  auto result = subprocess::run(argv);
  if (result.exit_code != 0) {
    std::error_code ec;
    fs::remove(out_tmp, ec);
    throw MuxerFailure("muxer exit " + std::to_string(result.exit_code) + ": " + result.err);
  }
  if (!fs::exists(out_tmp)) {
    throw MuxerFailure("muxer produced no output file");
  }
  fs::rename(out_tmp, out_path);
}

}  // namespace vcass::media
