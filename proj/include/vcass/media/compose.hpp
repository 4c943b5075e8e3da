// Attach a synthesized speech track to the source video via the muxer
// contract, resolving duration mismatch by policy before the subprocess
// runs.
#pragma once

#include <filesystem>
#include <string>

#include "vcass/common/wav.hpp"
#include "vcass/media/probe.hpp"

namespace vcass::media {

enum class OverrunPolicy { kError, kPadVideoTailBlack, kTruncateAudio };
enum class UnderrunPolicy { kPadAudioSilence, kLeaveShort };

struct ComposePolicy {
  OverrunPolicy overrun = OverrunPolicy::kError;
  UnderrunPolicy underrun = UnderrunPolicy::kPadAudioSilence;

  std::string canonical() const;
};

OverrunPolicy overrun_from_string(const std::string& s);
UnderrunPolicy underrun_from_string(const std::string& s);

// Writes the composed container to out_path atomically. Throws OverrunError
// (audio longer than video under overrun=error, message reports the overrun
// seconds) or MuxerFailure (nonzero muxer exit, stderr preserved).
void compose(const VideoRef& video, const audio::AudioClip& audio_clip,
             const ComposePolicy& policy, const std::filesystem::path& out_path,
             const MediaToolConfig& tool);

}  // namespace vcass::media
