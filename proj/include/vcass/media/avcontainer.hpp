// Single-file A/V container written by the reference muxer:
//
//   VCAV1\n
//   <one-line JSON header>\n
//   <video stream bytes><audio stream bytes>
//
// The header records byte lengths, formats, and stream durations. Streams
// pass through verbatim, so demuxing is exact byte slicing.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace vcass::media::avc {

constexpr char kMagic[] = "VCAV1";

struct Container {
  std::string video_format;  // "y4m"
  std::string audio_format;  // "wav"
  double video_duration_s = 0.0;
  double audio_duration_s = 0.0;
  std::vector<uint8_t> video;
  std::vector<uint8_t> audio;
};

std::vector<uint8_t> write(const Container& c);
Container read(const std::vector<uint8_t>& bytes);
Container read_file(const std::filesystem::path& path);

}  // namespace vcass::media::avc
