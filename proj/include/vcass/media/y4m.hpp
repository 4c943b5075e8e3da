// YUV4MPEG2 support for the reference decoder/muxer tool and for synthetic
// test fixtures. Only what the contract needs: header parse, frame offsets,
// luma-plane access, and appending frames.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace vcass::media::y4m {

struct Info {
  int width = 0;
  int height = 0;
  int fps_num = 0;
  int fps_den = 1;
  std::string colorspace;  // "mono", "420", "444" (family, params stripped)
  size_t frame_size = 0;   // bytes per frame payload
  std::vector<size_t> frame_offsets;  // offset of each frame payload (after FRAME\n)
  size_t header_len = 0;

  int frame_count() const { return static_cast<int>(frame_offsets.size()); }
  double fps() const { return static_cast<double>(fps_num) / fps_den; }
  double duration_s() const {
    return fps_num > 0 ? frame_count() * static_cast<double>(fps_den) / fps_num : 0.0;
  }
};

// Throws CorruptMedia on anything that is not a well-formed Y4M stream.
Info probe_file(const std::filesystem::path& path);

// Luma plane of frame `index` (row-major width*height bytes).
std::vector<uint8_t> read_luma(const std::filesystem::path& path, const Info& info, int index);

struct Writer {
  int width = 0;
  int height = 0;
  int fps_num = 25;
  int fps_den = 1;
  bool mono = true;  // mono or C420jpeg

  std::string header() const;
  // Frame payload from a luma plane; chroma (when 420) is written neutral.
  std::string frame_payload(const std::vector<uint8_t>& luma) const;
};

// Appends `count` black frames to a Y4M byte buffer (used by the muxer's
// pad-video-tail policy). Returns the new buffer.
std::vector<uint8_t> append_black_frames(const std::vector<uint8_t>& y4m_bytes, int count);

}  // namespace vcass::media::y4m
