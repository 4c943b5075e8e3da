#include "vcass/media/avcontainer.hpp"

#include <algorithm>

#include <json.hpp>

#include "vcass/common/errors.hpp"
#include "vcass/common/fsutil.hpp"

namespace vcass::media::avc {

using nlohmann::json;

std::vector<uint8_t> write(const Container& c) {
  json header = {
      {"video_format", c.video_format},
      {"audio_format", c.audio_format},
      {"video_duration_s", c.video_duration_s},
      {"audio_duration_s", c.audio_duration_s},
      {"video_len", c.video.size()},
      {"audio_len", c.audio.size()},
  };
  std::string head = std::string(kMagic) + "\n" + header.dump() + "\n";
  std::vector<uint8_t> out(head.begin(), head.end());
  out.insert(out.end(), c.video.begin(), c.video.end());
  out.insert(out.end(), c.audio.begin(), c.audio.end());
  return out;
}

Container read(const std::vector<uint8_t>& bytes) {
  std::string magic_line(kMagic);
  magic_line += '\n';
  if (bytes.size() < magic_line.size() ||
      !std::equal(magic_line.begin(), magic_line.end(), bytes.begin())) {
    throw CorruptMedia("not a VCAV1 container");
  }
  auto header_end = std::find(bytes.begin() + static_cast<long>(magic_line.size()), bytes.end(),
                              static_cast<uint8_t>('\n'));
  if (header_end == bytes.end()) throw CorruptMedia("VCAV1: missing header line");

  json header;
  try {
    header = json::parse(std::string(bytes.begin() + static_cast<long>(magic_line.size()),
                                     header_end));
  } catch (const json::exception& e) {
    throw CorruptMedia(std::string("VCAV1: bad header JSON: ") + e.what());
  }

  Container c;
  try {
    c.video_format = header.at("video_format").get<std::string>();
    c.audio_format = header.at("audio_format").get<std::string>();
    c.video_duration_s = header.at("video_duration_s").get<double>();
    c.audio_duration_s = header.at("audio_duration_s").get<double>();
    size_t video_len = header.at("video_len").get<size_t>();
    size_t audio_len = header.at("audio_len").get<size_t>();
    size_t body = static_cast<size_t>(header_end - bytes.begin()) + 1;
    if (body + video_len + audio_len != bytes.size()) {
      throw CorruptMedia("VCAV1: stream length mismatch");
    }
    c.video.assign(bytes.begin() + static_cast<long>(body),
                   bytes.begin() + static_cast<long>(body + video_len));
    c.audio.assign(bytes.begin() + static_cast<long>(body + video_len), bytes.end());
  } catch (const json::exception& e) {
    throw CorruptMedia(std::string("VCAV1: incomplete header: ") + e.what());
  }
  return c;
}

Container read_file(const std::filesystem::path& path) {
  return read(fsutil::read_binary_file(path));
}

}  // namespace vcass::media::avc
