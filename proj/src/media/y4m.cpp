#include "vcass/media/y4m.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <sstream>

#include "vcass/common/errors.hpp"
#include "vcass/common/fsutil.hpp"

namespace fs = std::filesystem;

namespace vcass::media::y4m {

namespace {

constexpr char kMagic[] = "YUV4MPEG2";
constexpr char kFrameMarker[] = "FRAME";

size_t plane_bytes(const std::string& colorspace, int w, int h) {
  size_t luma = static_cast<size_t>(w) * h;
  if (colorspace == "mono") return luma;
  if (colorspace == "420") {
    if (w % 2 || h % 2) throw CorruptMedia("C420 requires even dimensions");
    return luma + 2 * ((static_cast<size_t>(w) / 2) * (h / 2));
  }
  if (colorspace == "444") return luma * 3;
  throw CorruptMedia("unsupported Y4M colorspace C" + colorspace);
}

Info parse_header_line(const std::string& line) {
  Info info;
  std::istringstream in(line);
  std::string tok;
  in >> tok;
  if (tok != kMagic) throw CorruptMedia("missing YUV4MPEG2 magic");
  info.colorspace = "420";  // spec default
  while (in >> tok) {
    if (tok.empty()) continue;
    char tag = tok[0];
    std::string val = tok.substr(1);
    switch (tag) {
      case 'W':
        info.width = std::stoi(val);
        break;
      case 'H':
        info.height = std::stoi(val);
        break;
      case 'F': {
        size_t colon = val.find(':');
        if (colon == std::string::npos) throw CorruptMedia("bad Y4M frame rate " + tok);
        info.fps_num = std::stoi(val.substr(0, colon));
        info.fps_den = std::stoi(val.substr(colon + 1));
        break;
      }
      case 'C': {
        if (val.rfind("mono", 0) == 0) {
          info.colorspace = "mono";
        } else if (val.rfind("420", 0) == 0) {
          info.colorspace = "420";
        } else if (val.rfind("444", 0) == 0) {
          info.colorspace = "444";
        } else {
          throw CorruptMedia("unsupported Y4M colorspace " + tok);
        }
        break;
      }
      default:
        break;  // interlace/aspect/extension params don't affect us
    }
  }
  if (info.width <= 0 || info.height <= 0) throw CorruptMedia("bad Y4M dimensions");
  if (info.fps_num <= 0 || info.fps_den <= 0) throw CorruptMedia("bad Y4M frame rate");
  return info;
}

}  // namespace

Info probe_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFound("cannot open " + path.string());

  std::string header;
  if (!std::getline(in, header) || header.empty()) {
    throw CorruptMedia("empty or truncated Y4M stream: " + path.string());
  }
  Info info = parse_header_line(header);
  info.header_len = header.size() + 1;
  info.frame_size = plane_bytes(info.colorspace, info.width, info.height);

  size_t pos = info.header_len;
  std::string marker;
  while (std::getline(in, marker)) {
    size_t marker_len = marker.size() + 1;
    if (marker.compare(0, 5, kFrameMarker) != 0) {
      throw CorruptMedia("bad FRAME marker at offset " + std::to_string(pos));
    }
    size_t payload = pos + marker_len;
    info.frame_offsets.push_back(payload);
    in.seekg(static_cast<std::streamoff>(payload + info.frame_size), std::ios::beg);
    if (!in) throw CorruptMedia("truncated Y4M frame at offset " + std::to_string(payload));
    // confirm the seek landed inside the file
    if (in.peek() == EOF) {
      in.clear();
      in.seekg(0, std::ios::end);
      if (static_cast<size_t>(in.tellg()) != payload + info.frame_size) {
        throw CorruptMedia("truncated Y4M frame at offset " + std::to_string(payload));
      }
      return info;
    }
    pos = payload + info.frame_size;
  }
  return info;
}

std::vector<uint8_t> read_luma(const fs::path& path, const Info& info, int index) {
  if (index < 0 || index >= info.frame_count()) {
    throw CorruptMedia("frame index " + std::to_string(index) + " out of range");
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFound("cannot open " + path.string());
  std::vector<uint8_t> luma(static_cast<size_t>(info.width) * info.height);
  in.seekg(static_cast<std::streamoff>(info.frame_offsets[static_cast<size_t>(index)]),
           std::ios::beg);
  in.read(reinterpret_cast<char*>(luma.data()), static_cast<std::streamsize>(luma.size()));
  if (!in) throw CorruptMedia("truncated Y4M frame " + std::to_string(index));
  return luma;
}

std::string Writer::header() const {
  std::ostringstream out;
  out << kMagic << " W" << width << " H" << height << " F" << fps_num << ":" << fps_den
      << " Ip A1:1 C" << (mono ? "mono" : "420jpeg") << "\n";
  return out.str();
}

std::string Writer::frame_payload(const std::vector<uint8_t>& luma) const {
  if (luma.size() != static_cast<size_t>(width) * height) {
    throw std::invalid_argument("y4m::Writer: luma plane size mismatch");
  }
  std::string out = "FRAME\n";
  out.append(reinterpret_cast<const char*>(luma.data()), luma.size());
  if (!mono) {
    out.append((static_cast<size_t>(width) / 2) * (static_cast<size_t>(height) / 2) * 2,
               static_cast<char>(128));
  }
  return out;
}

std::vector<uint8_t> append_black_frames(const std::vector<uint8_t>& y4m_bytes, int count) {
  if (count <= 0) return y4m_bytes;
  // parse enough of the header to learn the frame geometry
  auto newline = std::find(y4m_bytes.begin(), y4m_bytes.end(), '\n');
  if (newline == y4m_bytes.end()) throw CorruptMedia("append_black_frames: no Y4M header");
  std::string header(y4m_bytes.begin(), newline);
  Info info = parse_header_line(header);
  size_t frame_size = plane_bytes(info.colorspace, info.width, info.height);

  std::vector<uint8_t> out = y4m_bytes;
  size_t luma = static_cast<size_t>(info.width) * info.height;
  for (int i = 0; i < count; ++i) {
    out.insert(out.end(), {'F', 'R', 'A', 'M', 'E', '\n'});
    size_t before = out.size();
    out.resize(before + frame_size, 128);  // neutral chroma
    std::memset(out.data() + before, 0, luma);  // black luma
  }
  return out;
}

}  // namespace vcass::media::y4m
