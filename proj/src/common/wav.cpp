#include "vcass/common/wav.hpp"

#include <cmath>
#include <cstring>

#include "vcass/common/errors.hpp"
#include "vcass/common/fsutil.hpp"

namespace vcass::audio {

namespace {

uint32_t read_u32le(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

uint16_t read_u16le(const uint8_t* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

void put_u32le(std::vector<uint8_t>& v, uint32_t x) {
  v.push_back(static_cast<uint8_t>(x & 0xff));
  v.push_back(static_cast<uint8_t>((x >> 8) & 0xff));
  v.push_back(static_cast<uint8_t>((x >> 16) & 0xff));
  v.push_back(static_cast<uint8_t>((x >> 24) & 0xff));
}

void put_u16le(std::vector<uint8_t>& v, uint16_t x) {
  v.push_back(static_cast<uint8_t>(x & 0xff));
  v.push_back(static_cast<uint8_t>((x >> 8) & 0xff));
}

}  // namespace

AudioClip validate_wav(const std::vector<uint8_t>& bytes) {
  if (bytes.size() < 44 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw AudioInvalid("header");
  }

  bool have_fmt = false;
  uint16_t audio_format = 0, channels = 0, bits = 0, block_align = 0;
  uint32_t sample_rate = 0, byte_rate = 0;
  size_t data_off = 0, data_len = 0;

  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    char id[5] = {0};
    std::memcpy(id, bytes.data() + pos, 4);
    uint32_t chunk_len = read_u32le(bytes.data() + pos + 4);
    size_t body = pos + 8;
    if (body + chunk_len > bytes.size()) throw AudioInvalid("header");

    if (std::memcmp(id, "fmt ", 4) == 0) {
      if (chunk_len < 16) throw AudioInvalid("header");
      const uint8_t* f = bytes.data() + body;
      audio_format = read_u16le(f);
      channels = read_u16le(f + 2);
      sample_rate = read_u32le(f + 4);
      byte_rate = read_u32le(f + 8);
      block_align = read_u16le(f + 12);
      bits = read_u16le(f + 14);
      have_fmt = true;
    } else if (std::memcmp(id, "data", 4) == 0) {
      data_off = body;
      data_len = chunk_len;
    }
    pos = body + chunk_len + (chunk_len & 1);  // chunks are word-aligned
  }

  if (!have_fmt || data_off == 0) throw AudioInvalid("header");
  if (audio_format != 1) throw AudioInvalid("format");
  if (channels != 1) throw AudioInvalid("channels");
  if (bits != 16) throw AudioInvalid("bit_depth");
  if (sample_rate == 0) throw AudioInvalid("sample_rate");
  if (block_align != channels * bits / 8) throw AudioInvalid("block_align");
  if (byte_rate != sample_rate * block_align) throw AudioInvalid("byte_rate");
  if (data_len % 2 != 0) throw AudioInvalid("data");

  AudioClip clip;
  clip.sample_rate_hz = static_cast<int>(sample_rate);
  clip.channels = 1;
  clip.bit_depth = 16;
  clip.samples.resize(data_len / 2);
  for (size_t i = 0; i < clip.samples.size(); ++i) {
    clip.samples[i] = static_cast<int16_t>(read_u16le(bytes.data() + data_off + 2 * i));
  }
  clip.duration_s = static_cast<double>(clip.samples.size()) / sample_rate;
  return clip;
}

AudioClip validate_wav_file(const std::filesystem::path& path) {
  return validate_wav(fsutil::read_binary_file(path));
}

std::vector<uint8_t> write_wav(const AudioClip& clip) {
  const uint32_t data_len = static_cast<uint32_t>(clip.samples.size() * 2);
  std::vector<uint8_t> out;
  out.reserve(44 + data_len);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  put_u32le(out, 36 + data_len);
  out.insert(out.end(), {'W', 'A', 'V', 'E'});
  out.insert(out.end(), {'f', 'm', 't', ' '});
  put_u32le(out, 16);
  put_u16le(out, 1);  // PCM
  put_u16le(out, 1);  // mono
  put_u32le(out, static_cast<uint32_t>(clip.sample_rate_hz));
  put_u32le(out, static_cast<uint32_t>(clip.sample_rate_hz * 2));
  put_u16le(out, 2);   // block align
  put_u16le(out, 16);  // bits
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  put_u32le(out, data_len);
  for (int16_t s : clip.samples) {
    put_u16le(out, static_cast<uint16_t>(s));
  }
  return out;
}

void write_wav_file(const std::filesystem::path& path, const AudioClip& clip) {
  fsutil::atomic_write(path, write_wav(clip));
}

AudioClip make_sine_clip(double freq_hz, double duration_s, double amplitude,
                         int sample_rate_hz) {
  AudioClip clip;
  clip.sample_rate_hz = sample_rate_hz;
  size_t n = static_cast<size_t>(std::llround(duration_s * sample_rate_hz));
  clip.samples.resize(n);
  const double w = 2.0 * M_PI * freq_hz / sample_rate_hz;
  for (size_t i = 0; i < n; ++i) {
    clip.samples[i] =
        static_cast<int16_t>(std::lround(amplitude * 32767.0 * std::sin(w * static_cast<double>(i))));
  }
  clip.duration_s = static_cast<double>(n) / sample_rate_hz;
  return clip;
}

AudioClip make_silence_clip(double duration_s, int sample_rate_hz) {
  AudioClip clip;
  clip.sample_rate_hz = sample_rate_hz;
  clip.samples.assign(static_cast<size_t>(std::llround(duration_s * sample_rate_hz)), 0);
  clip.duration_s = static_cast<double>(clip.samples.size()) / sample_rate_hz;
  return clip;
}

}  // namespace vcass::audio
