// Canonical audio carrier for the pipeline: mono 16-bit PCM WAV. Backends
// returning anything else must be adapted at their client boundary.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace vcass::audio {

constexpr int kPipelineSampleRate = 22050;

struct AudioClip {
  int sample_rate_hz = kPipelineSampleRate;
  int channels = 1;
  int bit_depth = 16;
  std::vector<int16_t> samples;
  double duration_s = 0.0;
  std::string source_instruction_hash;  // digest of the synth request payload

  size_t sample_count() const { return samples.size(); }
};

// Parses a RIFF/WAVE byte buffer and enforces the pipeline contract:
// PCM, mono, 16-bit, self-consistent header. Throws AudioInvalid naming the
// first violated field ("header", "format", "channels", "bit_depth",
// "sample_rate", "block_align", "byte_rate", "data").
AudioClip validate_wav(const std::vector<uint8_t>& bytes);
AudioClip validate_wav_file(const std::filesystem::path& path);

std::vector<uint8_t> write_wav(const AudioClip& clip);
void write_wav_file(const std::filesystem::path& path, const AudioClip& clip);

// 0.0..1.0 amplitude sine tone, used by the deterministic mock synthesizer
// and by test fixtures.
AudioClip make_sine_clip(double freq_hz, double duration_s, double amplitude = 0.4,
                         int sample_rate_hz = kPipelineSampleRate);

AudioClip make_silence_clip(double duration_s, int sample_rate_hz = kPipelineSampleRate);

}  // namespace vcass::audio
