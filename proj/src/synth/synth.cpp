#include "vcass/synth/synth.hpp"

#include "vcass/common/digest.hpp"
#include "vcass/common/errors.hpp"

namespace vcass::synth {

std::string to_string(SynthesisMode mode) {
  return mode == SynthesisMode::kExpressive ? "expressive" : "neutral_baseline";
}

SynthesisMode mode_from_string(const std::string& s) {
  if (s == "expressive") return SynthesisMode::kExpressive;
  if (s == "neutral_baseline" || s == "neutral") return SynthesisMode::kNeutralBaseline;
  throw ConfigError("unknown synthesis mode '" + s + "'");
}

std::string request_payload(const instruct::SpeechInstruction& instruction, SynthesisMode mode) {
  if (mode == SynthesisMode::kNeutralBaseline) {
    return instruction.transcript.text;
  }
  return instruction.rendered_instruction;
}

audio::AudioClip synthesize(const instruct::SpeechInstruction& instruction, SynthesisMode mode,
                            const backends::TtsClient& client) {
  instruction.validate();
  const std::string payload = request_payload(instruction, mode);
  auto wav_bytes = client.synthesize(payload);
  audio::AudioClip clip = audio::validate_wav(wav_bytes);
  clip.source_instruction_hash = digest::sha256_hex(payload);
  return clip;
}

}  // namespace vcass::synth
