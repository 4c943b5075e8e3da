// Stage III: rendered instruction -> audio through the instruct-to-speech
// contract, plus the style-stripped neutral baseline arm.
#pragma once

#include "vcass/backends/clients.hpp"
#include "vcass/common/wav.hpp"
#include "vcass/instruct/builder.hpp"

namespace vcass::synth {

enum class SynthesisMode { kExpressive, kNeutralBaseline };

std::string to_string(SynthesisMode mode);
SynthesisMode mode_from_string(const std::string& s);

// The exact wire payload text for a mode: the rendered instruction in
// expressive mode, the bare transcript in neutral_baseline.
std::string request_payload(const instruct::SpeechInstruction& instruction, SynthesisMode mode);

// Validates the returned WAV (pipeline contract: PCM mono 16-bit) before
// returning; source_instruction_hash is the digest of the request payload.
audio::AudioClip synthesize(const instruct::SpeechInstruction& instruction, SynthesisMode mode,
                            const backends::TtsClient& client);

}  // namespace vcass::synth
