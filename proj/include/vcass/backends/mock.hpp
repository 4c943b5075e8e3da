// Deterministic in-process stand-ins for the four model backends. Every mock
// is a pure function of its request payload, so pipelines running against
// them are bit-reproducible. The formulas below are the mocks' contract;
// tests recompute them independently.
//
//   vlm   : response = canned lookup keyed by sha256(prompt \0 sorted frame
//           hashes joined with ","); unknown keys produce a synthetic
//           four-section report whose items are picked from fixed vocab
//           lists by consecutive key bytes (two per section, deduplicated).
//   llm   : recognizes the step marker line ("TASK: <step>") and answers the
//           labeled-section shape that step requests, derived from the rule
//           table and cue lines serialized into the prompt.
//   tts   : mono 16-bit 22050 Hz sine WAV; frequency = 220 + fnv1a64(payload)
//           % 660 Hz; duration = max(1.0, 0.06 * word_count) seconds where
//           word_count counts whitespace tokens of the segment after the
//           first `Say: "` marker up to the trailing quote (whole payload
//           when the marker is absent).
//   embed : 256-dim bag-of-words; tokens are lowercase alnum runs, bucket =
//           fnv1a64(token) % 256, counts L2-normalized.
//
// Tests may register keyed overrides (golden fixtures, failure injection);
// overrides are process-global and not part of the production surface.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace vcass::backends::mock {

std::string vlm_key(const std::string& prompt, std::vector<std::string> frame_hashes);
std::string vlm_analyze(const std::string& prompt, const std::vector<std::string>& frame_hashes);

std::string llm_key(const std::string& prompt);
std::string llm_complete(const std::string& prompt);

std::vector<uint8_t> tts_synthesize(const std::string& instruction);
// The duration half of the tts formula, exposed so tests can recompute it.
double tts_duration_s(const std::string& instruction);

std::vector<std::vector<double>> embed(const std::vector<std::string>& texts);

// --- test hooks -----------------------------------------------------------
void register_vlm_response(const std::string& key, const std::string& raw);
void register_llm_response(const std::string& key, const std::string& raw);
// Replace the response of the Nth llm call matching a substring (counted
// per registration); used to inject invalid step outputs.
void register_llm_substring_response(const std::string& needle, const std::string& raw,
                                     int times = 1);
void clear_overrides();

// Synthetic vocab used for unknown vlm keys, exposed for oracle tests.
const std::vector<std::string>& vlm_vocab(const std::string& section);

}  // namespace vcass::backends::mock
