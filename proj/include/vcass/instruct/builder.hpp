// Stage II: classify -> map-emotion -> compose over the LLM backend, with
// the KB match table serialized into the prompts. Produces the structured
// speech instruction plus the full intermediate trace.
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vcass/backends/clients.hpp"
#include "vcass/instruct/transcript.hpp"
#include "vcass/kb/match.hpp"
#include "vcass/kb/vocal_style.hpp"
#include "vcass/vision/prompt.hpp"
#include "vcass/vision/report.hpp"

namespace vcass::instruct {

// Tag used in the trace when the model asserts an emotional state without a
// supporting KB rule.
inline constexpr const char* kLlmInferredTag = "llm-inferred";

struct EmotionalState {
  std::string state;
  std::vector<std::string> rule_ids;  // rule ids from the match table, or the tag above

  bool operator==(const EmotionalState&) const = default;
};

struct CotTrace {
  std::vector<std::pair<std::string, std::string>> step1_classified_cues;  // (cue, category)
  std::vector<EmotionalState> step2_emotional_states;
  std::string step3_raw;  // verbatim final backend output
  int backend_calls = 0;  // 3 chained / 1 single-shot, +1 per repair retry

  std::string trace_id() const;  // digest of the serialized content
  std::string to_json() const;
  static CotTrace from_json(const std::string& text);

  bool operator==(const CotTrace&) const = default;
};

struct SpeechInstruction {
  Transcript transcript;
  kb::VocalStyle style_directives;
  std::string emotional_summary;      // one sentence, may be empty
  std::string rendered_instruction;   // contains transcript.text verbatim
  std::string trace_ref;

  // Throws InstructionInvalid when the rendered text does not embed the
  // transcript or no style field is set.
  void validate() const;

  std::string to_json() const;
  static SpeechInstruction from_json(const std::string& text);

  bool operator==(const SpeechInstruction&) const = default;
};

struct CotPrompts {
  vision::PromptTemplate classify;
  vision::PromptTemplate map_emotion;
  vision::PromptTemplate compose;
  std::optional<vision::PromptTemplate> single_shot;
};

struct BuildOptions {
  bool single_shot = false;
};

// Deterministic template fill:
//   "<style sentence>. <summary> Say: \"<transcript text>\""
// A fully-unset style renders the declared neutral sentence.
std::string render_instruction(const kb::VocalStyle& style, const std::string& summary,
                               const Transcript& transcript);

// The degenerate Stage-II product: neutral style, no summary, no trace.
// Backs the neutral-baseline pipeline arm, which skips the model stages.
SpeechInstruction neutral_instruction(const Transcript& transcript);

// The style sentence alone (exposed for payload checks).
std::string style_sentence(const kb::VocalStyle& style);

// `knowledge` supplies the rule rows behind the matches; the distinct
// matched rules are serialized into the step prompts as a compact table.
std::pair<SpeechInstruction, CotTrace> build_instruction(
    const vision::VisualCueReport& report, const std::vector<kb::MatchResult>& matches,
    const kb::KnowledgeBase& knowledge, const Transcript& transcript, const CotPrompts& prompts,
    const backends::LlmClient& client, const BuildOptions& options = {});

}  // namespace vcass::instruct
