// Structured vision analysis output: what the backend said, split into the
// four cue families the downstream mapping consumes. The parser only ever
// surfaces text present in the raw response; it never invents cues.
#pragma once

#include <string>
#include <vector>

namespace vcass::vision {

struct VisualCueReport {
  std::vector<std::string> visual_effects;
  std::vector<std::string> color_composition;
  std::vector<std::string> environment;
  std::vector<std::string> emotional_tone;
  std::string raw_response;
  std::vector<std::string> source_hashes;

  std::vector<std::string> all_cues() const;
  bool structured_empty() const;

  std::string to_json() const;
  static VisualCueReport from_json(const std::string& text);

  bool operator==(const VisualCueReport&) const = default;
};

// The response contract's section labels, in taxonomy order.
const std::vector<std::string>& report_section_labels();

// Parses labeled-section raw text. Throws ParseFailure when raw is empty or
// carries none of the known labels (raw preserved in the error message).
VisualCueReport parse_report(const std::string& raw);

// Canonical labeled-section rendering of the structured fields; parse_report
// recovers them exactly.
std::string serialize_report_sections(const VisualCueReport& report);

}  // namespace vcass::vision
