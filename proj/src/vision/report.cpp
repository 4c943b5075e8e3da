#include "vcass/vision/report.hpp"

#include <json.hpp>

#include "vcass/common/errors.hpp"
#include "vcass/common/sections.hpp"

namespace vcass::vision {

using nlohmann::json;

std::vector<std::string> VisualCueReport::all_cues() const {
  std::vector<std::string> out;
  out.insert(out.end(), visual_effects.begin(), visual_effects.end());
  out.insert(out.end(), color_composition.begin(), color_composition.end());
  out.insert(out.end(), environment.begin(), environment.end());
  out.insert(out.end(), emotional_tone.begin(), emotional_tone.end());
  return out;
}

bool VisualCueReport::structured_empty() const {
  return visual_effects.empty() && color_composition.empty() && environment.empty() &&
         emotional_tone.empty();
}

const std::vector<std::string>& report_section_labels() {
  static const std::vector<std::string> kLabels = {"visual_effects", "color_composition",
                                                   "environment", "emotional_tone"};
  return kLabels;
}

VisualCueReport parse_report(const std::string& raw) {
  if (raw.empty()) throw ParseFailure("vision response body is empty");
  auto parsed = sections::parse(raw, report_section_labels());
  if (!parsed.any_label_seen) {
    throw ParseFailure("vision response has no recognizable section labels; raw: " + raw);
  }
  VisualCueReport report;
  report.visual_effects = parsed.by_label["visual_effects"];
  report.color_composition = parsed.by_label["color_composition"];
  report.environment = parsed.by_label["environment"];
  report.emotional_tone = parsed.by_label["emotional_tone"];
  report.raw_response = raw;
  return report;
}

std::string serialize_report_sections(const VisualCueReport& report) {
  return sections::render({
      {"visual_effects", report.visual_effects},
      {"color_composition", report.color_composition},
      {"environment", report.environment},
      {"emotional_tone", report.emotional_tone},
  });
}

std::string VisualCueReport::to_json() const {
  json doc = {
      {"visual_effects", visual_effects},
      {"color_composition", color_composition},
      {"environment", environment},
      {"emotional_tone", emotional_tone},
      {"raw_response", raw_response},
      {"source_hashes", source_hashes},
  };
  return doc.dump(2);
}

VisualCueReport VisualCueReport::from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseFailure(std::string("report JSON: ") + e.what());
  }
  VisualCueReport report;
  try {
    report.visual_effects = doc.at("visual_effects").get<std::vector<std::string>>();
    report.color_composition = doc.at("color_composition").get<std::vector<std::string>>();
    report.environment = doc.at("environment").get<std::vector<std::string>>();
    report.emotional_tone = doc.at("emotional_tone").get<std::vector<std::string>>();
    report.raw_response = doc.at("raw_response").get<std::string>();
    report.source_hashes = doc.at("source_hashes").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw ParseFailure(std::string("report JSON missing field: ") + e.what());
  }
  return report;
}

}  // namespace vcass::vision
