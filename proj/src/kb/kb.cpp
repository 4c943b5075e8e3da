#include "vcass/kb/kb.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "vcass/common/digest.hpp"
#include "vcass/common/errors.hpp"
#include "vcass/common/fsutil.hpp"
#include "vcass/common/sections.hpp"

namespace vcass::kb {

std::string to_string(CueCategory c) {
  switch (c) {
    case CueCategory::kColor: return "color";
    case CueCategory::kLighting: return "lighting";
    case CueCategory::kLine: return "line";
    case CueCategory::kLayout: return "layout";
    case CueCategory::kComposition: return "composition";
    case CueCategory::kCamera: return "camera";
    case CueCategory::kOther: return "other";
  }
  return "other";
}

CueCategory cue_category_from_string(const std::string& s) {
  std::string l = sections::to_lower(s);
  if (l == "color") return CueCategory::kColor;
  if (l == "lighting") return CueCategory::kLighting;
  if (l == "line") return CueCategory::kLine;
  if (l == "layout") return CueCategory::kLayout;
  if (l == "composition") return CueCategory::kComposition;
  if (l == "camera") return CueCategory::kCamera;
  if (l == "other") return CueCategory::kOther;
  throw ConfigError("unknown cue_category '" + s + "'");
}

const MappingRule* KnowledgeBase::find(const std::string& id) const {
  for (const auto& r : rules) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

namespace {

struct RawField {
  std::string key;
  std::string value;
  int line_no;
};

std::string where(const std::string& origin, int line_no) {
  return origin + ":" + std::to_string(line_no);
}

MappingRule build_rule(const std::vector<RawField>& fields, const std::string& origin) {
  MappingRule rule;
  int first_line = fields.front().line_no;
  bool has_category = false;
  for (const auto& f : fields) {
    try {
      if (f.key == "id") {
        rule.id = f.value;
      } else if (f.key == "cue_category") {
        rule.cue_category = cue_category_from_string(f.value);
        has_category = true;
      } else if (f.key == "cue_keywords") {
        std::istringstream in(f.value);
        std::string kw;
        while (std::getline(in, kw, ',')) {
          std::string t = sections::to_lower(sections::trim(kw));
          if (t.empty()) {
            throw KbValidationError("rule '" + rule.id + "' has an empty keyword at " +
                                    where(origin, f.line_no));
          }
          rule.cue_keywords.push_back(t);
        }
      } else if (f.key == "emotional_state") {
        rule.emotional_state = f.value;
      } else if (f.key == "tone") {
        rule.vocal_expression.tone = f.value;
      } else if (f.key == "pitch") {
        rule.vocal_expression.set_pitch(f.value);
      } else if (f.key == "rhythm_pace") {
        rule.vocal_expression.set_pace(f.value);
      } else if (f.key == "volume") {
        rule.vocal_expression.set_volume(f.value);
      } else if (f.key == "priority") {
        rule.priority = std::stoi(f.value);
      } else if (f.key == "provenance") {
        rule.provenance = f.value;
      } else {
        throw KbParseError("unknown field '" + f.key + "' at " + where(origin, f.line_no));
      }
    } catch (const ConfigError& e) {
      throw KbValidationError(std::string(e.what()) + " at " + where(origin, f.line_no));
    } catch (const std::invalid_argument&) {
      throw KbParseError("non-numeric value for '" + f.key + "' at " +
                         where(origin, f.line_no));
    }
  }
  if (rule.id.empty()) {
    throw KbValidationError("rule starting at " + where(origin, first_line) + " has no id");
  }
  if (!has_category) {
    throw KbValidationError("rule '" + rule.id + "' has no cue_category");
  }
  if (rule.cue_keywords.empty()) {
    throw KbValidationError("rule '" + rule.id + "' has no cue_keywords");
  }
  if (rule.emotional_state.empty()) {
    throw KbValidationError("rule '" + rule.id + "' has no emotional_state");
  }
  if (!rule.vocal_expression.any_set()) {
    throw KbValidationError("rule '" + rule.id + "' sets no vocal expression field");
  }
  return rule;
}

}  // namespace

KnowledgeBase parse_kb(const std::string& text, const std::string& origin) {
  KnowledgeBase kb;
  std::vector<RawField> pending;
  bool pending_is_header = false;

  auto flush = [&] {
    if (pending.empty()) return;
    if (pending_is_header) {
      for (const auto& f : pending) {
        if (f.key == "version") {
          kb.version = f.value;
        } else {
          throw KbParseError("unexpected header field '" + f.key + "' at " +
                             where(origin, f.line_no));
        }
      }
    } else {
      kb.rules.push_back(build_rule(pending, origin));
    }
    pending.clear();
    pending_is_header = false;
  };

  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string stripped = sections::trim(line);
    if (stripped.empty()) {
      flush();
      continue;
    }
    if (stripped[0] == '#') continue;
    size_t colon = stripped.find(':');
    if (colon == std::string::npos) {
      throw KbParseError("expected 'key: value' at " + where(origin, line_no));
    }
    RawField f;
    f.key = sections::to_lower(sections::trim(stripped.substr(0, colon)));
    f.value = sections::trim(stripped.substr(colon + 1));
    f.line_no = line_no;
    if (pending.empty() && f.key == "version") pending_is_header = true;
    pending.push_back(std::move(f));
  }
  flush();
  if (kb.version.empty()) kb.version = "1";

  std::set<std::string> ids;
  for (const auto& r : kb.rules) {
    if (!ids.insert(r.id).second) {
      throw KbValidationError("duplicate rule id '" + r.id + "'");
    }
  }
  kb.checksum = digest::sha256_hex(serialize_kb(kb));
  return kb;
}

KnowledgeBase load_kb(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw FileNotFound(path.string());
  return parse_kb(fsutil::read_text_file(path), path.filename().string());
}

std::string serialize_kb(const KnowledgeBase& kb) {
  std::ostringstream out;
  out << "version: " << kb.version << "\n";
  for (const auto& r : kb.rules) {
    out << "\n";
    out << "id: " << r.id << "\n";
    out << "cue_category: " << to_string(r.cue_category) << "\n";
    out << "cue_keywords: ";
    for (size_t i = 0; i < r.cue_keywords.size(); ++i) {
      if (i) out << ", ";
      out << r.cue_keywords[i];
    }
    out << "\n";
    out << "emotional_state: " << r.emotional_state << "\n";
    if (!r.vocal_expression.tone.empty()) out << "tone: " << r.vocal_expression.tone << "\n";
    if (!r.vocal_expression.pitch_text().empty()) {
      out << "pitch: " << r.vocal_expression.pitch_text() << "\n";
    }
    if (!r.vocal_expression.pace_text().empty()) {
      out << "rhythm_pace: " << r.vocal_expression.pace_text() << "\n";
    }
    if (!r.vocal_expression.volume_text().empty()) {
      out << "volume: " << r.vocal_expression.volume_text() << "\n";
    }
    out << "priority: " << r.priority << "\n";
    if (!r.provenance.empty()) out << "provenance: " << r.provenance << "\n";
  }
  return out.str();
}

}  // namespace vcass::kb
