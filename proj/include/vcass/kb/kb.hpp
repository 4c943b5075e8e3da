// The expert visual-to-vocal mapping knowledge, stored as a line-oriented
// text format meant to stay hand-editable and diffable:
//
//   version: 1
//
//   id: line-smooth-calm
//   cue_category: line
//   cue_keywords: smooth line, flowing line
//   emotional_state: calm and peaceful
//   tone: gentle
//   pitch: low, soothing
//   rhythm_pace: slow, unhurried
//   volume: soft
//   priority: 10
//   provenance: expert-interview
//
// Records are separated by blank lines; `#` starts a comment line. Rule
// order in the file is semantic (it is the last tie-breaker in matching).
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "vcass/kb/vocal_style.hpp"

namespace vcass::kb {

enum class CueCategory { kColor, kLighting, kLine, kLayout, kComposition, kCamera, kOther };

std::string to_string(CueCategory c);
CueCategory cue_category_from_string(const std::string& s);

struct MappingRule {
  std::string id;
  CueCategory cue_category = CueCategory::kOther;
  std::vector<std::string> cue_keywords;  // lowercase, trimmed, non-empty
  std::string emotional_state;
  VocalStyle vocal_expression;
  int priority = 0;
  std::string provenance;

  bool operator==(const MappingRule&) const = default;
};

struct KnowledgeBase {
  std::vector<MappingRule> rules;
  std::string version;
  std::string checksum;  // sha256 of the canonical serialization

  const MappingRule* find(const std::string& id) const;
  bool operator==(const KnowledgeBase&) const = default;
};

// Throws KbParseError (syntax, with line number) or KbValidationError
// (duplicate id, empty keywords, unknown enum value).
KnowledgeBase load_kb(const std::filesystem::path& path);
KnowledgeBase parse_kb(const std::string& text, const std::string& origin = "<memory>");

// Canonical text rendering; load(parse(serialize(kb))) is the identity.
std::string serialize_kb(const KnowledgeBase& kb);

}  // namespace vcass::kb
