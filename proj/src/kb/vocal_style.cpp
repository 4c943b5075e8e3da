#include "vcass/kb/vocal_style.hpp"

#include "vcass/common/errors.hpp"
#include "vcass/common/sections.hpp"

namespace vcass::kb {

namespace {

// splits "level, qualifier" -> {level, qualifier}
std::pair<std::string, std::string> split_level(const std::string& text) {
  size_t comma = text.find(',');
  if (comma == std::string::npos) return {sections::trim(text), ""};
  return {sections::trim(text.substr(0, comma)), sections::trim(text.substr(comma + 1))};
}

std::string join_level(const std::string& level, const std::string& qualifier) {
  if (level.empty()) return "";
  return qualifier.empty() ? level : level + ", " + qualifier;
}

}  // namespace

std::string to_string(PitchLevel level) {
  switch (level) {
    case PitchLevel::kLow: return "low";
    case PitchLevel::kMid: return "mid";
    case PitchLevel::kHigh: return "high";
    default: return "";
  }
}

std::string to_string(PaceLevel level) {
  switch (level) {
    case PaceLevel::kSlow: return "slow";
    case PaceLevel::kModerate: return "moderate";
    case PaceLevel::kFast: return "fast";
    default: return "";
  }
}

std::string to_string(VolumeLevel level) {
  switch (level) {
    case VolumeLevel::kSoft: return "soft";
    case VolumeLevel::kNormal: return "normal";
    case VolumeLevel::kLoud: return "loud";
    default: return "";
  }
}

bool VocalStyle::any_set() const {
  return !tone.empty() || pitch != PitchLevel::kUnset || rhythm_pace != PaceLevel::kUnset ||
         volume != VolumeLevel::kUnset;
}

VocalStyle VocalStyle::neutral() {
  VocalStyle s;
  s.tone = "neutral, even";
  return s;
}

bool VocalStyle::is_neutral() const { return *this == neutral(); }

void VocalStyle::set_pitch(const std::string& text) {
  auto [level, qual] = split_level(text);
  if (level.empty()) {
    pitch = PitchLevel::kUnset;
    pitch_qualifier.clear();
    return;
  }
  std::string l = sections::to_lower(level);
  if (l == "low") pitch = PitchLevel::kLow;
  else if (l == "mid") pitch = PitchLevel::kMid;
  else if (l == "high") pitch = PitchLevel::kHigh;
  else throw ConfigError("unknown pitch level '" + level + "'");
  pitch_qualifier = qual;
}

void VocalStyle::set_pace(const std::string& text) {
  auto [level, qual] = split_level(text);
  if (level.empty()) {
    rhythm_pace = PaceLevel::kUnset;
    pace_qualifier.clear();
    return;
  }
  std::string l = sections::to_lower(level);
  if (l == "slow") rhythm_pace = PaceLevel::kSlow;
  else if (l == "moderate") rhythm_pace = PaceLevel::kModerate;
  else if (l == "fast") rhythm_pace = PaceLevel::kFast;
  else throw ConfigError("unknown rhythm_pace level '" + level + "'");
  pace_qualifier = qual;
}

void VocalStyle::set_volume(const std::string& text) {
  auto [level, qual] = split_level(text);
  if (level.empty()) {
    volume = VolumeLevel::kUnset;
    volume_qualifier.clear();
    return;
  }
  std::string l = sections::to_lower(level);
  if (l == "soft") volume = VolumeLevel::kSoft;
  else if (l == "normal") volume = VolumeLevel::kNormal;
  else if (l == "loud") volume = VolumeLevel::kLoud;
  else throw ConfigError("unknown volume level '" + level + "'");
  volume_qualifier = qual;
}

std::string VocalStyle::pitch_text() const { return join_level(to_string(pitch), pitch_qualifier); }
std::string VocalStyle::pace_text() const { return join_level(to_string(rhythm_pace), pace_qualifier); }
std::string VocalStyle::volume_text() const { return join_level(to_string(volume), volume_qualifier); }

}  // namespace vcass::kb
