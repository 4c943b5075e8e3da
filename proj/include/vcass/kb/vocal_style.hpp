// Vocal expression vocabulary: tone is free text, the other three dimensions
// are a coarse level plus an optional free-text qualifier ("low, soothing").
#pragma once

#include <string>

namespace vcass::kb {

enum class PitchLevel { kUnset, kLow, kMid, kHigh };
enum class PaceLevel { kUnset, kSlow, kModerate, kFast };
enum class VolumeLevel { kUnset, kSoft, kNormal, kLoud };

std::string to_string(PitchLevel level);
std::string to_string(PaceLevel level);
std::string to_string(VolumeLevel level);

struct VocalStyle {
  std::string tone;  // "" = unset
  PitchLevel pitch = PitchLevel::kUnset;
  std::string pitch_qualifier;
  PaceLevel rhythm_pace = PaceLevel::kUnset;
  std::string pace_qualifier;
  VolumeLevel volume = VolumeLevel::kUnset;
  std::string volume_qualifier;

  bool any_set() const;
  bool is_neutral() const;
  static VocalStyle neutral();

  // "level[, qualifier]" <-> fields. Parsers throw ConfigError on unknown
  // levels; empty input leaves the dimension unset.
  void set_pitch(const std::string& text);
  void set_pace(const std::string& text);
  void set_volume(const std::string& text);
  std::string pitch_text() const;
  std::string pace_text() const;
  std::string volume_text() const;

  bool operator==(const VocalStyle&) const = default;
};

}  // namespace vcass::kb
