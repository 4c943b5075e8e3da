// Study measurement machinery: intent/tendency consistency rates, PAD
// pleasure categorization, and preference rates over rating-record files.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace vcass::eval {

enum class Intent { kPositive, kNegative };
enum class Tendency { kPositive, kNegative };
enum class Condition { kNeutral, kAligned, kContradictory };

std::string to_string(Intent v);
std::string to_string(Tendency v);
std::string to_string(Condition v);
Condition condition_from_string(const std::string& s);

struct RatingRecord {
  std::string video_id;
  std::string participant_id;
  Intent intent = Intent::kPositive;           // ground-truth video intent
  Tendency judged_tendency = Tendency::kPositive;
  Condition condition = Condition::kNeutral;
};

// CSV with header `video_id,participant_id,condition,intent,judged_tendency`;
// rejects duplicate (video_id, participant_id, condition) triples with a
// line-precise error.
std::vector<RatingRecord> load_rating_records(const std::filesystem::path& path);

struct TendencyTable {
  double ppt = 0, pnt = 0;  // P(judged pos|neg | intent positive)
  double npt = 0, nnt = 0;  // P(judged pos|neg | intent negative)
  double consistent = 0, inconsistent = 0;
  int64_t positive_intent_count = 0;
  int64_t negative_intent_count = 0;
};

// Conditions records on `condition`, then on intent. Consistency is
// (ppt+nnt)/2 for balanced intent groups and size-weighted otherwise.
// Throws MissingIntentGroup when either intent is absent.
TendencyTable tendency_table(const std::vector<RatingRecord>& records, Condition condition);

// Builds a balanced synthetic record set realizing the given conditional
// proportions at `scale` records per intent group, then evaluates it. This
// is how published row proportions are fed through the real computation.
TendencyTable tendency_from_proportions(double ppt, double nnt, Condition condition,
                                        int64_t scale = 10000);

enum class PleasureCategory { kPositive, kNegative };

// raw in [-1,1]; values inside the neutral band are excluded (nullopt),
// never silently binned. Throws OutOfRange.
std::optional<PleasureCategory> categorize_pleasure(double raw, double neutral_band);

struct PreferenceChoice {
  std::string participant_id;
  std::string video_id;
  bool chose_expressive = false;
};

std::vector<PreferenceChoice> load_preference_choices(const std::filesystem::path& path);

struct PreferenceRate {
  int64_t expressive = 0;
  int64_t total = 0;
  double fraction() const;
  // exact rational percentage, rounded half-up to 2 decimals
  double percent_rounded() const;
};

PreferenceRate preference_rate(const std::vector<PreferenceChoice>& choices);

// round-half-up to `decimals` places
double round_half_up(double value, int decimals);

}  // namespace vcass::eval
