#include "vcass/eval/metrics.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "vcass/common/errors.hpp"
#include "vcass/common/sections.hpp"

namespace vcass::eval {

std::string to_string(Intent v) { return v == Intent::kPositive ? "positive" : "negative"; }
std::string to_string(Tendency v) { return v == Tendency::kPositive ? "positive" : "negative"; }

std::string to_string(Condition v) {
  switch (v) {
    case Condition::kNeutral: return "neutral";
    case Condition::kAligned: return "aligned";
    case Condition::kContradictory: return "contradictory";
  }
  return "neutral";
}

Condition condition_from_string(const std::string& s) {
  std::string l = sections::to_lower(s);
  if (l == "neutral") return Condition::kNeutral;
  if (l == "aligned") return Condition::kAligned;
  if (l == "contradictory") return Condition::kContradictory;
  throw ConfigError("unknown condition '" + s + "'");
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(sections::trim(field));
  return out;
}

Intent intent_from_string(const std::string& s, const std::string& where) {
  std::string l = sections::to_lower(s);
  if (l == "positive") return Intent::kPositive;
  if (l == "negative") return Intent::kNegative;
  throw ConfigError("unknown intent '" + s + "' at " + where);
}

Tendency tendency_from_string(const std::string& s, const std::string& where) {
  std::string l = sections::to_lower(s);
  if (l == "positive") return Tendency::kPositive;
  if (l == "negative") return Tendency::kNegative;
  throw ConfigError("unknown judged_tendency '" + s + "' at " + where);
}

}  // namespace

std::vector<RatingRecord> load_rating_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFound(path.string());

  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty rating file " + path.string());
  auto header = split_csv_line(line);
  const std::vector<std::string> expected = {"video_id", "participant_id", "condition", "intent",
                                             "judged_tendency"};
  if (header != expected) {
    throw ConfigError("rating file header must be video_id,participant_id,condition,intent,"
                      "judged_tendency");
  }

  std::vector<RatingRecord> records;
  std::set<std::string> seen;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (sections::trim(line).empty()) continue;
    auto fields = split_csv_line(line);
    std::string where = path.filename().string() + ":" + std::to_string(line_no);
    if (fields.size() != 5) throw ConfigError("expected 5 columns at " + where);
    RatingRecord r;
    r.video_id = fields[0];
    r.participant_id = fields[1];
    r.condition = condition_from_string(fields[2]);
    r.intent = intent_from_string(fields[3], where);
    r.judged_tendency = tendency_from_string(fields[4], where);
    std::string key = r.video_id + "\x1f" + r.participant_id + "\x1f" + to_string(r.condition);
    if (!seen.insert(key).second) {
      throw ConfigError("duplicate (video_id, participant_id, condition) at " + where);
    }
    records.push_back(std::move(r));
  }
  return records;
}

TendencyTable tendency_table(const std::vector<RatingRecord>& records, Condition condition) {
  int64_t pos_total = 0, pos_pos = 0, neg_total = 0, neg_pos = 0;
  for (const auto& r : records) {
    if (r.condition != condition) continue;
    if (r.intent == Intent::kPositive) {
      ++pos_total;
      if (r.judged_tendency == Tendency::kPositive) ++pos_pos;
    } else {
      ++neg_total;
      if (r.judged_tendency == Tendency::kPositive) ++neg_pos;
    }
  }
  if (pos_total == 0 || neg_total == 0) {
    throw MissingIntentGroup("condition " + to_string(condition) + " lacks " +
                             (pos_total == 0 ? "positive" : "negative") + "-intent records");
  }

  TendencyTable t;
  t.positive_intent_count = pos_total;
  t.negative_intent_count = neg_total;
  t.ppt = static_cast<double>(pos_pos) / static_cast<double>(pos_total);
  t.pnt = 1.0 - t.ppt;
  t.npt = static_cast<double>(neg_pos) / static_cast<double>(neg_total);
  t.nnt = 1.0 - t.npt;
  // (PPT + NNT)/2 when PI = NI; size-weighted otherwise
  t.consistent = (t.ppt * static_cast<double>(pos_total) + t.nnt * static_cast<double>(neg_total)) /
                 static_cast<double>(pos_total + neg_total);
  t.inconsistent = 1.0 - t.consistent;
  return t;
}

TendencyTable tendency_from_proportions(double ppt, double nnt, Condition condition,
                                        int64_t scale) {
  if (ppt < 0 || ppt > 1 || nnt < 0 || nnt > 1) {
    throw OutOfRange("proportions must lie in [0,1]");
  }
  auto judged_pos = [](double p, int64_t n) {
    return static_cast<int64_t>(std::llround(p * static_cast<double>(n)));
  };
  std::vector<RatingRecord> records;
  records.reserve(static_cast<size_t>(2 * scale));
  int64_t pos_pos = judged_pos(ppt, scale);
  int64_t neg_neg = judged_pos(nnt, scale);
  for (int64_t i = 0; i < scale; ++i) {
    RatingRecord pos{"v-pos", "p" + std::to_string(i), Intent::kPositive,
                     i < pos_pos ? Tendency::kPositive : Tendency::kNegative, condition};
    RatingRecord neg{"v-neg", "p" + std::to_string(i), Intent::kNegative,
                     i < neg_neg ? Tendency::kNegative : Tendency::kPositive, condition};
    records.push_back(std::move(pos));
    records.push_back(std::move(neg));
  }
  return tendency_table(records, condition);
}

std::optional<PleasureCategory> categorize_pleasure(double raw, double neutral_band) {
  if (raw < -1.0 || raw > 1.0 || std::isnan(raw)) {
    throw OutOfRange("pleasure raw value " + std::to_string(raw) + " outside [-1,1]");
  }
  if (neutral_band < 0.0 || neutral_band >= 1.0) {
    throw OutOfRange("neutral_band " + std::to_string(neutral_band) + " outside [0,1)");
  }
  if (raw > neutral_band) return PleasureCategory::kPositive;
  if (raw < -neutral_band) return PleasureCategory::kNegative;
  return std::nullopt;
}

std::vector<PreferenceChoice> load_preference_choices(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFound(path.string());

  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty choices file " + path.string());
  if (split_csv_line(line) != std::vector<std::string>{"participant_id", "video_id", "chosen"}) {
    throw ConfigError("choices file header must be participant_id,video_id,chosen");
  }

  std::vector<PreferenceChoice> out;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (sections::trim(line).empty()) continue;
    auto fields = split_csv_line(line);
    std::string where = path.filename().string() + ":" + std::to_string(line_no);
    if (fields.size() != 3) throw ConfigError("expected 3 columns at " + where);
    PreferenceChoice c;
    c.participant_id = fields[0];
    c.video_id = fields[1];
    std::string chosen = sections::to_lower(fields[2]);
    if (chosen == "expressive") c.chose_expressive = true;
    else if (chosen == "neutral") c.chose_expressive = false;
    else throw ConfigError("chosen must be expressive|neutral at " + where);
    out.push_back(std::move(c));
  }
  return out;
}

double PreferenceRate::fraction() const {
  return total > 0 ? static_cast<double>(expressive) / static_cast<double>(total) : 0.0;
}

double PreferenceRate::percent_rounded() const {
  if (total <= 0) return 0.0;
  // exact integer arithmetic: floor(10000*e/t + 1/2) / 100
  int64_t hundredths = (20000 * expressive + total) / (2 * total);
  return static_cast<double>(hundredths) / 100.0;
}

PreferenceRate preference_rate(const std::vector<PreferenceChoice>& choices) {
  if (choices.empty()) throw ConfigError("preference_rate requires at least one choice");
  PreferenceRate r;
  r.total = static_cast<int64_t>(choices.size());
  for (const auto& c : choices) {
    if (c.chose_expressive) ++r.expressive;
  }
  return r;
}

double round_half_up(double value, int decimals) {
  double scale = std::pow(10.0, decimals);
  return std::floor(value * scale + 0.5) / scale;
}

}  // namespace vcass::eval
