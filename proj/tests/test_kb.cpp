#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "test_util.hpp"
#include "vcass/common/errors.hpp"
#include "vcass/kb/kb.hpp"
#include "vcass/kb/match.hpp"

using namespace vcass;

TEST_CASE("shipped KB loads, covers the four cue families, checksum is stable") {
  auto knowledge = kb::load_kb(testutil::default_kb());
  CHECK(knowledge.rules.size() >= 8);

  std::set<kb::CueCategory> families;
  for (const auto& r : knowledge.rules) families.insert(r.cue_category);
  CHECK(families.count(kb::CueCategory::kColor));
  CHECK(families.count(kb::CueCategory::kLighting));
  CHECK(families.count(kb::CueCategory::kLayout));
  CHECK(families.count(kb::CueCategory::kComposition));

  // the four interview-attested mappings ship with matching states
  auto state_of = [&](const char* id) {
    const kb::MappingRule* r = knowledge.find(id);
    REQUIRE(r != nullptr);
    return r->emotional_state;
  };
  CHECK(state_of("line-smooth-calm") == "calm and peaceful");
  CHECK(state_of("line-straight-nervous") == "nervous");
  CHECK(state_of("light-soft-hope") == "hopeful");
  CHECK(state_of("light-harsh-fear") == "fearful");

  auto again = kb::load_kb(testutil::default_kb());
  CHECK(again.checksum == knowledge.checksum);
}

TEST_CASE("load/serialize round trip is the identity") {
  auto knowledge = kb::load_kb(testutil::default_kb());
  auto reparsed = kb::parse_kb(kb::serialize_kb(knowledge));
  CHECK(reparsed == knowledge);
}

TEST_CASE("validation: duplicate id names the offender") {
  std::string text =
      "id: dup-rule\ncue_category: color\ncue_keywords: red\nemotional_state: hot\ntone: hot\n"
      "\n"
      "id: dup-rule\ncue_category: color\ncue_keywords: blue\nemotional_state: cold\ntone: cold\n";
  try {
    kb::parse_kb(text);
    FAIL("expected KbValidationError");
  } catch (const KbValidationError& e) {
    CHECK(std::string(e.what()).find("dup-rule") != std::string::npos);
  }
}

TEST_CASE("validation: empty keyword and missing fields") {
  CHECK_THROWS_AS(kb::parse_kb("id: r1\ncue_category: color\ncue_keywords: red,,blue\n"
                               "emotional_state: x\ntone: t\n"),
                  KbValidationError);
  CHECK_THROWS_AS(kb::parse_kb("id: r1\ncue_category: color\ncue_keywords: red\ntone: t\n"),
                  KbValidationError);
  CHECK_THROWS_AS(kb::parse_kb("id: r1\ncue_category: nonsense\ncue_keywords: red\n"
                               "emotional_state: x\ntone: t\n"),
                  KbValidationError);
}

TEST_CASE("syntax errors are line-precise") {
  try {
    kb::parse_kb("id: r1\ncue_category: color\nthis line has no colon\n", "bad.kb");
    FAIL("expected KbParseError");
  } catch (const KbParseError& e) {
    CHECK(std::string(e.what()).find("bad.kb:3") != std::string::npos);
  }
}

TEST_CASE("empty KB is valid and matches nothing") {
  auto knowledge = kb::parse_kb("version: 1\n");
  CHECK(knowledge.rules.empty());
  vision::VisualCueReport report;
  report.emotional_tone = {"anything"};
  CHECK(kb::match_cues(knowledge, report).empty());
}

TEST_CASE("caption cues rank their attested rules first") {
  auto knowledge = kb::load_kb(testutil::default_kb());

  auto first_rule = [&](const std::string& cue) {
    auto results = kb::match_cue(knowledge, cue);
    REQUIRE_MESSAGE(!results.empty(), "no match for: ", cue);
    return results.front().rule_id;
  };
  CHECK(first_rule("smooth lines across the horizon") == "line-smooth-calm");
  CHECK(first_rule("harsh light and heavy shadow") == "light-harsh-fear");
  CHECK(first_rule("straight lines") == "line-straight-nervous");
  CHECK(first_rule("soft light and slight shadow") == "light-soft-hope");

  const kb::MappingRule* calm = knowledge.find(first_rule("smooth lines across the horizon"));
  CHECK(calm->emotional_state == "calm and peaceful");
  const kb::MappingRule* fear = knowledge.find(first_rule("harsh light and heavy shadow"));
  CHECK(fear->emotional_state == "fearful");
}

TEST_CASE("empty report yields empty result list") {
  auto knowledge = kb::load_kb(testutil::default_kb());
  CHECK(kb::match_cues(knowledge, vision::VisualCueReport{}).empty());
}

TEST_CASE("every MatchResult is independently verifiable") {
  auto knowledge = kb::load_kb(testutil::default_kb());
  vision::VisualCueReport report;
  report.visual_effects = {"Soft Light and slight shadow over the square"};
  report.color_composition = {"warm golden tones", "muted gray palette"};
  report.environment = {"crowded outdoor square"};
  report.emotional_tone = {"warmth", "calm serenity"};

  auto results = kb::match_cues(knowledge, report);
  REQUIRE(!results.empty());
  for (const auto& m : results) {
    const kb::MappingRule* rule = knowledge.find(m.rule_id);
    REQUIRE(rule != nullptr);
    // matched_keyword is one of the rule's keywords
    CHECK(std::find(rule->cue_keywords.begin(), rule->cue_keywords.end(), m.matched_keyword) !=
          rule->cue_keywords.end());
    // and a case-insensitive substring of the cue
    std::string cue_lower = m.matched_cue;
    std::transform(cue_lower.begin(), cue_lower.end(), cue_lower.begin(), ::tolower);
    CHECK(cue_lower.find(m.matched_keyword) != std::string::npos);
    // score equals the direct keyword count
    int count = 0;
    for (const auto& kw : rule->cue_keywords) {
      if (cue_lower.find(kw) != std::string::npos) ++count;
    }
    CHECK(m.score == count);
  }
}

TEST_CASE("ranking is deterministic: score desc, priority desc, file order") {
  std::string text =
      "id: low-prio\ncue_category: color\ncue_keywords: red, bright\nemotional_state: a\n"
      "tone: a\npriority: 1\n"
      "\n"
      "id: high-prio\ncue_category: color\ncue_keywords: red\nemotional_state: b\n"
      "tone: b\npriority: 9\n"
      "\n"
      "id: two-hits\ncue_category: color\ncue_keywords: red, crimson\nemotional_state: c\n"
      "tone: c\npriority: 0\n";
  auto knowledge = kb::parse_kb(text);
  auto results = kb::match_cue(knowledge, "bright crimson red banner");
  REQUIRE(results.size() == 3);
  CHECK(results[0].rule_id == "low-prio");   // score 2 (red+bright)
  CHECK(results[0].score == 2);
  CHECK(results[1].rule_id == "two-hits");   // score 2, lower priority
  CHECK(results[2].rule_id == "high-prio");  // score 1
}

TEST_CASE("permuting report cues never changes per-cue ranking") {
  auto knowledge = kb::load_kb(testutil::default_kb());
  std::vector<std::string> cues = {"warm golden tones", "harsh light and heavy shadow",
                                   "crowded outdoor square", "smooth lines"};
  std::mt19937 rng(3);
  vision::VisualCueReport base;
  base.emotional_tone = cues;
  auto reference = kb::match_cues(knowledge, base);

  for (int trial = 0; trial < 10; ++trial) {
    std::shuffle(cues.begin(), cues.end(), rng);
    vision::VisualCueReport shuffled;
    shuffled.emotional_tone = cues;
    auto results = kb::match_cues(knowledge, shuffled);
    REQUIRE(results.size() == reference.size());
    // per-cue best rule is permutation-invariant
    for (const auto& cue : cues) {
      auto best_of = [&](const std::vector<kb::MatchResult>& rs) -> std::string {
        for (const auto& r : rs) {
          if (r.matched_cue == cue) return r.rule_id;
        }
        return "";
      };
      CHECK(best_of(results) == best_of(reference));
    }
  }
}

TEST_CASE("match json round trip") {
  auto knowledge = kb::load_kb(testutil::default_kb());
  auto results = kb::match_cue(knowledge, "soft light and slight shadow");
  auto back = kb::matches_from_json(kb::matches_to_json(results));
  REQUIRE(back.size() == results.size());
  for (size_t i = 0; i < results.size(); ++i) {
    CHECK(back[i].rule_id == results[i].rule_id);
    CHECK(back[i].matched_keyword == results[i].matched_keyword);
    CHECK(back[i].matched_cue == results[i].matched_cue);
    CHECK(back[i].score == results[i].score);
  }
}
