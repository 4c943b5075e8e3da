// Deterministic cue-to-rule matching: case-insensitive keyword substring
// search, ranked by (score desc, priority desc, rule file order, cue order).
#pragma once

#include <string>
#include <vector>

#include "vcass/kb/kb.hpp"
#include "vcass/vision/report.hpp"

namespace vcass::kb {

struct MatchResult {
  std::string rule_id;
  std::string matched_keyword;  // first keyword (in rule order) found in the cue
  std::string matched_cue;
  int score = 0;  // number of this rule's keywords found in the cue
};

std::vector<MatchResult> match_cues(const KnowledgeBase& kb,
                                    const vision::VisualCueReport& report);

// Single-cue variant backing `vcass kb query`.
std::vector<MatchResult> match_cue(const KnowledgeBase& kb, const std::string& cue);

std::string matches_to_json(const std::vector<MatchResult>& matches);
std::vector<MatchResult> matches_from_json(const std::string& text);

}  // namespace vcass::kb
