#include "vcass/kb/match.hpp"

#include <algorithm>

#include <json.hpp>

#include "vcass/common/errors.hpp"
#include "vcass/common/sections.hpp"

namespace vcass::kb {

using nlohmann::json;

namespace {

struct Ranked {
  MatchResult result;
  int priority;
  size_t rule_order;
  size_t cue_order;
};

void match_one(const KnowledgeBase& kb, const std::string& cue, size_t cue_order,
               std::vector<Ranked>& out) {
  std::string cue_lower = sections::to_lower(cue);
  for (size_t r = 0; r < kb.rules.size(); ++r) {
    const auto& rule = kb.rules[r];
    int score = 0;
    std::string first_keyword;
    for (const auto& kw : rule.cue_keywords) {
      if (cue_lower.find(kw) != std::string::npos) {
        ++score;
        if (first_keyword.empty()) first_keyword = kw;
      }
    }
    if (score > 0) {
      out.push_back({{rule.id, first_keyword, cue, score}, rule.priority, r, cue_order});
    }
  }
}

std::vector<MatchResult> finish(std::vector<Ranked>& ranked) {
  std::stable_sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    if (a.result.score != b.result.score) return a.result.score > b.result.score;
    if (a.priority != b.priority) return a.priority > b.priority;
    if (a.rule_order != b.rule_order) return a.rule_order < b.rule_order;
    return a.cue_order < b.cue_order;
  });
  std::vector<MatchResult> out;
  out.reserve(ranked.size());
  for (auto& r : ranked) out.push_back(std::move(r.result));
  return out;
}

}  // namespace

std::vector<MatchResult> match_cues(const KnowledgeBase& kb,
                                    const vision::VisualCueReport& report) {
  std::vector<Ranked> ranked;
  auto cues = report.all_cues();
  for (size_t c = 0; c < cues.size(); ++c) {
    match_one(kb, cues[c], c, ranked);
  }
  return finish(ranked);
}

std::vector<MatchResult> match_cue(const KnowledgeBase& kb, const std::string& cue) {
  std::vector<Ranked> ranked;
  match_one(kb, cue, 0, ranked);
  return finish(ranked);
}

std::string matches_to_json(const std::vector<MatchResult>& matches) {
  json arr = json::array();
  for (const auto& m : matches) {
    arr.push_back({{"rule_id", m.rule_id},
                   {"matched_keyword", m.matched_keyword},
                   {"matched_cue", m.matched_cue},
                   {"score", m.score}});
  }
  return arr.dump(2);
}

std::vector<MatchResult> matches_from_json(const std::string& text) {
  json arr;
  try {
    arr = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseFailure(std::string("matches JSON: ") + e.what());
  }
  std::vector<MatchResult> out;
  for (const auto& item : arr) {
    MatchResult m;
    m.rule_id = item.at("rule_id").get<std::string>();
    m.matched_keyword = item.at("matched_keyword").get<std::string>();
    m.matched_cue = item.at("matched_cue").get<std::string>();
    m.score = item.at("score").get<int>();
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace vcass::kb
