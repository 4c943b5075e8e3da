#include <doctest.h>

#include <algorithm>
#include <random>

#include "test_util.hpp"
#include "vcass/backends/clients.hpp"
#include "vcass/common/errors.hpp"
#include "vcass/eval/metrics.hpp"
#include "vcass/eval/similarity.hpp"

using namespace vcass;
namespace fs = std::filesystem;

TEST_CASE("published consistency rows reproduce exactly at 4 decimals") {
  auto t1 = eval::tendency_from_proportions(0.7060, 0.5740, eval::Condition::kNeutral);
  CHECK(t1.consistent == doctest::Approx(0.6400).epsilon(1e-9));
  CHECK(t1.inconsistent == doctest::Approx(0.3600).epsilon(1e-9));
  CHECK(t1.ppt == doctest::Approx(0.7060).epsilon(1e-9));
  CHECK(t1.pnt == doctest::Approx(0.2940).epsilon(1e-9));
  CHECK(t1.nnt == doctest::Approx(0.5740).epsilon(1e-9));
  CHECK(t1.npt == doctest::Approx(0.4260).epsilon(1e-9));

  auto t2 = eval::tendency_from_proportions(0.9110, 0.6880, eval::Condition::kAligned);
  CHECK(t2.consistent == doctest::Approx(0.7995).epsilon(1e-9));

  auto t3 = eval::tendency_from_proportions(0.6490, 0.5110, eval::Condition::kContradictory);
  CHECK(t3.consistent == doctest::Approx(0.5800).epsilon(1e-9));
}

TEST_CASE("perfect agreement gives consistency 1.0") {
  auto t = eval::tendency_from_proportions(1.0, 1.0, eval::Condition::kNeutral);
  CHECK(t.consistent == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(t.inconsistent == doctest::Approx(0.0).epsilon(1e-12));
}

namespace {

std::vector<eval::RatingRecord> random_records(std::mt19937& rng, int n) {
  std::vector<eval::RatingRecord> records;
  for (int i = 0; i < n; ++i) {
    eval::RatingRecord r;
    r.video_id = "v" + std::to_string(rng() % 10);
    r.participant_id = "p" + std::to_string(i);
    r.intent = (rng() % 2) ? eval::Intent::kPositive : eval::Intent::kNegative;
    r.judged_tendency = (rng() % 2) ? eval::Tendency::kPositive : eval::Tendency::kNegative;
    r.condition = eval::Condition::kNeutral;
    records.push_back(std::move(r));
  }
  // both intents present
  records.push_back({"vx", "pa", eval::Intent::kPositive, eval::Tendency::kPositive,
                     eval::Condition::kNeutral});
  records.push_back({"vy", "pb", eval::Intent::kNegative, eval::Tendency::kNegative,
                     eval::Condition::kNeutral});
  return records;
}

bool tables_equal(const eval::TendencyTable& a, const eval::TendencyTable& b) {
  return std::abs(a.ppt - b.ppt) < 1e-12 && std::abs(a.nnt - b.nnt) < 1e-12 &&
         std::abs(a.consistent - b.consistent) < 1e-12;
}

}  // namespace

TEST_CASE("tendency table is permutation- and duplication-invariant (200 datasets)") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    auto records = random_records(rng, 3 + static_cast<int>(rng() % 40));
    auto base = eval::tendency_table(records, eval::Condition::kNeutral);

    auto shuffled = records;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(tables_equal(base, eval::tendency_table(shuffled, eval::Condition::kNeutral)));

    auto doubled = records;
    doubled.insert(doubled.end(), records.begin(), records.end());
    CHECK(tables_equal(base, eval::tendency_table(doubled, eval::Condition::kNeutral)));

    CHECK(base.ppt + base.pnt == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(base.npt + base.nnt == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(base.consistent + base.inconsistent == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("unbalanced intent groups use size-weighted consistency") {
  std::vector<eval::RatingRecord> records;
  // 4 positive-intent records, 3 judged positive; 2 negative-intent, 1 judged negative
  for (int i = 0; i < 4; ++i) {
    records.push_back({"v1", "p" + std::to_string(i), eval::Intent::kPositive,
                       i < 3 ? eval::Tendency::kPositive : eval::Tendency::kNegative,
                       eval::Condition::kAligned});
  }
  for (int i = 0; i < 2; ++i) {
    records.push_back({"v2", "q" + std::to_string(i), eval::Intent::kNegative,
                       i < 1 ? eval::Tendency::kNegative : eval::Tendency::kPositive,
                       eval::Condition::kAligned});
  }
  auto t = eval::tendency_table(records, eval::Condition::kAligned);
  // weighted oracle: (3 + 1) consistent of 6 records
  CHECK(t.consistent == doctest::Approx(4.0 / 6.0).epsilon(1e-12));
  CHECK(t.ppt == doctest::Approx(0.75));
  CHECK(t.nnt == doctest::Approx(0.5));
}

TEST_CASE("missing intent group is an error") {
  std::vector<eval::RatingRecord> records = {
      {"v", "p", eval::Intent::kPositive, eval::Tendency::kPositive, eval::Condition::kNeutral}};
  CHECK_THROWS_AS(eval::tendency_table(records, eval::Condition::kNeutral), MissingIntentGroup);
  // records exist, but not for the requested condition
  CHECK_THROWS_AS(eval::tendency_table(records, eval::Condition::kAligned), MissingIntentGroup);
}

TEST_CASE("pleasure categorization: definition, boundaries, exclusion") {
  using eval::PleasureCategory;
  CHECK(eval::categorize_pleasure(0.5, 0.1) == PleasureCategory::kPositive);
  CHECK(eval::categorize_pleasure(-0.05, 0.1) == std::nullopt);
  CHECK(eval::categorize_pleasure(-1.0, 0.0) == PleasureCategory::kNegative);
  CHECK(eval::categorize_pleasure(0.1, 0.1) == std::nullopt);  // band edge excluded
  CHECK_THROWS_AS(eval::categorize_pleasure(1.5, 0.1), OutOfRange);
  CHECK_THROWS_AS(eval::categorize_pleasure(0.5, 1.0), OutOfRange);
}

TEST_CASE("pleasure categorization is antisymmetric over a [-1,1] sweep") {
  for (double band : {0.0, 0.1, 0.3}) {
    for (int i = -100; i <= 100; ++i) {
      double raw = i / 100.0;
      auto lhs = eval::categorize_pleasure(-raw, band);
      auto rhs = eval::categorize_pleasure(raw, band);
      if (std::abs(raw) <= band) {
        CHECK(lhs == std::nullopt);
        CHECK(rhs == std::nullopt);
      } else {
        REQUIRE(lhs.has_value());
        REQUIRE(rhs.has_value());
        CHECK(lhs != rhs);
      }
    }
  }
}

TEST_CASE("published table-2 averages: 0.70 and 0.62 under round-half-up") {
  std::vector<double> kb_scores = {0.67, 0.75, 0.73, 0.65, 0.61, 0.70, 0.80, 0.67, 0.73, 0.67};
  std::vector<double> plain_scores = {0.68, 0.64, 0.65, 0.61, 0.52, 0.69, 0.57, 0.68, 0.61, 0.59};
  CHECK(eval::average_score(kb_scores) == doctest::Approx(0.70).epsilon(1e-12));
  CHECK(eval::average_score(plain_scores) == doctest::Approx(0.62).epsilon(1e-12));
}

TEST_CASE("round_half_up behaves as documented") {
  CHECK(eval::round_half_up(0.695, 2) == doctest::Approx(0.70));
  CHECK(eval::round_half_up(0.694, 2) == doctest::Approx(0.69));
  CHECK(eval::round_half_up(74.6835, 2) == doctest::Approx(74.68));
}

namespace {
backends::EmbedClient mock_embed() {
  return backends::EmbedClient(backends::BackendEndpoint{"mock://embed", "", 5.0, 0});
}
}  // namespace

TEST_CASE("identical texts score cosine 1.0 under any embedding backend") {
  std::map<std::string, std::vector<std::string>> human = {
      {"01", {"a warm festive evening scene"}}};
  std::map<std::string, std::string> kb_texts = {{"01", "a warm festive evening scene"}};
  std::map<std::string, std::string> plain = {{"01", "something entirely different here"}};
  auto report = eval::similarity_report(human, kb_texts, plain, mock_embed());
  CHECK(report.per_video.at("01").first == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(report.per_video.at("01").second < 1.0);
}

TEST_CASE("similarity report: means over human raters, reproducible, in range") {
  std::map<std::string, std::vector<std::string>> human = {
      {"01", {"warm golden evening", "festive town square", "lively night market"}},
      {"02", {"gloomy rain-soaked alley", "dark tense shadows"}},
  };
  std::map<std::string, std::string> kb_texts = {{"01", "a warm festive square at golden hour"},
                                                 {"02", "a dark fearful alley in the rain"}};
  std::map<std::string, std::string> plain = {{"01", "people stand outside at night"},
                                              {"02", "a narrow street"}};

  auto a = eval::similarity_report(human, kb_texts, plain, mock_embed());
  auto b = eval::similarity_report(human, kb_texts, plain, mock_embed());
  CHECK(a.per_video == b.per_video);  // bit-for-bit reproducible
  CHECK(a.kb_llm_average == b.kb_llm_average);
  for (const auto& [id, scores] : a.per_video) {
    CHECK(scores.first >= -1.0);
    CHECK(scores.first <= 1.0);
    CHECK(scores.second >= -1.0);
    CHECK(scores.second <= 1.0);
  }

  // per-video aggregation is the arithmetic mean over the human texts
  auto embed_one = [&](const std::string& text) { return mock_embed().embed({text})[0]; };
  double manual = 0.0;
  for (const auto& text : human["01"]) {
    manual += eval::cosine_similarity(embed_one(text), embed_one(kb_texts["01"]));
  }
  manual /= 3.0;
  CHECK(a.per_video.at("01").first == doctest::Approx(manual).epsilon(1e-12));
}

TEST_CASE("similarity: id-set mismatch raises KeyMismatch") {
  std::map<std::string, std::vector<std::string>> human = {{"01", {"x"}}};
  std::map<std::string, std::string> kb_texts = {{"01", "x"}, {"02", "y"}};
  std::map<std::string, std::string> plain = {{"01", "x"}};
  CHECK_THROWS_AS(eval::similarity_report(human, kb_texts, plain, mock_embed()), KeyMismatch);
}

TEST_CASE("preference rate: fractions and rounding") {
  std::vector<eval::PreferenceChoice> choices = {
      {"p1", "v1", true}, {"p2", "v1", true}, {"p3", "v1", true}, {"p4", "v1", false}};
  auto rate = eval::preference_rate(choices);
  CHECK(rate.expressive == 3);
  CHECK(rate.total == 4);
  CHECK(rate.percent_rounded() == doctest::Approx(75.00));

  std::vector<eval::PreferenceChoice> all_neutral = {{"p1", "v1", false}, {"p2", "v2", false}};
  CHECK(eval::preference_rate(all_neutral).percent_rounded() == doctest::Approx(0.0));
  CHECK_THROWS_AS(eval::preference_rate({}), ConfigError);
}

TEST_CASE("118 of 158 expressive choices round to the published 74.68%") {
  // exact rational oracle: 11800/158 = 74.6835...; half-up at 2 decimals
  std::vector<eval::PreferenceChoice> choices;
  for (int i = 0; i < 158; ++i) {
    choices.push_back({"p" + std::to_string(i % 30), "v" + std::to_string(i % 10), i < 118});
  }
  auto rate = eval::preference_rate(choices);
  CHECK(rate.expressive == 118);
  CHECK(rate.total == 158);
  CHECK(rate.percent_rounded() == doctest::Approx(74.68).epsilon(1e-12));
}

TEST_CASE("rating record loader: header, enums, duplicates") {
  fsutil::ScratchDir scratch("records");
  fs::path good = scratch.path() / "good.csv";
  fsutil::atomic_write(good,
                       std::string("video_id,participant_id,condition,intent,judged_tendency\n"
                                   "v1,p1,neutral,positive,positive\n"
                                   "v1,p2,neutral,negative,negative\n"
                                   "v1,p1,aligned,positive,negative\n"));
  auto records = eval::load_rating_records(good);
  REQUIRE(records.size() == 3);
  CHECK(records[0].intent == eval::Intent::kPositive);
  CHECK(records[2].condition == eval::Condition::kAligned);

  fs::path dup = scratch.path() / "dup.csv";
  fsutil::atomic_write(dup,
                       std::string("video_id,participant_id,condition,intent,judged_tendency\n"
                                   "v1,p1,neutral,positive,positive\n"
                                   "v1,p1,neutral,negative,negative\n"));
  CHECK_THROWS_AS(eval::load_rating_records(dup), ConfigError);

  fs::path bad_enum = scratch.path() / "bad.csv";
  fsutil::atomic_write(bad_enum,
                       std::string("video_id,participant_id,condition,intent,judged_tendency\n"
                                   "v1,p1,neutral,sideways,positive\n"));
  try {
    eval::load_rating_records(bad_enum);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("bad.csv:2") != std::string::npos);
  }
}

TEST_CASE("choices loader") {
  fsutil::ScratchDir scratch("choices");
  fs::path f = scratch.path() / "choices.csv";
  fsutil::atomic_write(f, std::string("participant_id,video_id,chosen\n"
                                      "p1,v1,expressive\n"
                                      "p2,v1,neutral\n"));
  auto choices = eval::load_preference_choices(f);
  REQUIRE(choices.size() == 2);
  CHECK(choices[0].chose_expressive);
  CHECK(!choices[1].chose_expressive);
}
