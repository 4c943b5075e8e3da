#include "vcass/eval/similarity.hpp"

#include <cmath>

#include <json.hpp>

#include "vcass/common/errors.hpp"
#include "vcass/eval/metrics.hpp"

namespace vcass::eval {

using nlohmann::json;

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) {
    throw KeyMismatch("cosine: vector dimensions differ (" + std::to_string(a.size()) + " vs " +
                      std::to_string(b.size()) + ")");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  double v = dot / (std::sqrt(na) * std::sqrt(nb));
  // clamp away float fuzz
  if (v > 1.0) v = 1.0;
  if (v < -1.0) v = -1.0;
  return v;
}

double average_score(const std::vector<double>& scores) {
  if (scores.empty()) throw ConfigError("average_score over an empty list");
  double sum = 0.0;
  for (double s : scores) sum += s;
  return round_half_up(sum / static_cast<double>(scores.size()), 2);
}

std::string SimilarityReport::to_json() const {
  json per = json::object();
  for (const auto& [id, pair] : per_video) {
    per[id] = {{"kb_llm", pair.first}, {"plain_llm", pair.second}};
  }
  json doc = {{"per_video", per},
              {"averages", {{"kb_llm", kb_llm_average}, {"plain_llm", plain_llm_average}}}};
  return doc.dump(2);
}

SimilarityReport similarity_report(
    const std::map<std::string, std::vector<std::string>>& human_texts,
    const std::map<std::string, std::string>& kb_llm_texts,
    const std::map<std::string, std::string>& plain_llm_texts,
    const backends::EmbedClient& embedder) {
  auto ids_of = [](const auto& m) {
    std::vector<std::string> ids;
    for (const auto& [k, v] : m) ids.push_back(k);
    return ids;
  };
  if (ids_of(human_texts) != ids_of(kb_llm_texts) ||
      ids_of(human_texts) != ids_of(plain_llm_texts)) {
    throw KeyMismatch("human, kb_llm, and plain_llm video id sets differ");
  }
  if (human_texts.empty()) throw ConfigError("similarity_report over an empty corpus");

  // one batched embed call per corpus, reassembled by key order
  std::vector<std::string> human_flat;
  std::vector<std::pair<std::string, size_t>> human_spans;  // video -> count
  std::vector<std::string> kb_flat, plain_flat;
  for (const auto& [id, texts] : human_texts) {
    if (texts.empty()) throw ConfigError("video " + id + " has no human texts");
    human_spans.emplace_back(id, texts.size());
    human_flat.insert(human_flat.end(), texts.begin(), texts.end());
    kb_flat.push_back(kb_llm_texts.at(id));
    plain_flat.push_back(plain_llm_texts.at(id));
  }

  auto human_vecs = embedder.embed(human_flat);
  auto kb_vecs = embedder.embed(kb_flat);
  auto plain_vecs = embedder.embed(plain_flat);

  SimilarityReport report;
  std::vector<double> kb_scores, plain_scores;
  size_t cursor = 0;
  for (size_t v = 0; v < human_spans.size(); ++v) {
    const auto& [id, count] = human_spans[v];
    double kb_sum = 0.0, plain_sum = 0.0;
    for (size_t i = 0; i < count; ++i) {
      kb_sum += cosine_similarity(human_vecs[cursor + i], kb_vecs[v]);
      plain_sum += cosine_similarity(human_vecs[cursor + i], plain_vecs[v]);
    }
    cursor += count;
    double kb_score = kb_sum / static_cast<double>(count);
    double plain_score = plain_sum / static_cast<double>(count);
    report.per_video[id] = {kb_score, plain_score};
    kb_scores.push_back(kb_score);
    plain_scores.push_back(plain_score);
  }
  report.kb_llm_average = average_score(kb_scores);
  report.plain_llm_average = average_score(plain_scores);
  return report;
}

}  // namespace vcass::eval
