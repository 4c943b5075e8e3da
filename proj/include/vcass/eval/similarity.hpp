// Embedding-similarity comparison of model-written emotional descriptions
// against human-written ones, per video and averaged.
#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "vcass/backends/clients.hpp"

namespace vcass::eval {

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b);

struct SimilarityReport {
  // video_id -> (kb_llm score, plain_llm score)
  std::map<std::string, std::pair<double, double>> per_video;
  double kb_llm_average = 0.0;     // round-half-up, 2 decimals
  double plain_llm_average = 0.0;  // round-half-up, 2 decimals

  std::string to_json() const;
};

// Mean of per-video scores, rounded half-up to 2 decimals.
double average_score(const std::vector<double>& scores);

// Per video: mean over that video's human texts of
// cosine(embed(human), embed(model)). All three maps must share one id set
// (KeyMismatch otherwise); every human list must be non-empty.
SimilarityReport similarity_report(
    const std::map<std::string, std::vector<std::string>>& human_texts,
    const std::map<std::string, std::string>& kb_llm_texts,
    const std::map<std::string, std::string>& plain_llm_texts,
    const backends::EmbedClient& embedder);

}  // namespace vcass::eval
