#ifndef ABSA_PIPELINE_HPP_
#define ABSA_PIPELINE_HPP_

#include <chrono>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absa/backend.hpp"
#include "absa/corpus.hpp"
#include "absa/normalize.hpp"

namespace absa {

struct FilterConfig {
  bool require_substring = true;
  bool lowercase = true;
  std::string strip_chars{kDefaultStripChars};
  bool dedupe = true;
  std::optional<std::size_t> max_terms;

  // Normalization used for dedupe and the substring check.
  NormConfig norm() const;
  // Throws std::invalid_argument when max_terms is 0.
  void check() const;
  bool operator==(const FilterConfig&) const = default;
};

struct PredictedAspect {
  // Surface form after trimming; letter case is kept.
  std::string term;
  std::string normalized;
  // First case-insensitive occurrence in the sentence, when there is one.
  std::optional<Span> span;
  bool operator==(const PredictedAspect&) const = default;
};

struct LabeledAspect {
  PredictedAspect aspect;
  Polarity polarity = Polarity::kNeutral;
  std::optional<PolarityScores> scores;
  bool operator==(const LabeledAspect&) const = default;
};

struct StageTiming {
  std::chrono::microseconds extract{0};
  std::chrono::microseconds filter{0};
  std::chrono::microseconds classify{0};
};

struct PipelineOutput {
  std::string sentence_id;
  std::vector<LabeledAspect> labeled;
  StageTiming timing;
  std::string ate_backend_id;
  std::string asc_backend_id;
};

// A_c = f_ATE(X). The backend's answer is returned untouched.
CandidateAspects extract_aspects(AteBackend& ate, std::string_view text);

// A = f_filter(A_c): trims, drops empties, dedupes by normalized form,
// enforces the substring check and the cap, and locates spans. Never
// invents a term.
std::vector<PredictedAspect> filter_aspects(const CandidateAspects& candidates,
                                            const FilterConfig& cfg,
                                            std::string_view text);

// s = f_ASC(X, a). Rejects backend answers carrying Conflict or scores that
// disagree with the label (ProtocolError).
LabeledAspect classify_aspect(AscBackend& asc, std::string_view text,
                              const PredictedAspect& aspect);

// Extract, filter, then classify each filtered aspect in order.
// BackendUnavailable is rethrown carrying the sentence id and stage.
PipelineOutput run_pipeline(AteBackend& ate, AscBackend& asc,
                            const Sentence& sentence,
                            const FilterConfig& filter_cfg);

// run_pipeline over every sentence with up to `parallelism` workers. Output
// order is corpus order. Stops at the first BackendUnavailable and rethrows
// it with the number of sentences completed.
std::vector<PipelineOutput> run_corpus(AteBackend& ate, AscBackend& asc,
                                       const Corpus& corpus,
                                       const FilterConfig& filter_cfg,
                                       std::size_t parallelism);

}  // namespace absa

#endif  // ABSA_PIPELINE_HPP_
