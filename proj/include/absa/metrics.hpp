#ifndef ABSA_METRICS_HPP_
#define ABSA_METRICS_HPP_

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absa/backend.hpp"
#include "absa/corpus.hpp"
#include "absa/normalize.hpp"
#include "absa/pipeline.hpp"

namespace absa {

struct MatchCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  MatchCounts& operator+=(const MatchCounts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  friend MatchCounts operator+(MatchCounts a, const MatchCounts& b) { return a += b; }
  bool operator==(const MatchCounts&) const = default;
};

// p = tp/(tp+fp), r = tp/(tp+fn), f1 = 2pr/(p+r); each is 0 when its
// denominator is 0.
struct PrfScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  MatchCounts counts;

  // True when a 0/0 was replaced by 0.
  bool degenerate() const {
    return counts.tp + counts.fp == 0 || counts.tp + counts.fn == 0;
  }
  bool operator==(const PrfScore&) const = default;
};

PrfScore prf(const MatchCounts& counts);

struct TermPolarity {
  std::string term;
  Polarity polarity = Polarity::kNeutral;
  bool operator==(const TermPolarity&) const = default;
};

// Multiset intersection over normalized forms:
//   tp = sum_t min(gold(t), pred(t)), fp = |pred| - tp, fn = |gold| - tp.
MatchCounts match_terms(std::span<const std::string> gold,
                        std::span<const std::string> pred,
                        const NormConfig& cfg = {});

// Same, over (normalized term, polarity) pairs.
MatchCounts match_pairs(std::span<const TermPolarity> gold,
                        std::span<const TermPolarity> pred,
                        const NormConfig& cfg = {});

inline constexpr std::size_t kOracleMaxItems = 12;

// Maximum matching by exhaustive search over injective gold->pred
// assignments, where two items match iff their keys are equal. Independent
// check for match_terms / match_pairs; throws SizeExceeded above
// kOracleMaxItems items per side.
MatchCounts brute_force_oracle(std::span<const std::string> gold,
                               std::span<const std::string> pred,
                               const NormConfig& cfg = {});
MatchCounts brute_force_oracle(std::span<const TermPolarity> gold,
                               std::span<const TermPolarity> pred,
                               const NormConfig& cfg = {});

struct ScoreConfig {
  NormConfig norm;
  // Terms only match when their character spans agree too. Aspects without a
  // span never match in this mode.
  bool strict_offsets = false;
  bool operator==(const ScoreConfig&) const = default;
};

// Micro-averaged over sentences. Throws IdMismatch unless `outputs` cover
// exactly the corpus sentence ids.
PrfScore score_ate(const Corpus& corpus, std::span<const PipelineOutput> outputs,
                   const ScoreConfig& cfg = {});
PrfScore score_joint(const Corpus& corpus, std::span<const PipelineOutput> outputs,
                     const ScoreConfig& cfg = {});

struct AscSummary {
  std::size_t total = 0;
  std::size_t correct = 0;
  double accuracy = 0.0;
  double micro_f1 = 0.0;
  // Unweighted mean of per-class f1 over positive, negative, neutral.
  double macro_f1 = 0.0;
  // Indexed by index_of(Polarity) for the three sentiment classes.
  std::array<PrfScore, 3> per_class{};

  bool degenerate() const { return total == 0; }
  bool operator==(const AscSummary&) const = default;
};

// Builds the summary from (gold, predicted) label pairs.
AscSummary summarize_asc(std::span<const std::pair<Polarity, Polarity>> labels);

// Classifies every gold (sentence, term) pair, independent of ATE. Gold must
// be free of Conflict (std::invalid_argument otherwise).
AscSummary score_asc_given_gold(const Corpus& corpus, AscBackend& asc,
                                const ScoreConfig& cfg = {});

// Polarity agreement on predicted aspects whose term matched gold, i.e. ASC
// as measured behind the ATE stage. accuracy == joint.tp / ate.tp.
AscSummary score_asc_pipelined(const Corpus& corpus,
                               std::span<const PipelineOutput> outputs,
                               const ScoreConfig& cfg = {});

struct SentenceErrors {
  std::string sentence_id;
  std::vector<TermPolarity> missing;   // gold pairs not predicted
  std::vector<TermPolarity> spurious;  // predicted pairs not in gold
  bool operator==(const SentenceErrors&) const = default;
};

// Sentences whose predicted pairs differ from gold, sorted by sentence id.
std::vector<SentenceErrors> pair_errors(const Corpus& corpus,
                                        std::span<const PipelineOutput> outputs,
                                        const ScoreConfig& cfg = {});

}  // namespace absa

#endif  // ABSA_METRICS_HPP_
