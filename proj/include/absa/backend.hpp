#ifndef ABSA_BACKEND_HPP_
#define ABSA_BACKEND_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absa/polarity.hpp"

namespace absa {

// Raw ATE output: order as produced, duplicates and noise included.
struct CandidateAspects {
  std::vector<std::string> terms;
  bool operator==(const CandidateAspects&) const = default;
};

struct AscResult {
  Polarity polarity = Polarity::kNeutral;
  std::optional<PolarityScores> scores;
  bool operator==(const AscResult&) const = default;
};

// Aspect term extraction. Deterministic backends return identical output for
// identical input. Implementations are called concurrently unless
// single_flight() is true, in which case the harness serializes calls.
class AteBackend {
 public:
  virtual ~AteBackend() = default;
  virtual std::string id() const = 0;
  virtual bool single_flight() const { return false; }
  virtual CandidateAspects extract(std::string_view text) = 0;
};

// Aspect sentiment classification of one (sentence, aspect term) pair.
class AscBackend {
 public:
  virtual ~AscBackend() = default;
  virtual std::string id() const = 0;
  virtual bool single_flight() const { return false; }
  virtual AscResult classify(std::string_view text, std::string_view term) = 0;
};

}  // namespace absa

#endif  // ABSA_BACKEND_HPP_
