#include "absa/polarity.hpp"

#include <cmath>

namespace absa {

std::string_view to_string(Polarity p) {
  switch (p) {
    case Polarity::kPositive:
      return "positive";
    case Polarity::kNegative:
      return "negative";
    case Polarity::kNeutral:
      return "neutral";
    case Polarity::kConflict:
      return "conflict";
  }
  return "unknown";
}

std::optional<Polarity> parse_polarity(std::string_view s) {
  for (Polarity p : kAllPolarities) {
    if (to_string(p) == s) return p;
  }
  return std::nullopt;
}

double PolarityScores::at(Polarity p) const {
  switch (p) {
    case Polarity::kPositive:
      return positive;
    case Polarity::kNegative:
      return negative;
    case Polarity::kNeutral:
      return neutral;
    case Polarity::kConflict:
      break;
  }
  return 0.0;
}

Polarity PolarityScores::argmax() const {
  Polarity best = Polarity::kPositive;
  for (Polarity p : kSentimentClasses) {
    if (at(p) > at(best)) best = p;
  }
  return best;
}

PolarityScores PolarityScores::one_hot(Polarity p) {
  PolarityScores s;
  if (p == Polarity::kPositive) s.positive = 1.0;
  if (p == Polarity::kNegative) s.negative = 1.0;
  if (p == Polarity::kNeutral) s.neutral = 1.0;
  return s;
}

bool scores_consistent(const PolarityScores& scores, Polarity label) {
  if (label == Polarity::kConflict) return false;
  for (Polarity p : kSentimentClasses) {
    double v = scores.at(p);
    if (!(v >= 0.0 && v <= 1.0)) return false;
  }
  if (std::fabs(scores.sum() - 1.0) > 1e-6) return false;
  // The label must be a maximal class; exact ties are accepted.
  for (Polarity p : kSentimentClasses) {
    if (scores.at(p) > scores.at(label)) return false;
  }
  return true;
}

}  // namespace absa
