#ifndef ABSA_POLARITY_HPP_
#define ABSA_POLARITY_HPP_

#include <array>
#include <optional>
#include <string_view>

namespace absa {

// Conflict only ever appears in parsed gold data.
enum class Polarity { kPositive, kNegative, kNeutral, kConflict };

inline constexpr std::array<Polarity, 3> kSentimentClasses = {
    Polarity::kPositive, Polarity::kNegative, Polarity::kNeutral};

inline constexpr std::array<Polarity, 4> kAllPolarities = {
    Polarity::kPositive, Polarity::kNegative, Polarity::kNeutral,
    Polarity::kConflict};

// Lowercase wire/XML spelling: "positive", "negative", "neutral", "conflict".
std::string_view to_string(Polarity p);
std::optional<Polarity> parse_polarity(std::string_view s);

inline constexpr std::size_t index_of(Polarity p) {
  return static_cast<std::size_t>(p);
}

// Probability per sentiment class.
struct PolarityScores {
  double positive = 0.0;
  double negative = 0.0;
  double neutral = 0.0;

  double at(Polarity p) const;
  // Class with the highest score; ties resolve positive, negative, neutral.
  Polarity argmax() const;
  double sum() const { return positive + negative + neutral; }
  static PolarityScores one_hot(Polarity p);

  bool operator==(const PolarityScores&) const = default;
};

// Scores are probabilities summing to 1 within 1e-6 and agreeing with `label`.
bool scores_consistent(const PolarityScores& scores, Polarity label);

}  // namespace absa

#endif  // ABSA_POLARITY_HPP_
