#ifndef ABSA_NORMALIZE_HPP_
#define ABSA_NORMALIZE_HPP_

#include <string>
#include <string_view>

namespace absa {

// Quotes, periods and commas.
inline constexpr std::string_view kDefaultStripChars = "\"'`.,";

struct NormConfig {
  bool lowercase = true;
  std::string strip_chars{kDefaultStripChars};
  bool collapse_whitespace = true;
  // Removes a leading "the", "a" or "an" followed by more text.
  bool strip_articles = false;

  bool operator==(const NormConfig&) const = default;
};

// Deterministic and idempotent: normalize_term(normalize_term(t)) ==
// normalize_term(t) for every cfg. The rules are applied until the string
// stops changing.
std::string normalize_term(std::string_view term, const NormConfig& cfg = {});

}  // namespace absa

#endif  // ABSA_NORMALIZE_HPP_
