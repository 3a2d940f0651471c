#ifndef ABSA_LEXICON_HPP_
#define ABSA_LEXICON_HPP_

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "absa/backend.hpp"

namespace absa {

// Offline rule-based baseline for both pipeline stages.
struct LexiconConfig {
  std::set<std::string> aspect_terms;
  std::set<std::string> positive_cues;
  std::set<std::string> negative_cues;
  std::set<std::string> negators{"not", "no", "never", "n't"};
  std::size_t window = 3;

  // Throws std::invalid_argument when a cue is both positive and negative or
  // window is 0.
  void check() const;
  // Stable short hash of the configuration, used in backend ids.
  std::string fingerprint() const;
  bool operator==(const LexiconConfig&) const = default;
};

// Reads {"aspect_terms":[...], "positive_cues":[...], "negative_cues":[...],
// "negators":[...], "window":n}; the last two are optional.
LexiconConfig parse_lexicon_config(std::string_view json_text);

// Lowercased tokens split on whitespace and punctuation. Apostrophes inside
// a word are kept, except that a trailing "n't" becomes its own token
// ("didn't" -> "did", "n't").
std::vector<std::string> lexicon_tokenize(std::string_view text);

// Lexicon entries found in the text as contiguous token sequences, in order
// of first occurrence (longer entries first on ties).
CandidateAspects lexicon_ate(const LexiconConfig& cfg, std::string_view text);

// The cue nearest to the first occurrence of `term`, within `window` tokens
// on either side, decides (left side wins ties). A negator between cue and
// term, or directly in front of the cue, flips positive and negative. No cue
// gives neutral. Scores are one-hot. Throws TermNotFound.
AscResult lexicon_asc(const LexiconConfig& cfg, std::string_view text,
                      std::string_view term);

class LexiconAte : public AteBackend {
 public:
  explicit LexiconAte(LexiconConfig cfg);
  std::string id() const override { return id_; }
  CandidateAspects extract(std::string_view text) override {
    return lexicon_ate(cfg_, text);
  }

 private:
  LexiconConfig cfg_;
  std::string id_;
};

class LexiconAsc : public AscBackend {
 public:
  explicit LexiconAsc(LexiconConfig cfg);
  std::string id() const override { return id_; }
  AscResult classify(std::string_view text, std::string_view term) override {
    return lexicon_asc(cfg_, text, term);
  }

 private:
  LexiconConfig cfg_;
  std::string id_;
};

}  // namespace absa

#endif  // ABSA_LEXICON_HPP_
