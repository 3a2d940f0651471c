#ifndef ABSA_CORPUS_HPP_
#define ABSA_CORPUS_HPP_

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absa/polarity.hpp"

namespace absa {

// Character offsets in Unicode scalar values, [from, to).
struct Span {
  std::size_t from = 0;
  std::size_t to = 0;
  bool operator==(const Span&) const = default;
};

struct GoldAspect {
  std::string term;
  std::optional<Span> span;
  Polarity polarity = Polarity::kNeutral;
  bool operator==(const GoldAspect&) const = default;
};

struct Sentence {
  std::string id;
  std::string text;
  std::vector<GoldAspect> gold;
  bool operator==(const Sentence&) const = default;
};

enum class Split { kTrain, kTest, kOther };

std::string_view to_string(Split s);
std::optional<Split> parse_split(std::string_view s);

struct Corpus {
  std::string name;
  Split split = Split::kOther;
  std::vector<Sentence> sentences;
  bool operator==(const Corpus&) const = default;
};

struct CorpusStats {
  std::size_t sentences = 0;
  std::size_t aspects = 0;
  // Indexed by index_of(Polarity).
  std::array<std::size_t, 4> histogram{};
  std::size_t sentences_without_aspects = 0;
  double mean_aspects = 0.0;

  std::size_t count(Polarity p) const { return histogram[index_of(p)]; }
  bool operator==(const CorpusStats&) const = default;
};

struct Violation {
  std::string sentence_id;
  std::string rule;
  std::string detail;
  bool operator==(const Violation&) const = default;
};

enum class ConflictPolicy { kDrop, kKeep, kMapToNeutral };

std::string_view to_string(ConflictPolicy p);
std::optional<ConflictPolicy> parse_conflict_policy(std::string_view s);

enum class ParseMode {
  // Structural errors and every invariant violation throw.
  kStrict,
  // Only structural errors throw; invariant violations are left for
  // validate_corpus to report.
  kLenient,
};

struct ParseOptions {
  ParseMode mode = ParseMode::kStrict;
  // Used when the root element does not carry name/split attributes.
  std::string name;
  Split split = Split::kOther;
};

// Reads SemEval 2014 (<sentences>) or 2015/16 (<Reviews>) XML, chosen by the
// root element. Throws MalformedXml, SchemaViolation or OffsetMismatch.
Corpus parse_semeval_xml(std::string_view bytes, const ParseOptions& options = {});

// Writes the 2014 schema. Corpus name and split are stored as attributes of
// the root element so that parsing the output reproduces the corpus.
std::string serialize_semeval_xml(const Corpus& corpus);

std::vector<Violation> validate_corpus(const Corpus& corpus);

CorpusStats corpus_stats(const Corpus& corpus);

Corpus apply_conflict_policy(const Corpus& corpus, ConflictPolicy policy);

}  // namespace absa

#endif  // ABSA_CORPUS_HPP_
