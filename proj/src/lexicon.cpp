#include "absa/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

#include "absa/errors.hpp"
#include "absa/sha256.hpp"
#include "absa/utf8.hpp"

namespace absa {
namespace {

bool is_word_char(char c) {
  auto u = static_cast<unsigned char>(c);
  if (u >= 0x80) return true;
  return std::isalnum(u) || c == '\'';
}

void push_token(std::vector<std::string>& out, std::string token) {
  while (!token.empty() && token.front() == '\'') token.erase(token.begin());
  if (token.size() > 3 && token.ends_with("n't")) {
    out.push_back(token.substr(0, token.size() - 3));
    out.push_back("n't");
    return;
  }
  while (!token.empty() && token.back() == '\'') token.pop_back();
  if (!token.empty()) out.push_back(std::move(token));
}

std::optional<std::size_t> find_sequence(const std::vector<std::string>& haystack,
                                         const std::vector<std::string>& needle) {
  if (needle.empty() || needle.size() > haystack.size()) return std::nullopt;
  auto it = std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end());
  if (it == haystack.end()) return std::nullopt;
  return static_cast<std::size_t>(it - haystack.begin());
}

bool contains_token(const std::set<std::string>& set, const std::string& token) {
  return set.contains(token) || set.contains(text::ascii_lower(token));
}

std::vector<std::string> sorted(const std::set<std::string>& s) {
  return {s.begin(), s.end()};
}

std::set<std::string> lowered(const std::set<std::string>& s) {
  std::set<std::string> out;
  for (const auto& v : s) out.insert(text::ascii_lower(v));
  return out;
}

}  // namespace

void LexiconConfig::check() const {
  if (window == 0) throw std::invalid_argument("lexicon window must be at least 1");
  std::set<std::string> positive = lowered(positive_cues);
  for (const auto& cue : lowered(negative_cues)) {
    if (positive.contains(cue)) {
      throw std::invalid_argument("cue '" + cue + "' is both positive and negative");
    }
  }
}

std::string LexiconConfig::fingerprint() const {
  nlohmann::ordered_json j;
  j["aspect_terms"] = sorted(aspect_terms);
  j["positive_cues"] = sorted(positive_cues);
  j["negative_cues"] = sorted(negative_cues);
  j["negators"] = sorted(negators);
  j["window"] = window;
  return sha256_hex(j.dump()).substr(0, 12);
}

LexiconConfig parse_lexicon_config(std::string_view json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw std::invalid_argument("lexicon config is not a JSON object");
  }
  LexiconConfig cfg;
  try {
    auto read_set = [&](const char* key, std::set<std::string>& into) {
      if (!j.contains(key)) return;
      into.clear();
      // Tokens are lowercased, so entries must be too.
      for (const auto& v : j.at(key)) into.insert(text::ascii_lower(v.get<std::string>()));
    };
    read_set("aspect_terms", cfg.aspect_terms);
    read_set("positive_cues", cfg.positive_cues);
    read_set("negative_cues", cfg.negative_cues);
    read_set("negators", cfg.negators);
    if (j.contains("window")) cfg.window = j.at("window").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("lexicon config: ") + e.what());
  }
  cfg.check();
  return cfg;
}

std::vector<std::string> lexicon_tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : text) {
    if (is_word_char(c)) {
      current += (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
    } else if (!current.empty()) {
      push_token(tokens, std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) push_token(tokens, std::move(current));
  return tokens;
}

CandidateAspects lexicon_ate(const LexiconConfig& cfg, std::string_view text) {
  const std::vector<std::string> tokens = lexicon_tokenize(text);
  // (position, -length, entry) so that ties put the longer entry first.
  std::vector<std::tuple<std::size_t, long, std::string>> hits;
  for (const std::string& entry : cfg.aspect_terms) {
    std::vector<std::string> entry_tokens = lexicon_tokenize(entry);
    if (auto at = find_sequence(tokens, entry_tokens)) {
      hits.emplace_back(*at, -static_cast<long>(entry_tokens.size()), entry);
    }
  }
  std::sort(hits.begin(), hits.end());
  CandidateAspects out;
  for (auto& [pos, len, entry] : hits) out.terms.push_back(std::move(entry));
  return out;
}

AscResult lexicon_asc(const LexiconConfig& cfg, std::string_view text,
                      std::string_view term) {
  const std::vector<std::string> tokens = lexicon_tokenize(text);
  const std::vector<std::string> term_tokens = lexicon_tokenize(term);
  auto start = find_sequence(tokens, term_tokens);
  if (!start) {
    throw TermNotFound("term '" + std::string(term) + "' does not occur in text");
  }
  const std::size_t first = *start;
  const std::size_t last = first + term_tokens.size() - 1;

  auto cue_polarity = [&](const std::string& token) -> std::optional<Polarity> {
    if (contains_token(cfg.positive_cues, token)) return Polarity::kPositive;
    if (contains_token(cfg.negative_cues, token)) return Polarity::kNegative;
    return std::nullopt;
  };

  std::optional<std::size_t> cue;
  std::optional<Polarity> polarity;
  for (std::size_t distance = 1; distance <= cfg.window && !cue; ++distance) {
    if (first >= distance) {
      std::size_t i = first - distance;
      if (auto p = cue_polarity(tokens[i])) {
        cue = i;
        polarity = p;
        break;
      }
    }
    std::size_t j = last + distance;
    if (j < tokens.size()) {
      if (auto p = cue_polarity(tokens[j])) {
        cue = j;
        polarity = p;
      }
    }
  }
  if (!cue) {
    return AscResult{Polarity::kNeutral, PolarityScores::one_hot(Polarity::kNeutral)};
  }

  auto is_negator = [&](std::size_t i) { return contains_token(cfg.negators, tokens[i]); };
  bool negated = false;
  if (*cue < first) {
    for (std::size_t i = *cue + 1; i < first; ++i) negated = negated || is_negator(i);
    if (*cue > 0) negated = negated || is_negator(*cue - 1);
  } else {
    for (std::size_t i = last + 1; i < *cue; ++i) negated = negated || is_negator(i);
  }
  if (negated) {
    polarity = *polarity == Polarity::kPositive ? Polarity::kNegative : Polarity::kPositive;
  }
  return AscResult{*polarity, PolarityScores::one_hot(*polarity)};
}

LexiconAte::LexiconAte(LexiconConfig cfg)
    : cfg_(std::move(cfg)), id_("lexicon:" + cfg_.fingerprint()) {
  cfg_.check();
}

LexiconAsc::LexiconAsc(LexiconConfig cfg)
    : cfg_(std::move(cfg)), id_("lexicon:" + cfg_.fingerprint()) {
  cfg_.check();
}

}  // namespace absa
