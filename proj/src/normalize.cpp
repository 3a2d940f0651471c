#include "absa/normalize.hpp"

#include <array>

#include "absa/utf8.hpp"

namespace absa {
namespace {

std::string single_pass(std::string_view in, const NormConfig& cfg) {
  std::string s = cfg.lowercase ? text::ascii_lower(in) : std::string(in);

  auto strippable = [&](char c) {
    return text::is_space(c) || cfg.strip_chars.find(c) != std::string::npos;
  };
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && strippable(s[begin])) ++begin;
  while (end > begin && strippable(s[end - 1])) --end;
  s = s.substr(begin, end - begin);

  if (cfg.collapse_whitespace) {
    std::string collapsed;
    collapsed.reserve(s.size());
    bool in_space = false;
    for (char c : s) {
      if (text::is_space(c)) {
        in_space = true;
        continue;
      }
      if (in_space && !collapsed.empty()) collapsed += ' ';
      in_space = false;
      collapsed += c;
    }
    s = std::move(collapsed);
  }

  if (cfg.strip_articles) {
    static constexpr std::array<std::string_view, 3> kArticles = {"the", "a", "an"};
    for (std::string_view article : kArticles) {
      if (s.size() <= article.size() + 1) continue;
      std::string_view head(s.data(), article.size());
      bool match = cfg.lowercase ? head == article
                                 : text::ascii_lower(head) == article;
      if (match && text::is_space(s[article.size()])) {
        s = std::string(text::trim(std::string_view(s).substr(article.size())));
        break;
      }
    }
  }
  return s;
}

}  // namespace

std::string normalize_term(std::string_view term, const NormConfig& cfg) {
  std::string current(term);
  while (true) {
    std::string next = single_pass(current, cfg);
    if (next == current) return next;
    current = std::move(next);
  }
}

}  // namespace absa
