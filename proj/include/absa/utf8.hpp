#ifndef ABSA_UTF8_HPP_
#define ABSA_UTF8_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

// Helpers for character offsets counted in Unicode scalar values over UTF-8
// text. Inputs are assumed to be valid UTF-8 (the XML reader guarantees it).
namespace absa::utf8 {

std::size_t length(std::string_view s);

// Byte position of the `index`-th scalar value; index == length(s) yields
// s.size(). nullopt when index is past the end.
std::optional<std::size_t> byte_offset(std::string_view s, std::size_t index);

// Number of scalar values that start before byte position `byte`.
std::size_t char_index(std::string_view s, std::size_t byte);

// s[from, to) in scalar values; nullopt when out of range or from > to.
std::optional<std::string_view> slice(std::string_view s, std::size_t from,
                                      std::size_t to);

bool is_valid(std::string_view s);

}  // namespace absa::utf8

namespace absa::text {

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

// ASCII-only case folding; multi-byte sequences pass through untouched so
// byte offsets are preserved.
std::string ascii_lower(std::string_view s);

std::string_view trim(std::string_view s);

}  // namespace absa::text

#endif  // ABSA_UTF8_HPP_
