#ifndef ABSA_SHA256_HPP_
#define ABSA_SHA256_HPP_

#include <string>
#include <string_view>

namespace absa {

// Lowercase hex SHA-256 digest of `bytes`.
std::string sha256_hex(std::string_view bytes);

}  // namespace absa

#endif  // ABSA_SHA256_HPP_
