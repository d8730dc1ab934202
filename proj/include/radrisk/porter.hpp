#pragma once

#include <string>
#include <string_view>

namespace radrisk::textprep {

/// Stemmer contract. Implementations must be pure and thread-safe.
class Stemmer {
 public:
  virtual ~Stemmer() = default;
  virtual std::string stem(std::string_view lowercase_token) const = 0;
};

/// Porter's suffix-stripping stemmer as distributed in its reference C
/// implementation: words of one or two letters are left alone, and step 2
/// uses the "bli" -> "ble" and "logi" -> "log" rules.
///
/// Only ASCII-alphabetic tokens are stemmed. Anything containing digits,
/// non-Latin script or other characters is returned unchanged.
class PorterStemmer final : public Stemmer {
 public:
  std::string stem(std::string_view lowercase_token) const override;
};

/// Porter stem of a lowercased token.
std::string stem_token(std::string_view token);

}  // namespace radrisk::textprep
