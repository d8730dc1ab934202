#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace radrisk::unicode {

/// Decodes UTF-8 into code points. Invalid sequences become U+FFFD, one per
/// offending byte, so the decoder never throws on user-generated text.
std::u32string decode(std::string_view utf8);

std::string encode(std::u32string_view cps);
void append(std::string& out, char32_t cp);

/// Number of Unicode scalar values in a UTF-8 string.
std::size_t length(std::string_view utf8);

bool is_letter(char32_t cp);
bool is_digit(char32_t cp);
bool is_alnum(char32_t cp);
bool is_upper(char32_t cp);
bool is_lower(char32_t cp);
bool is_space(char32_t cp);
inline bool is_cased(char32_t cp) { return is_upper(cp) || is_lower(cp); }

char32_t to_lower(char32_t cp);
std::string to_lower(std::string_view utf8);

/// True when every byte is an ASCII letter.
bool is_ascii_alpha(std::string_view s);

}  // namespace radrisk::unicode
