#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace radrisk::textprep {

/// Message text with URLs and @-mentions removed, whitespace runs collapsed
/// and both ends trimmed. A whitespace run that contains a line break
/// collapses to a single '\n' so that sentence splitting still sees it; any
/// other run collapses to a single space.
struct CleanText {
  std::string text;
};

struct Sentence {
  std::string text;
  std::size_t char_length = 0;  // Unicode scalar values

  Sentence() = default;
  explicit Sentence(std::string t);
};

/// A word token: `lower` is what lexicons match against, `original` keeps the
/// source casing.
struct WordToken {
  std::string lower;
  std::string original;

  bool operator==(const WordToken&) const = default;
};

CleanText clean_message(std::string_view raw);

/// Boundaries at '.', '!', '?' and '\n'; a run of terminal punctuation ends a
/// single sentence and is not part of it. Ellipses ("..", "...", U+2026)
/// stay inside the sentence. Whitespace-only fragments are dropped.
std::vector<Sentence> split_sentences(const CleanText& text);

std::vector<WordToken> tokenize_words(const Sentence& s);
std::vector<WordToken> tokenize_words(std::string_view text);

/// U+2026 or two or more consecutive '.' characters.
bool detect_ellipsis(const Sentence& s);
bool detect_ellipsis(std::string_view text);

/// At least three cased letters and no lowercase ones.
bool is_fully_capitalized(const Sentence& s);
bool is_fully_capitalized(std::string_view text);

inline constexpr std::size_t kMinCasedLetters = 3;

}  // namespace radrisk::textprep
