#include "radrisk/textprep.hpp"

#include <algorithm>

#include "radrisk/unicode.hpp"

namespace radrisk::textprep {

namespace {

constexpr char32_t kEllipsis = 0x2026;
constexpr std::size_t kMaxHandle = 15;

bool is_handle_char(char32_t c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

bool starts_with_ci(std::u32string_view s, std::size_t pos, std::string_view prefix) {
  if (pos + prefix.size() > s.size()) return false;
  for (std::size_t k = 0; k < prefix.size(); ++k) {
    char32_t c = s[pos + k];
    if (c >= 'A' && c <= 'Z') c += 32;
    if (c != static_cast<unsigned char>(prefix[k])) return false;
  }
  return true;
}

// One pass of URL and mention removal. Returns true if anything was removed.
bool strip_patterns(std::u32string& text) {
  std::u32string out;
  out.reserve(text.size());
  bool removed = false;
  std::size_t i = 0;
  while (i < text.size()) {
    if (starts_with_ci(text, i, "http://") || starts_with_ci(text, i, "https://") ||
        starts_with_ci(text, i, "www.")) {
      while (i < text.size() && !unicode::is_space(text[i])) ++i;
      removed = true;
      continue;
    }
    if (text[i] == '@' && i + 1 < text.size() && is_handle_char(text[i + 1])) {
      std::size_t j = i + 1;
      while (j < text.size() && j - i - 1 < kMaxHandle && is_handle_char(text[j])) ++j;
      i = j;
      removed = true;
      continue;
    }
    out.push_back(text[i++]);
  }
  text.swap(out);
  return removed;
}

bool is_terminal(char32_t c) { return c == '.' || c == '!' || c == '?' || c == kEllipsis; }

bool run_has_ellipsis(std::u32string_view run) {
  for (std::size_t k = 0; k < run.size(); ++k) {
    if (run[k] == kEllipsis) return true;
    if (run[k] == '.' && k + 1 < run.size() && run[k + 1] == '.') return true;
  }
  return false;
}

void flush(std::u32string& current, std::vector<Sentence>& out) {
  auto first = std::find_if_not(current.begin(), current.end(), unicode::is_space);
  auto last = std::find_if_not(current.rbegin(), current.rend(), unicode::is_space).base();
  if (first < last) out.emplace_back(unicode::encode(std::u32string_view(&*first, last - first)));
  current.clear();
}

}  // namespace

Sentence::Sentence(std::string t) : text(std::move(t)), char_length(unicode::length(text)) {}

CleanText clean_message(std::string_view raw) {
  std::u32string text = unicode::decode(raw);
  while (strip_patterns(text)) {
    // removal can splice together a new URL or mention; iterate to a fixpoint
  }

  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (!unicode::is_space(text[i])) {
      unicode::append(out, text[i++]);
      continue;
    }
    bool newline = false;
    while (i < text.size() && unicode::is_space(text[i])) {
      newline = newline || text[i] == '\n' || text[i] == '\r';
      ++i;
    }
    if (!out.empty() && i < text.size()) out.push_back(newline ? '\n' : ' ');
  }
  return CleanText{std::move(out)};
}

std::vector<Sentence> split_sentences(const CleanText& text) {
  const std::u32string cps = unicode::decode(text.text);
  std::vector<Sentence> out;
  std::u32string current;
  std::size_t i = 0;
  while (i < cps.size()) {
    const char32_t c = cps[i];
    if (c == '\n') {
      flush(current, out);
      ++i;
      continue;
    }
    if (!is_terminal(c)) {
      current.push_back(c);
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < cps.size() && is_terminal(cps[j])) ++j;
    const std::u32string_view run(&cps[i], j - i);
    const bool ellipsis = run_has_ellipsis(run);
    const bool dots_only = std::all_of(run.begin(), run.end(),
                                       [](char32_t r) { return r == '.' || r == kEllipsis; });
    if (ellipsis) current.append(run);
    if (!(ellipsis && dots_only)) flush(current, out);
    i = j;
  }
  flush(current, out);
  return out;
}

std::vector<WordToken> tokenize_words(std::string_view text) {
  std::vector<WordToken> out;
  std::string lower;
  std::string original;
  auto emit = [&] {
    if (!original.empty()) out.push_back({std::move(lower), std::move(original)});
    lower.clear();
    original.clear();
  };
  for (char32_t c : unicode::decode(text)) {
    if (unicode::is_alnum(c)) {
      unicode::append(original, c);
      unicode::append(lower, unicode::to_lower(c));
    } else {
      emit();
    }
  }
  emit();
  return out;
}

std::vector<WordToken> tokenize_words(const Sentence& s) { return tokenize_words(s.text); }

bool detect_ellipsis(std::string_view text) {
  return text.find("..") != std::string_view::npos ||
         text.find("\xE2\x80\xA6") != std::string_view::npos;
}

bool detect_ellipsis(const Sentence& s) { return detect_ellipsis(s.text); }

bool is_fully_capitalized(std::string_view text) {
  std::size_t upper = 0;
  for (char32_t c : unicode::decode(text)) {
    if (unicode::is_lower(c)) return false;
    if (unicode::is_upper(c)) ++upper;
  }
  return upper >= kMinCasedLetters;
}

bool is_fully_capitalized(const Sentence& s) { return is_fully_capitalized(s.text); }

}  // namespace radrisk::textprep
