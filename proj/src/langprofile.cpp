#include "radrisk/langprofile.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

#include <fmt/format.h>

#include "radrisk/unicode.hpp"

namespace radrisk::langprofile {

namespace {

struct ScriptRange {
  char32_t first;
  char32_t last;
  std::string_view script;
};

constexpr ScriptRange kRanges[] = {
    {0x0041, 0x024F, "Latin"},      {0x0250, 0x02AF, "Latin"},
    {0x0370, 0x03FF, "Greek"},      {0x0400, 0x052F, "Cyrillic"},
    {0x0530, 0x058F, "Armenian"},   {0x0590, 0x05FF, "Hebrew"},
    {0x0600, 0x06FF, "Arabic"},     {0x0700, 0x074F, "Syriac"},
    {0x0750, 0x077F, "Arabic"},     {0x0780, 0x07BF, "Thaana"},
    {0x0870, 0x08FF, "Arabic"},     {0x0900, 0x097F, "Devanagari"},
    {0x0980, 0x09FF, "Bengali"},    {0x0A00, 0x0A7F, "Gurmukhi"},
    {0x0A80, 0x0AFF, "Gujarati"},   {0x0B00, 0x0B7F, "Oriya"},
    {0x0B80, 0x0BFF, "Tamil"},      {0x0C00, 0x0C7F, "Telugu"},
    {0x0C80, 0x0CFF, "Kannada"},    {0x0D00, 0x0D7F, "Malayalam"},
    {0x0D80, 0x0DFF, "Sinhala"},    {0x0E00, 0x0E7F, "Thai"},
    {0x0E80, 0x0EFF, "Lao"},        {0x0F00, 0x0FFF, "Tibetan"},
    {0x1000, 0x109F, "Myanmar"},    {0x10A0, 0x10FF, "Georgian"},
    {0x1100, 0x11FF, "Hangul"},     {0x1200, 0x139F, "Ethiopic"},
    {0x13A0, 0x13FF, "Cherokee"},   {0x1780, 0x17FF, "Khmer"},
    {0x1800, 0x18AF, "Mongolian"},  {0x1C80, 0x1C8F, "Cyrillic"},
    {0x1D00, 0x1D7F, "Latin"},      {0x1E00, 0x1EFF, "Latin"},
    {0x1F00, 0x1FFF, "Greek"},      {0x2C60, 0x2C7F, "Latin"},
    {0x2DE0, 0x2DFF, "Cyrillic"},   {0x3040, 0x309F, "Hiragana"},
    {0x30A0, 0x30FF, "Katakana"},   {0x3400, 0x4DBF, "Han"},
    {0x4E00, 0x9FFF, "Han"},        {0xA640, 0xA69F, "Cyrillic"},
    {0xA720, 0xA7FF, "Latin"},      {0xAC00, 0xD7AF, "Hangul"},
    {0xF900, 0xFAFF, "Han"},        {0xFB1D, 0xFB4F, "Hebrew"},
    {0xFB50, 0xFDFF, "Arabic"},     {0xFE70, 0xFEFF, "Arabic"},
    {0xFF21, 0xFF5A, "Latin"},      {0x20000, 0x2FA1F, "Han"},
};

}  // namespace

std::optional<std::string_view> script_of(char32_t cp) {
  if (!unicode::is_letter(cp)) return std::nullopt;
  for (const auto& r : kRanges) {
    if (cp >= r.first && cp <= r.last) return r.script;
  }
  return std::nullopt;
}

std::optional<std::string> MajorityScriptDetector::classify(const textprep::CleanText& text) const {
  std::map<std::string_view, std::size_t> counts;
  for (char32_t cp : unicode::decode(text.text)) {
    if (auto s = script_of(cp)) ++counts[*s];
  }
  std::optional<std::string> best;
  std::size_t best_count = 0;
  bool tie = false;
  for (const auto& [script, n] : counts) {
    if (n > best_count) {
      best = std::string(script);
      best_count = n;
      tie = false;
    } else if (n == best_count) {
      tie = true;
    }
  }
  if (tie) return std::nullopt;
  return best;
}

std::optional<std::string> classify_script(const textprep::CleanText& text) {
  return MajorityScriptDetector().classify(text);
}

std::optional<double> ScriptDistribution::percentage(std::string_view script) const {
  for (const auto& [s, p] : entries) {
    if (s == script) return p;
  }
  return std::nullopt;
}

ScriptDistribution script_distribution(const corpus::Dataset& ds, const ScriptDetector& detector) {
  ScriptDistribution dist;
  std::map<std::string, std::size_t> counts;
  for (const auto& u : ds.users) {
    for (const auto& t : u.tweets) {
      if (auto s = detector.classify(textprep::clean_message(t.text))) {
        ++counts[*s];
        ++dist.n_classified;
      } else {
        ++dist.n_unclassified;
      }
    }
  }
  if (dist.n_classified == 0) {
    dist.empty = true;
    return dist;
  }

  // Largest-remainder rounding to hundredths so the table sums to 100.00.
  struct Share {
    std::string script;
    long long hundredths;
    double remainder;
  };
  std::vector<Share> shares;
  long long assigned = 0;
  for (const auto& [script, n] : counts) {
    const double exact = 10000.0 * static_cast<double>(n) / static_cast<double>(dist.n_classified);
    const auto floor = static_cast<long long>(std::floor(exact + 1e-9));
    shares.push_back({script, floor, exact - static_cast<double>(floor)});
    assigned += floor;
  }
  std::vector<Share*> by_remainder;
  for (auto& s : shares) by_remainder.push_back(&s);
  std::stable_sort(by_remainder.begin(), by_remainder.end(),
                   [](const Share* a, const Share* b) { return a->remainder > b->remainder; });
  for (long long left = 10000 - assigned, i = 0; left > 0; --left, ++i) {
    ++by_remainder[static_cast<std::size_t>(i) % by_remainder.size()]->hundredths;
  }

  for (const auto& s : shares) dist.entries.emplace_back(s.script, static_cast<double>(s.hundredths) / 100.0);
  std::stable_sort(dist.entries.begin(), dist.entries.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return dist;
}

void write_csv(std::ostream& out, const ScriptDistribution& dist) {
  out << "script,percentage\n";
  for (const auto& [script, pct] : dist.entries) out << fmt::format("{},{:.2f}\n", script, pct);
}

}  // namespace radrisk::langprofile
