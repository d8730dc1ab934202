#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "radrisk/corpus.hpp"
#include "radrisk/textprep.hpp"

namespace radrisk::langprofile {

/// Unicode script of a letter, or nullopt for characters outside the
/// tracked scripts (including all non-letters).
std::optional<std::string_view> script_of(char32_t cp);

/// Pluggable per-message detector; returns nullopt for "unclassified".
class ScriptDetector {
 public:
  virtual ~ScriptDetector() = default;
  virtual std::optional<std::string> classify(const textprep::CleanText& text) const = 0;
};

/// Majority script among the letters of a message. Ties and messages
/// without letters are unclassified.
class MajorityScriptDetector final : public ScriptDetector {
 public:
  std::optional<std::string> classify(const textprep::CleanText& text) const override;
};

std::optional<std::string> classify_script(const textprep::CleanText& text);

struct ScriptDistribution {
  /// (script, percentage) sorted by percentage descending, then name.
  std::vector<std::pair<std::string, double>> entries;
  std::size_t n_classified = 0;
  std::size_t n_unclassified = 0;
  bool empty = false;  // nothing could be classified

  std::optional<double> percentage(std::string_view script) const;
};

/// Each tweet is cleaned and classified; percentages are over classified
/// tweets and rounded to two decimals.
ScriptDistribution script_distribution(const corpus::Dataset& ds,
                                       const ScriptDetector& detector = MajorityScriptDetector());

void write_csv(std::ostream& out, const ScriptDistribution& dist);

}  // namespace radrisk::langprofile
