#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "radrisk/porter.hpp"
#include "radrisk/textprep.hpp"

namespace radrisk::lexicon {

enum class IndicatorId {
  I1_SWEAR,
  I1_NEGATIVE,
  I3_DISCRIMINATION,
  I4_ANTI_WESTERN,
  I5_PRO_JIHAD,
};

inline constexpr std::array kAllIndicators = {
    IndicatorId::I1_SWEAR, IndicatorId::I1_NEGATIVE, IndicatorId::I3_DISCRIMINATION,
    IndicatorId::I4_ANTI_WESTERN, IndicatorId::I5_PRO_JIHAD};

std::string_view to_string(IndicatorId id);
std::optional<IndicatorId> indicator_from_string(std::string_view name);

/// File name (without directory) that overrides this set's base keywords in
/// a lexicon directory, e.g. "i1_swear.txt".
std::string override_file_name(IndicatorId id);

/// An indicator's keyword list at each stage of preparation. `expanded`
/// holds the base keywords plus their synonyms; `expanded_stems` is what
/// tweets are matched against and is empty until finalize_stems runs.
struct KeywordSet {
  IndicatorId indicator_id{};
  std::vector<std::string> base_keywords;
  std::vector<std::string> expanded;
  std::set<std::string> expanded_stems;

  bool finalized() const { return !expanded_stems.empty(); }
  bool operator==(const KeywordSet&) const = default;
};

/// word -> synonyms, merged over every sense the source lists.
class SynonymLexicon {
 public:
  SynonymLexicon() = default;

  /// `word: syn1, syn2, ...` per line, UTF-8, '#' comments. Repeated words
  /// accumulate. Keys and synonyms are lowercased.
  static SynonymLexicon parse(std::istream& in);
  static SynonymLexicon load(const std::filesystem::path& path);
  /// The snapshot compiled into the library.
  static const SynonymLexicon& builtin();

  void add(std::string_view word, std::string_view synonym);
  const std::vector<std::string>* find(std::string_view word) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, std::vector<std::string>, std::less<>> entries_;
};

/// The five sets with their initial keywords, lowercased, not yet expanded.
std::vector<KeywordSet> default_keyword_sets();

/// Default sets with base keywords replaced by any `<indicator>.txt` files
/// found in `dir` (one keyword per line, '#' comments).
std::vector<KeywordSet> load_keyword_sets(const std::filesystem::path& dir);

/// Adds every single-token synonym of each base keyword. Multi-word synonyms
/// are dropped, since matching works on unigrams. Words without an entry
/// pass through unchanged. Result is deduplicated, first occurrence first.
KeywordSet expand_synonyms(const KeywordSet& ks, const SynonymLexicon& synlex);

/// Stems every expanded keyword (the base keywords if expansion was skipped).
KeywordSet finalize_stems(const KeywordSet& ks,
                          const textprep::Stemmer& stemmer = textprep::PorterStemmer());

/// Expand then stem every set.
std::vector<KeywordSet> prepare(std::vector<KeywordSet> sets, const SynonymLexicon& synlex,
                                const textprep::Stemmer& stemmer = textprep::PorterStemmer());

const KeywordSet& find_set(std::span<const KeywordSet> sets, IndicatorId id);

/// Number of tokens whose stem is in the set. Tokens must be lowercase.
std::size_t match_count(std::span<const std::string> stems, const KeywordSet& ks);
std::size_t match_count(std::span<const textprep::WordToken> tokens, const KeywordSet& ks,
                        const textprep::Stemmer& stemmer = textprep::PorterStemmer());

}  // namespace radrisk::lexicon
