#include "radrisk/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "radrisk/error.hpp"
#include "radrisk/unicode.hpp"

namespace radrisk::lexicon {

namespace {

constexpr std::string_view kBuiltinSynsets =
#include "default_synsets.inc"
    ;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

struct Defaults {
  IndicatorId id;
  std::string_view name;
  std::initializer_list<std::string_view> keywords;
};

// "US" is lowercased like everything else and so also matches the pronoun.
const Defaults kDefaults[] = {
    {IndicatorId::I1_SWEAR, "i1_swear", {"shit", "crap", "damn", "fuck"}},
    {IndicatorId::I1_NEGATIVE,
     "i1_negative",
     {"hate", "guilt", "shame", "terrible", "horrible", "bad", "fault"}},
    {IndicatorId::I3_DISCRIMINATION,
     "i3_discrimination",
     {"Muslim", "sick", "hate", "discrimination", "people", "racism", "religion"}},
    {IndicatorId::I4_ANTI_WESTERN,
     "i4_anti_western",
     {"western", "hate", "suck", "people", "west", "europe", "usa", "US", "bloody", "sick",
      "impure", "kuffar", "kafir"}},
    {IndicatorId::I5_PRO_JIHAD,
     "i5_pro_jihad",
     {"islamic", "state", "caliphate", "rise", "mujahideen", "mujahid", "help", "fight", "weapon",
      "gun", "weapons"}},
};

const Defaults& defaults_for(IndicatorId id) {
  for (const auto& d : kDefaults) {
    if (d.id == id) return d;
  }
  throw UsageError("unknown indicator");
}

void push_unique(std::vector<std::string>& out, std::unordered_set<std::string>& seen,
                 std::string word) {
  if (!word.empty() && seen.insert(word).second) out.push_back(std::move(word));
}

}  // namespace

std::string_view to_string(IndicatorId id) {
  switch (id) {
    case IndicatorId::I1_SWEAR: return "I1_SWEAR";
    case IndicatorId::I1_NEGATIVE: return "I1_NEGATIVE";
    case IndicatorId::I3_DISCRIMINATION: return "I3_DISCRIMINATION";
    case IndicatorId::I4_ANTI_WESTERN: return "I4_ANTI_WESTERN";
    case IndicatorId::I5_PRO_JIHAD: return "I5_PRO_JIHAD";
  }
  return "?";
}

std::optional<IndicatorId> indicator_from_string(std::string_view name) {
  for (auto id : kAllIndicators) {
    if (to_string(id) == name || defaults_for(id).name == name) return id;
  }
  return std::nullopt;
}

std::string override_file_name(IndicatorId id) {
  return std::string(defaults_for(id).name) + ".txt";
}

SynonymLexicon SynonymLexicon::parse(std::istream& in) {
  SynonymLexicon lex;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto colon = t.find(':');
    if (colon == std::string::npos) throw RecordError(lineno, "synset line without ':'");
    const std::string word = unicode::to_lower(trim(std::string_view(t).substr(0, colon)));
    if (word.empty()) throw RecordError(lineno, "synset line without a head word");
    std::string_view rest = std::string_view(t).substr(colon + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      lex.add(word, trim(rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
  }
  return lex;
}

SynonymLexicon SynonymLexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open synonym file " + path.string());
  return parse(in);
}

const SynonymLexicon& SynonymLexicon::builtin() {
  static const SynonymLexicon lex = [] {
    std::istringstream in{std::string(kBuiltinSynsets)};
    return parse(in);
  }();
  return lex;
}

void SynonymLexicon::add(std::string_view word, std::string_view synonym) {
  std::string syn = unicode::to_lower(trim(synonym));
  if (syn.empty()) return;
  auto& list = entries_[unicode::to_lower(word)];
  if (std::find(list.begin(), list.end(), syn) == list.end()) list.push_back(std::move(syn));
}

const std::vector<std::string>* SynonymLexicon::find(std::string_view word) const {
  auto it = entries_.find(word);
  return it == entries_.end() ? nullptr : &it->second;
}

std::vector<KeywordSet> default_keyword_sets() {
  std::vector<KeywordSet> sets;
  for (const auto& d : kDefaults) {
    KeywordSet ks;
    ks.indicator_id = d.id;
    for (auto w : d.keywords) ks.base_keywords.push_back(unicode::to_lower(w));
    sets.push_back(std::move(ks));
  }
  return sets;
}

std::vector<KeywordSet> load_keyword_sets(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw DataError("lexicon directory not found: " + dir.string());
  }
  auto sets = default_keyword_sets();
  for (auto& ks : sets) {
    const auto file = dir / override_file_name(ks.indicator_id);
    if (!std::filesystem::exists(file)) continue;
    std::ifstream in(file);
    if (!in) throw DataError("cannot open " + file.string());
    ks.base_keywords.clear();
    std::unordered_set<std::string> seen;
    std::string line;
    while (std::getline(in, line)) {
      const std::string t = trim(line);
      if (t.empty() || t.front() == '#') continue;
      push_unique(ks.base_keywords, seen, unicode::to_lower(t));
    }
    if (ks.base_keywords.empty()) throw DataError(file.string() + " lists no keywords");
  }
  return sets;
}

KeywordSet expand_synonyms(const KeywordSet& ks, const SynonymLexicon& synlex) {
  KeywordSet out;
  out.indicator_id = ks.indicator_id;
  out.base_keywords = ks.base_keywords;
  std::unordered_set<std::string> seen;
  for (const auto& base : ks.base_keywords) push_unique(out.expanded, seen, unicode::to_lower(base));
  for (const auto& base : ks.base_keywords) {
    const auto* syns = synlex.find(unicode::to_lower(base));
    if (!syns) continue;
    for (const auto& syn : *syns) {
      const auto tokens = textprep::tokenize_words(syn);
      if (tokens.size() != 1) continue;
      push_unique(out.expanded, seen, tokens.front().lower);
    }
  }
  return out;
}

KeywordSet finalize_stems(const KeywordSet& ks, const textprep::Stemmer& stemmer) {
  KeywordSet out = ks;
  out.expanded_stems.clear();
  const auto& words = ks.expanded.empty() ? ks.base_keywords : ks.expanded;
  for (const auto& w : words) {
    // single pass, exactly as tweet tokens are stemmed
    out.expanded_stems.insert(stemmer.stem(unicode::to_lower(w)));
  }
  return out;
}

std::vector<KeywordSet> prepare(std::vector<KeywordSet> sets, const SynonymLexicon& synlex,
                                const textprep::Stemmer& stemmer) {
  for (auto& ks : sets) ks = finalize_stems(expand_synonyms(ks, synlex), stemmer);
  return sets;
}

const KeywordSet& find_set(std::span<const KeywordSet> sets, IndicatorId id) {
  for (const auto& ks : sets) {
    if (ks.indicator_id == id) return ks;
  }
  throw UsageError("keyword set " + std::string(to_string(id)) + " missing");
}

std::size_t match_count(std::span<const std::string> stems, const KeywordSet& ks) {
  return static_cast<std::size_t>(std::count_if(stems.begin(), stems.end(), [&](const auto& s) {
    return ks.expanded_stems.contains(s);
  }));
}

std::size_t match_count(std::span<const textprep::WordToken> tokens, const KeywordSet& ks,
                        const textprep::Stemmer& stemmer) {
  std::size_t n = 0;
  for (const auto& t : tokens) {
    if (ks.expanded_stems.contains(stemmer.stem(t.lower))) ++n;
  }
  return n;
}

}  // namespace radrisk::lexicon
