#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "radrisk/error.hpp"
#include "radrisk/lexicon.hpp"
#include "radrisk/textprep.hpp"
#include "radrisk/unicode.hpp"

using namespace radrisk;
using namespace radrisk::lexicon;

namespace {

KeywordSet with_base(IndicatorId id, std::vector<std::string> base) {
  KeywordSet ks;
  ks.indicator_id = id;
  ks.base_keywords = std::move(base);
  return ks;
}

SynonymLexicon lex_of(const std::string& text) {
  std::istringstream in(text);
  return SynonymLexicon::parse(in);
}

std::vector<std::string> words(std::initializer_list<const char*> ws) { return {ws.begin(), ws.end()}; }

const KeywordSet& prepared(IndicatorId id) {
  static const auto sets = prepare(default_keyword_sets(), SynonymLexicon::builtin());
  return find_set(sets, id);
}

}  // namespace

TEST_CASE("default keyword sets") {
  const auto sets = default_keyword_sets();
  REQUIRE(sets.size() == 5);
  CHECK(find_set(sets, IndicatorId::I1_SWEAR).base_keywords == words({"shit", "crap", "damn", "fuck"}));
  const auto& i5 = find_set(sets, IndicatorId::I5_PRO_JIHAD).base_keywords;
  CHECK(std::find(i5.begin(), i5.end(), "caliphate") != i5.end());
  CHECK(find_set(sets, IndicatorId::I1_NEGATIVE).base_keywords.size() == 7);
  CHECK(find_set(sets, IndicatorId::I3_DISCRIMINATION).base_keywords.size() == 7);
  CHECK(find_set(sets, IndicatorId::I4_ANTI_WESTERN).base_keywords.size() == 13);
  CHECK(i5.size() == 11);
  for (const auto& ks : sets) {
    CHECK_FALSE(ks.finalized());
    for (const auto& w : ks.base_keywords) CHECK(unicode::to_lower(w) == w);
  }
}

TEST_CASE("indicator names round trip") {
  for (auto id : kAllIndicators) CHECK(indicator_from_string(to_string(id)) == id);
  CHECK_FALSE(indicator_from_string("I9"));
}

TEST_CASE("synonym expansion") {
  const auto lex = lex_of(
      "# test lexicon\n"
      "hate: detest, abhor\n"
      "fight: combat, struggle, put up a fight\n"
      "Fight: Combat, scrap\n");
  CHECK(expand_synonyms(with_base(IndicatorId::I1_NEGATIVE, {"hate"}), lex).expanded ==
        words({"hate", "detest", "abhor"}));
  CHECK(expand_synonyms(with_base(IndicatorId::I4_ANTI_WESTERN, {"kuffar"}), lex).expanded ==
        words({"kuffar"}));
  CHECK(expand_synonyms(with_base(IndicatorId::I5_PRO_JIHAD, {"fight"}), lex).expanded ==
        words({"fight", "combat", "struggle", "scrap"}));
}

TEST_CASE("builtin synonym snapshot") {
  const auto& lex = SynonymLexicon::builtin();
  CHECK(lex.size() > 0);
  const auto* hate = lex.find("hate");
  REQUIRE(hate);
  CHECK(std::find(hate->begin(), hate->end(), "detest") != hate->end());
  // every default keyword with an entry expands to at least itself
  for (const auto& ks : default_keyword_sets()) {
    const auto e = expand_synonyms(ks, lex);
    CHECK(e.expanded.size() >= ks.base_keywords.size());
  }
}

TEST_CASE("finalize_stems") {
  auto stems_of = [](std::vector<std::string> ws) {
    KeywordSet ks = with_base(IndicatorId::I5_PRO_JIHAD, {});
    ks.expanded = std::move(ws);
    return finalize_stems(ks).expanded_stems;
  };
  CHECK(stems_of({"weapon", "weapons"}) == std::set<std::string>{"weapon"});
  CHECK(stems_of({"hate", "hating"}) == std::set<std::string>{"hate"});
  CHECK(stems_of({"us"}) == std::set<std::string>{"us"});
  // unexpanded sets stem their base keywords
  CHECK(finalize_stems(with_base(IndicatorId::I1_SWEAR, {"Damn"})).expanded_stems ==
        std::set<std::string>{"damn"});
}

TEST_CASE("match_count") {
  const auto& neg = prepared(IndicatorId::I1_NEGATIVE);
  CHECK(match_count(textprep::tokenize_words("i hate hating"), neg) == 2);
  CHECK(match_count(std::vector<textprep::WordToken>{}, neg) == 0);
  CHECK(match_count(textprep::tokenize_words("caliphates"), prepared(IndicatorId::I5_PRO_JIHAD)) == 1);
  const std::vector<std::string> stems{"hate", "weapon", "hate"};
  CHECK(match_count(stems, neg) == 2);
}

TEST_CASE("lexicon invariants") {
  const auto& lex = SynonymLexicon::builtin();
  textprep::PorterStemmer stemmer;
  for (const auto& base : default_keyword_sets()) {
    const auto e = expand_synonyms(base, lex);
    CAPTURE(to_string(base.indicator_id));
    for (const auto& w : base.base_keywords) {
      CHECK(std::find(e.expanded.begin(), e.expanded.end(), w) != e.expanded.end());
    }
    const auto f = finalize_stems(e);
    CHECK(finalize_stems(f) == f);
    for (const auto& s : f.expanded_stems) CHECK(unicode::to_lower(s) == s);
    for (const auto& w : base.base_keywords) CHECK(f.expanded_stems.count(stemmer.stem(w)) == 1);

    // a tweet made only of this set's keywords matches on every token
    std::string tweet;
    for (const auto& w : base.base_keywords) tweet += w + " ";
    const auto toks = textprep::tokenize_words(tweet);
    CHECK(match_count(toks, f) == toks.size());
  }
}

TEST_CASE("match_count is additive over concatenation") {
  const auto& aw = prepared(IndicatorId::I4_ANTI_WESTERN);
  static const std::vector<std::string> pool = {"west",  "people", "hello", "the",   "bloody", "us",
                                                "sucks", "hated",  "rain",  "kafir", "impure", "x"};
  std::mt19937_64 rng(9);
  for (int i = 0; i < 500; ++i) {
    std::vector<std::string> a;
    std::vector<std::string> b;
    for (auto n = rng() % 8; n > 0; --n) a.push_back(pool[rng() % pool.size()]);
    for (auto n = rng() % 8; n > 0; --n) b.push_back(pool[rng() % pool.size()]);
    std::vector<std::string> ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    textprep::PorterStemmer st;
    auto stem_all = [&](std::vector<std::string> v) {
      for (auto& w : v) w = st.stem(w);
      return v;
    };
    CHECK(match_count(stem_all(ab), aw) == match_count(stem_all(a), aw) + match_count(stem_all(b), aw));
  }
}

TEST_CASE("keyword files override the defaults") {
  const auto dir = std::filesystem::temp_directory_path() / "radrisk_lexicon_dir";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / override_file_name(IndicatorId::I1_SWEAR)) << "# custom\nHeck\n\ndarn\nheck\n";
  const auto sets = load_keyword_sets(dir);
  CHECK(find_set(sets, IndicatorId::I1_SWEAR).base_keywords == words({"heck", "darn"}));
  CHECK(find_set(sets, IndicatorId::I5_PRO_JIHAD).base_keywords ==
        find_set(default_keyword_sets(), IndicatorId::I5_PRO_JIHAD).base_keywords);
  std::ofstream(dir / override_file_name(IndicatorId::I1_SWEAR)) << "# nothing\n";
  CHECK_THROWS_AS(load_keyword_sets(dir), DataError);
  std::filesystem::remove_all(dir);
  CHECK_THROWS_AS(load_keyword_sets(dir), DataError);
}
