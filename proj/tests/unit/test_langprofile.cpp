#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "radrisk/langprofile.hpp"

using namespace radrisk;
using namespace radrisk::langprofile;

namespace {

const std::string kArabic = "\xD9\x85\xD8\xB1\xD8\xAD\xD8\xA8\xD8\xA7";  // marhaba
const std::string kArabic2 = kArabic + " \xD8\xA8\xD9\x83\xD9\x85";    // marhaba bikum
const std::string kCyrillic = "\xD0\xBF\xD1\x80\xD0\xB8\xD0\xB2\xD0\xB5\xD1\x82";

std::optional<std::string> classify(const std::string& s) { return classify_script(textprep::clean_message(s)); }

corpus::Dataset dataset(const std::vector<std::string>& texts) {
  corpus::DatasetBuilder b("langs");
  for (std::size_t i = 0; i < texts.size(); ++i) {
    b.add({std::to_string(i), "u" + std::to_string(i % 7), texts[i], std::nullopt});
  }
  return std::move(b).finish();
}

}  // namespace

TEST_CASE("script of single characters") {
  CHECK(script_of(U'a') == "Latin");
  CHECK(script_of(U'é') == "Latin");
  CHECK(script_of(U'ж') == "Cyrillic");
  CHECK(script_of(U'م') == "Arabic");
  CHECK(script_of(U'क') == "Devanagari");
  CHECK(script_of(U'漢') == "Han");
  CHECK_FALSE(script_of(U'7'));
  CHECK_FALSE(script_of(U'!'));
  CHECK_FALSE(script_of(U'\U0001F600'));
}

TEST_CASE("classify_script") {
  CHECK(classify(kArabic2) == "Arabic");
  CHECK(classify(kCyrillic) == "Cyrillic");
  CHECK(classify("hi " + kArabic + " " + kArabic) == "Arabic");
  CHECK(classify("hello world") == "Latin");
  CHECK_FALSE(classify("ab \xD8\xA8\xD9\x83"));  // two letters each
  CHECK_FALSE(classify("123 !!! \xF0\x9F\x98\x80"));
  CHECK_FALSE(classify(""));
  // only the cleaned text counts
  CHECK(classify(kArabic + " https://t.co/abcdefghijk @someone") == "Arabic");
}

TEST_CASE("classification ignores inserted digits and punctuation") {
  static const std::vector<std::string> samples = {kArabic2, kCyrillic, "hello", "hi " + kArabic, "ab \xD8\xA8\xD9\x83", "?"};
  static const std::vector<std::string> noise = {"1", "2024", "!", "?", ",", "...", "#", "-", "\xD9\xA3"};
  std::mt19937_64 rng(12);
  for (const auto& s : samples) {
    const auto expected = classify(s);
    for (int i = 0; i < 50; ++i) {
      std::string t = s;
      for (int k = 0; k < 3; ++k) {
        // insert only at code point boundaries
        std::size_t pos = rng() % (t.size() + 1);
        while (pos < t.size() && (static_cast<unsigned char>(t[pos]) & 0xC0) == 0x80) ++pos;
        t.insert(pos, noise[rng() % noise.size()]);
      }
      CAPTURE(t);
      CHECK(classify(t) == expected);
    }
  }
}

TEST_CASE("script distribution") {
  std::vector<std::string> texts(9, kArabic2);
  texts.push_back("hello there");
  const auto d = script_distribution(dataset(texts));
  REQUIRE(d.entries.size() == 2);
  CHECK(d.entries[0].first == "Arabic");
  CHECK(d.entries[0].second == 90.0);
  CHECK(d.percentage("Latin") == 10.0);
  CHECK_FALSE(d.percentage("Han"));
  CHECK(d.n_classified == 10);
  CHECK_FALSE(d.empty);

  std::ostringstream out;
  write_csv(out, d);
  CHECK(out.str() == "script,percentage\nArabic,90.00\nLatin,10.00\n");
}

TEST_CASE("degenerate distributions") {
  const auto emoji = script_distribution(dataset({"\xF0\x9F\x98\x80", "\xF0\x9F\x94\xA5\xF0\x9F\x94\xA5", "!!"}));
  CHECK(emoji.empty);
  CHECK(emoji.n_classified == 0);
  CHECK(emoji.n_unclassified == 3);
  CHECK(emoji.entries.empty());
  CHECK(script_distribution(corpus::Dataset{}).empty);
}

TEST_CASE("percentages sum to 100 and ignore tweet order") {
  static const std::vector<std::string> pool = {kArabic2, kCyrillic, "hello", "\xE6\xBC\xA2\xE5\xAD\x97",
                                                "\xE0\xA4\xA8\xE0\xA4\xAE", "??", "x \xD0\xB6\xD0\xB6"};
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<std::string> texts;
    for (auto n = 1 + rng() % 60; n > 0; --n) texts.push_back(pool[rng() % pool.size()]);
    const auto d = script_distribution(dataset(texts));
    if (d.n_classified > 0) {
      double sum = 0.0;
      for (const auto& e : d.entries) sum += e.second;
      CHECK(std::abs(sum - 100.0) < 0.01);
      CHECK(std::is_sorted(d.entries.begin(), d.entries.end(),
                           [](const auto& a, const auto& b) { return a.second > b.second; }));
    }
    std::shuffle(texts.begin(), texts.end(), rng);
    CHECK(script_distribution(dataset(texts)).entries == d.entries);
  }
}

TEST_CASE("custom detectors plug in") {
  struct Constant final : ScriptDetector {
    std::optional<std::string> classify(const textprep::CleanText&) const override { return "Klingon"; }
  };
  const auto d = script_distribution(dataset({"a", "b"}), Constant{});
  REQUIRE(d.entries.size() == 1);
  CHECK(d.entries[0] == std::pair<std::string, double>{"Klingon", 100.0});
}
