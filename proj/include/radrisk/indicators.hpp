#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "radrisk/corpus.hpp"
#include "radrisk/lexicon.hpp"
#include "radrisk/porter.hpp"

namespace radrisk::indicators {

/// containment: a tweet counts once if any token matches.
/// occurrence: every matching token counts, so ratios may exceed 1.
enum class RatioMode { containment, occurrence };

std::string_view to_string(RatioMode m);
std::optional<RatioMode> ratio_mode_from_string(std::string_view s);

struct UserMetrics {
  std::string user_id;
  std::size_t n_tweets = 0;
  double swearing_ratio = 0.0;
  double negative_ratio = 0.0;
  double caps_ratio = 0.0;
  double ellipsis_ratio = 0.0;
  double median_tweet_length = 0.0;  // code points of cleaned text
  double discrimination_ratio = 0.0;
  double anti_western_ratio = 0.0;
  double pro_jihadism_ratio = 0.0;
  bool caps_undefined = false;  // no sentence survived cleaning

  bool operator==(const UserMetrics&) const = default;
};

/// Column names of the metrics table, in order, after user_id and n_tweets.
inline constexpr std::array<std::string_view, 8> kMetricNames = {
    "swearing", "negative", "caps", "ellipsis", "median_len", "discrimination", "anti_western",
    "pro_jihad"};

bool is_metric_name(std::string_view name);
/// Throws UsageError listing the valid names.
double metric_value(const UserMetrics& m, std::string_view name);
std::vector<double> metric_column(std::span<const UserMetrics> rows, std::string_view name);

/// Cleaned tweet broken down once for all metrics.
struct ProcessedTweet {
  std::size_t length = 0;  // code points of the cleaned text
  std::size_t n_sentences = 0;
  std::size_t n_caps_sentences = 0;
  bool has_ellipsis = false;
  std::vector<std::string> stems;
};

ProcessedTweet process_tweet(std::string_view raw,
                             const textprep::Stemmer& stemmer = textprep::PorterStemmer());

/// All functions below throw UndefinedMetricError for a user with no tweets.
double keyword_tweet_ratio(const corpus::UserRecord& user, const lexicon::KeywordSet& ks,
                           RatioMode mode = RatioMode::containment);
double ellipsis_ratio(const corpus::UserRecord& user);
double median_length(const corpus::UserRecord& user);
/// Fully capitalised sentences over all sentences. A user with no sentences
/// gets 0 and `*undefined` is set.
double caps_ratio(const corpus::UserRecord& user, bool* undefined = nullptr);

/// `sets` must hold the five finalized keyword sets.
UserMetrics compute_user_metrics(const corpus::UserRecord& user,
                                 std::span<const lexicon::KeywordSet> sets,
                                 RatioMode mode = RatioMode::containment);

/// Metrics for every user with at least one tweet, sorted by user_id.
/// `threads` = 0 picks the hardware concurrency.
std::vector<UserMetrics> compute_dataset_metrics(const corpus::Dataset& ds,
                                                 std::span<const lexicon::KeywordSet> sets,
                                                 RatioMode mode = RatioMode::containment,
                                                 unsigned threads = 0);

void write_metrics_csv(std::ostream& out, std::span<const UserMetrics> rows);
/// Reads a table written by write_metrics_csv. Extra columns are ignored;
/// missing metric columns read as NaN. Throws DataError on bad headers or values.
std::vector<UserMetrics> read_metrics_csv(std::istream& in);
std::vector<UserMetrics> read_metrics_csv(const std::filesystem::path& path);

}  // namespace radrisk::indicators
