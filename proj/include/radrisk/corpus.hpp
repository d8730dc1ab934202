#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace radrisk::corpus {

struct Tweet {
  std::string tweet_id;
  std::string user_id;
  std::string text;
  std::optional<std::string> timestamp;

  bool operator==(const Tweet&) const = default;
};

struct UserRecord {
  std::string user_id;
  std::optional<std::string> handle;
  std::vector<Tweet> tweets;

  bool operator==(const UserRecord&) const = default;
};

struct Dataset {
  std::string label;
  std::vector<UserRecord> users;

  std::size_t tweet_count() const;
  const UserRecord* find(std::string_view user_id) const;

  bool operator==(const Dataset&) const = default;
};

enum class StdevConvention { sample, population };

std::string_view to_string(StdevConvention c);

struct DatasetSummary {
  std::string label;
  std::size_t n_users = 0;
  std::size_t n_tweets = 0;
  double avg_tweets_per_user = 0.0;
  double stdev_tweets_per_user = 0.0;
  bool empty = false;  // no users: avg and stdev are reported as 0
  StdevConvention convention = StdevConvention::sample;
};

/// Column mapping for CSV ingestion. The defaults match the public pro-ISIS
/// tweet dump, whose author column is `username` and text column `tweets`.
struct CsvSchema {
  std::string user_column = "username";
  std::string text_column = "tweets";
  std::optional<std::string> tweet_id_column;
  std::optional<std::string> timestamp_column;
};

struct LoadOptions {
  std::string label;              // defaults to the file stem
  bool skip_bad_records = false;  // otherwise the first bad record aborts
  bool dedupe = false;            // drop repeated tweet ids within the dataset
};

/// What ingestion skipped, for the audit trail.
struct LoadReport {
  std::vector<std::string> skipped;  // one message per rejected record
  std::size_t duplicates_dropped = 0;
};

/// Groups tweets per user in first-seen order.
class DatasetBuilder {
 public:
  explicit DatasetBuilder(std::string label, bool dedupe = false);

  void add(Tweet tweet);
  /// Registers a user even if no tweet for it ever arrives.
  UserRecord& user(const std::string& user_id);

  std::size_t duplicates_dropped() const { return duplicates_; }
  Dataset finish() &&;

 private:
  Dataset ds_;
  bool dedupe_;
  std::size_t duplicates_ = 0;
  std::unordered_map<std::string, std::size_t> index_;
  std::unordered_set<std::string> seen_ids_;
};

Dataset load_csv(std::istream& in, const CsvSchema& schema = {}, const LoadOptions& options = {},
                 LoadReport* report = nullptr);
Dataset load_csv(const std::filesystem::path& path, const CsvSchema& schema = {},
                 const LoadOptions& options = {}, LoadReport* report = nullptr);

/// One JSON object per line with `user_id` and `text`; `tweet_id`,
/// `timestamp` and `handle` are optional. Blank lines are ignored.
Dataset load_jsonl(std::istream& in, const LoadOptions& options = {}, LoadReport* report = nullptr);
Dataset load_jsonl(const std::filesystem::path& path, const LoadOptions& options = {},
                   LoadReport* report = nullptr);

/// Chooses the reader from the extension: `.jsonl`/`.json` or CSV otherwise.
Dataset load_dataset(const std::filesystem::path& path, const CsvSchema& schema = {},
                     const LoadOptions& options = {}, LoadReport* report = nullptr);

void write_jsonl(std::ostream& out, const Dataset& ds);

DatasetSummary summarize(const Dataset& ds, StdevConvention convention = StdevConvention::sample);

}  // namespace radrisk::corpus
