#pragma once

#include <chrono>
#include <cstddef>
#include <deque>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "radrisk/corpus.hpp"

namespace radrisk::acquisition {

// --- account dumps --------------------------------------------------------

struct AccountDump {
  std::vector<std::string> handles;
};

/// Extracts screen names from a pasted account list.
///
/// Lines starting with '#' and blank lines are ignored. On every other line,
/// `@name` tokens and profile URLs (twitter.com/name, x.com/name) are
/// extracted; a line holding a single bare token is taken as a handle too.
/// Handles must satisfy the platform rule `[A-Za-z0-9_]{1,15}`. Duplicates are
/// compared case-insensitively and the first spelling is kept.
///
/// Throws DataError when nothing could be extracted.
AccountDump parse_account_dump(std::string_view text);

/// One handle per line; parse_account_dump(join(d)) == d.
std::string join(const AccountDump& dump);

// --- clocks and rate limiting --------------------------------------------

using Duration = std::chrono::nanoseconds;
using TimePoint = std::chrono::time_point<std::chrono::steady_clock, Duration>;

class Clock {
 public:
  virtual ~Clock() = default;
  virtual TimePoint now() const = 0;
  virtual void sleep_until(TimePoint t) = 0;
  void sleep_for(Duration d) { sleep_until(now() + d); }
};

class SteadyClock final : public Clock {
 public:
  TimePoint now() const override;
  void sleep_until(TimePoint t) override;
};

/// Simulated time: sleeping advances the clock instantly.
class ManualClock final : public Clock {
 public:
  TimePoint now() const override;
  void sleep_until(TimePoint t) override;
  void advance(Duration d);

 private:
  mutable std::mutex mu_;
  TimePoint now_{};
};

/// Central token-granting component. Grants at most `per_window` requests in
/// any half-open interval of length `window`; callers block in acquire()
/// until a token is available. Safe to share between fetch workers.
class RateLimiter {
 public:
  RateLimiter(Clock& clock, std::size_t per_window, Duration window);

  /// Blocks until a request may be sent; returns the grant time.
  TimePoint acquire();
  std::vector<TimePoint> grants() const;

 private:
  Clock& clock_;
  std::size_t per_window_;
  Duration window_;
  mutable std::mutex mu_;
  std::deque<TimePoint> recent_;
  std::vector<TimePoint> history_;
};

// --- timeline sources -----------------------------------------------------

struct FetchPolicy {
  static constexpr std::size_t kPlatformCap = 3200;  // newest tweets retrievable per user

  std::size_t max_tweets_per_user = kPlatformCap;
  std::size_t page_size = 200;
  std::size_t requests_per_window = 900;
  std::chrono::seconds window_seconds{15 * 60};
  std::chrono::seconds retry_backoff_seconds{60};
  std::size_t max_retries = 5;

  /// Throws UsageError when a count is zero or the cap exceeds the platform's.
  void validate() const;
};

struct PageRequest {
  std::string handle;
  std::optional<std::string> cursor;
  std::size_t count = 200;

  bool operator==(const PageRequest&) const = default;
};

enum class PageStatus { ok, not_found, suspended, rate_limited, error };

std::string_view to_string(PageStatus s);
PageStatus page_status_from_string(std::string_view s);

struct Page {
  PageStatus status = PageStatus::ok;
  std::vector<corpus::Tweet> tweets;  // newest first
  std::optional<std::string> next_cursor;
  std::optional<double> retry_after_seconds;
  std::string message;
};

/// Paged timeline contract: one request returns up to `count` tweets, newest
/// first, plus a cursor for the next older page.
class TimelineSource {
 public:
  virtual ~TimelineSource() = default;
  virtual Page fetch_page(const PageRequest& request) = 0;
};

/// Serves responses recorded in a transcript: JSONL lines of
/// `{"request": {...}, "response": {...}}`. Responses for the same
/// (handle, cursor) are replayed in file order, so a rate-limit response
/// followed by a success replays as exactly that. Thread-safe.
class ReplaySource final : public TimelineSource {
 public:
  static ReplaySource from_file(const std::filesystem::path& path);
  static ReplaySource from_stream(std::istream& in);

  Page fetch_page(const PageRequest& request) override;
  std::vector<PageRequest> requests() const;

  ReplaySource(ReplaySource&& other) noexcept;

 private:
  ReplaySource() = default;
  using Key = std::pair<std::string, std::string>;
  mutable std::mutex mu_;
  std::map<Key, std::deque<Page>> responses_;
  std::vector<PageRequest> requests_;
};

/// Decorator that appends every exchange to a transcript replayable by
/// ReplaySource.
class RecordingSource final : public TimelineSource {
 public:
  RecordingSource(TimelineSource& inner, std::ostream& transcript);
  Page fetch_page(const PageRequest& request) override;

 private:
  TimelineSource& inner_;
  std::ostream& out_;
  std::mutex mu_;
};

/// Live source against a v1.1-style `statuses/user_timeline.json` endpoint.
/// Paging uses `max_id`: the cursor is the smallest id seen minus one.
class HttpTimelineSource final : public TimelineSource {
 public:
  /// `base_url` like "https://api.twitter.com/1.1". The bearer token, when
  /// non-empty, is sent as an Authorization header.
  HttpTimelineSource(std::string base_url, std::string bearer_token);

  /// Token from RADRISK_BEARER_TOKEN, falling back to TWITTER_BEARER_TOKEN.
  static std::string bearer_token_from_env();

  Page fetch_page(const PageRequest& request) override;

 private:
  std::string scheme_host_port_;
  std::string path_prefix_;
  std::string bearer_token_;
};

/// Parses a user_timeline JSON array into a page. Exposed for testing.
Page parse_timeline_response(std::string_view body, const std::string& handle);

// --- fetching -------------------------------------------------------------

enum class FetchStatus { complete, unavailable, partial };

std::string_view to_string(FetchStatus s);

struct FetchResult {
  corpus::UserRecord user;
  FetchStatus status = FetchStatus::complete;
  std::size_t n_tweets = 0;
  std::size_t requests = 0;
  std::size_t rate_limit_retries = 0;
  std::string note;
};

/// Pages through one user's timeline, newest first, stopping at the policy
/// cap. Unavailable accounts come back empty and flagged; exhausting the
/// retry budget on rate limiting returns what was collected, flagged partial.
FetchResult fetch_user_timeline(TimelineSource& source, const std::string& handle,
                                const FetchPolicy& policy, RateLimiter& limiter, Clock& clock);

struct FetchRun {
  corpus::Dataset dataset;        // handle is the user key
  std::vector<FetchResult> audit;  // one entry per handle, dump order, tweets cleared
};

/// Fetches every handle in the dump using `workers` threads that share the
/// single rate limiter. The source must be thread-safe when workers > 1.
FetchRun fetch_all(TimelineSource& source, const AccountDump& dump, const FetchPolicy& policy,
                   Clock& clock, std::size_t workers = 1);

void write_audit_jsonl(std::ostream& out, const std::vector<FetchResult>& audit);

}  // namespace radrisk::acquisition
