#include "radrisk/acquisition.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <istream>
#include <ostream>
#include <thread>
#include <unordered_set>

#include <json.hpp>

#include "radrisk/error.hpp"

namespace radrisk::acquisition {

using nlohmann::json;

// --- account dumps --------------------------------------------------------

namespace {

constexpr std::size_t kMaxHandleLength = 15;

bool valid_handle(std::string_view h) {
  if (h.empty() || h.size() > kMaxHandleLength) return false;
  return std::all_of(h.begin(), h.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
  });
}

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + 32);
  }
  return out;
}

std::string_view trim_punct(std::string_view t) {
  constexpr std::string_view kPunct = ".,;:!?()[]{}<>\"'";
  while (!t.empty() && kPunct.find(t.front()) != std::string_view::npos) t.remove_prefix(1);
  while (!t.empty() && kPunct.find(t.back()) != std::string_view::npos) t.remove_suffix(1);
  return t;
}

// Handle from a profile URL, or empty if `t` is not one.
std::string_view handle_from_url(std::string_view t) {
  const std::string lower = lower_ascii(t);
  for (std::string_view host : {"twitter.com/", "x.com/"}) {
    const auto pos = lower.find(host);
    if (pos == std::string::npos) continue;
    // the host must start the token or follow "//" or a subdomain dot
    if (pos != 0 && lower[pos - 1] != '/' && lower[pos - 1] != '.') continue;
    std::string_view rest = t.substr(pos + host.size());
    if (!rest.empty() && rest.front() == '@') rest.remove_prefix(1);
    return rest.substr(0, rest.find_first_of("/?#"));
  }
  return {};
}

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  auto is_sep = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == ',' || c == ';' || c == '|'; };
  while (i < line.size()) {
    while (i < line.size() && is_sep(line[i])) ++i;
    std::size_t j = i;
    while (j < line.size() && !is_sep(line[j])) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

AccountDump parse_account_dump(std::string_view text) {
  AccountDump dump;
  std::unordered_set<std::string> seen;
  auto accept = [&](std::string_view h) {
    if (!valid_handle(h)) return;
    if (seen.insert(lower_ascii(h)).second) dump.handles.emplace_back(h);
  };

  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find('\n', start), text.size());
    const std::string_view line = text.substr(start, end - start);
    start = end + 1;

    const auto tokens = split_tokens(line);
    if (tokens.empty() || tokens.front().front() == '#') continue;
    for (std::string_view raw : tokens) {
      if (const auto from_url = handle_from_url(raw); !from_url.empty()) {
        accept(from_url);
        continue;
      }
      const std::string_view tok = trim_punct(raw);
      if (!tok.empty() && tok.front() == '@') {
        accept(trim_punct(tok.substr(1)));
      } else if (tokens.size() == 1) {
        accept(tok);
      }
    }
  }
  if (dump.handles.empty()) throw DataError("account dump contains no handles");
  return dump;
}

std::string join(const AccountDump& dump) {
  std::string out;
  for (const auto& h : dump.handles) {
    out += h;
    out += '\n';
  }
  return out;
}

// --- clocks and rate limiting --------------------------------------------

TimePoint SteadyClock::now() const {
  return std::chrono::time_point_cast<Duration>(std::chrono::steady_clock::now());
}

void SteadyClock::sleep_until(TimePoint t) { std::this_thread::sleep_until(t); }

TimePoint ManualClock::now() const {
  std::lock_guard lock(mu_);
  return now_;
}

void ManualClock::sleep_until(TimePoint t) {
  std::lock_guard lock(mu_);
  now_ = std::max(now_, t);
}

void ManualClock::advance(Duration d) {
  std::lock_guard lock(mu_);
  now_ += d;
}

RateLimiter::RateLimiter(Clock& clock, std::size_t per_window, Duration window)
    : clock_(clock), per_window_(per_window), window_(window) {
  if (per_window == 0 || window <= Duration::zero()) {
    throw UsageError("rate limiter needs a positive budget and window");
  }
}

TimePoint RateLimiter::acquire() {
  // Holding the lock while sleeping serialises waiters, which is what a
  // shared request budget needs anyway.
  std::lock_guard lock(mu_);
  TimePoint now = clock_.now();
  while (!recent_.empty() && recent_.front() + window_ <= now) recent_.pop_front();
  if (recent_.size() >= per_window_) {
    clock_.sleep_until(recent_.front() + window_);
    now = std::max(clock_.now(), recent_.front() + window_);
    while (!recent_.empty() && recent_.front() + window_ <= now) recent_.pop_front();
  }
  recent_.push_back(now);
  history_.push_back(now);
  return now;
}

std::vector<TimePoint> RateLimiter::grants() const {
  std::lock_guard lock(mu_);
  return history_;
}

// --- policy and page status ----------------------------------------------

void FetchPolicy::validate() const {
  if (max_tweets_per_user == 0 || max_tweets_per_user > kPlatformCap) {
    throw UsageError("max_tweets_per_user must be in 1.." + std::to_string(kPlatformCap));
  }
  if (page_size == 0 || requests_per_window == 0 || window_seconds.count() <= 0 ||
      retry_backoff_seconds.count() <= 0) {
    throw UsageError("fetch policy counts and durations must be positive");
  }
}

std::string_view to_string(PageStatus s) {
  switch (s) {
    case PageStatus::ok: return "ok";
    case PageStatus::not_found: return "not_found";
    case PageStatus::suspended: return "suspended";
    case PageStatus::rate_limited: return "rate_limited";
    case PageStatus::error: return "error";
  }
  return "error";
}

PageStatus page_status_from_string(std::string_view s) {
  for (auto st : {PageStatus::ok, PageStatus::not_found, PageStatus::suspended,
                  PageStatus::rate_limited, PageStatus::error}) {
    if (to_string(st) == s) return st;
  }
  throw DataError("unknown page status '" + std::string(s) + "'");
}

std::string_view to_string(FetchStatus s) {
  switch (s) {
    case FetchStatus::complete: return "complete";
    case FetchStatus::unavailable: return "unavailable";
    case FetchStatus::partial: return "partial";
  }
  return "partial";
}

// --- replay ---------------------------------------------------------------

namespace {

json request_to_json(const PageRequest& r) {
  return {{"handle", r.handle},
          {"cursor", r.cursor ? json(*r.cursor) : json(nullptr)},
          {"count", r.count}};
}

json page_to_json(const Page& p) {
  json tweets = json::array();
  for (const auto& t : p.tweets) {
    json jt = {{"tweet_id", t.tweet_id}, {"text", t.text}};
    if (t.timestamp) jt["timestamp"] = *t.timestamp;
    tweets.push_back(std::move(jt));
  }
  json out = {{"status", to_string(p.status)}, {"tweets", std::move(tweets)}};
  out["next_cursor"] = p.next_cursor ? json(*p.next_cursor) : json(nullptr);
  if (p.retry_after_seconds) out["retry_after"] = *p.retry_after_seconds;
  if (!p.message.empty()) out["message"] = p.message;
  return out;
}

Page page_from_json(const json& j, const std::string& handle) {
  Page p;
  p.status = page_status_from_string(j.value("status", std::string("ok")));
  if (j.contains("tweets")) {
    for (const auto& jt : j.at("tweets")) {
      corpus::Tweet t;
      t.tweet_id = jt.at("tweet_id").is_string() ? jt.at("tweet_id").get<std::string>()
                                                 : jt.at("tweet_id").dump();
      t.user_id = handle;
      t.text = jt.at("text").get<std::string>();
      if (jt.contains("timestamp") && jt["timestamp"].is_string()) t.timestamp = jt["timestamp"];
      p.tweets.push_back(std::move(t));
    }
  }
  if (j.contains("next_cursor") && j["next_cursor"].is_string()) {
    p.next_cursor = j["next_cursor"].get<std::string>();
  }
  if (j.contains("retry_after") && j["retry_after"].is_number()) {
    p.retry_after_seconds = j["retry_after"].get<double>();
  }
  p.message = j.value("message", std::string());
  return p;
}

}  // namespace

ReplaySource::ReplaySource(ReplaySource&& other) noexcept {
  std::lock_guard lock(other.mu_);
  responses_ = std::move(other.responses_);
  requests_ = std::move(other.requests_);
}

ReplaySource ReplaySource::from_stream(std::istream& in) {
  ReplaySource src;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json entry = json::parse(line);
      const json& req = entry.at("request");
      const std::string handle = req.at("handle").get<std::string>();
      const std::string cursor =
          req.contains("cursor") && req["cursor"].is_string() ? req["cursor"].get<std::string>() : "";
      src.responses_[{lower_ascii(handle), cursor}].push_back(
          page_from_json(entry.at("response"), handle));
    } catch (const json::exception& e) {
      throw RecordError(lineno, std::string("bad transcript entry: ") + e.what());
    }
  }
  return src;
}

ReplaySource ReplaySource::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open transcript " + path.string());
  return from_stream(in);
}

Page ReplaySource::fetch_page(const PageRequest& request) {
  std::lock_guard lock(mu_);
  requests_.push_back(request);
  auto it = responses_.find({lower_ascii(request.handle), request.cursor.value_or("")});
  if (it == responses_.end() || it->second.empty()) {
    Page p;
    p.status = PageStatus::error;
    p.message = "no recorded response for this request";
    return p;
  }
  Page p = std::move(it->second.front());
  it->second.pop_front();
  for (auto& t : p.tweets) t.user_id = request.handle;
  return p;
}

std::vector<PageRequest> ReplaySource::requests() const {
  std::lock_guard lock(mu_);
  return requests_;
}

RecordingSource::RecordingSource(TimelineSource& inner, std::ostream& transcript)
    : inner_(inner), out_(transcript) {}

Page RecordingSource::fetch_page(const PageRequest& request) {
  Page page = inner_.fetch_page(request);
  std::lock_guard lock(mu_);
  out_ << json{{"request", request_to_json(request)}, {"response", page_to_json(page)}}.dump(
              -1, ' ', false, json::error_handler_t::replace)
       << '\n';
  return page;
}

// --- fetching -------------------------------------------------------------

FetchResult fetch_user_timeline(TimelineSource& source, const std::string& handle,
                                const FetchPolicy& policy, RateLimiter& limiter, Clock& clock) {
  policy.validate();
  if (handle.empty()) throw UsageError("empty handle");

  FetchResult result;
  result.user.user_id = handle;
  result.user.handle = handle;
  auto& tweets = result.user.tweets;

  PageRequest request{handle, std::nullopt, 0};
  std::size_t retries_here = 0;
  while (tweets.size() < policy.max_tweets_per_user) {
    request.count = std::min(policy.page_size, policy.max_tweets_per_user - tweets.size());
    limiter.acquire();
    ++result.requests;
    Page page = source.fetch_page(request);

    if (page.status == PageStatus::rate_limited) {
      ++result.rate_limit_retries;
      if (++retries_here > policy.max_retries) {
        result.status = FetchStatus::partial;
        result.note = "rate limit retries exhausted";
        break;
      }
      const auto wait = page.retry_after_seconds
                            ? std::chrono::duration_cast<Duration>(
                                  std::chrono::duration<double>(*page.retry_after_seconds))
                            : std::chrono::duration_cast<Duration>(policy.retry_backoff_seconds);
      clock.sleep_for(wait);
      continue;
    }
    retries_here = 0;

    if (page.status == PageStatus::not_found || page.status == PageStatus::suspended) {
      result.status = tweets.empty() ? FetchStatus::unavailable : FetchStatus::partial;
      result.note = std::string(to_string(page.status));
      if (!page.message.empty()) result.note += ": " + page.message;
      break;
    }
    if (page.status == PageStatus::error) {
      result.status = FetchStatus::partial;
      result.note = page.message.empty() ? "source error" : page.message;
      break;
    }

    for (auto& t : page.tweets) {
      if (tweets.size() >= policy.max_tweets_per_user) break;
      t.user_id = handle;
      tweets.push_back(std::move(t));
    }
    if (page.tweets.empty() || !page.next_cursor) break;
    request.cursor = page.next_cursor;
  }
  result.n_tweets = tweets.size();
  return result;
}

FetchRun fetch_all(TimelineSource& source, const AccountDump& dump, const FetchPolicy& policy,
                   Clock& clock, std::size_t workers) {
  policy.validate();
  RateLimiter limiter(clock, policy.requests_per_window,
                      std::chrono::duration_cast<Duration>(policy.window_seconds));
  std::vector<FetchResult> results(dump.handles.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr failure;
  auto work = [&] {
    for (std::size_t i = next++; !failed && i < dump.handles.size(); i = next++) {
      try {
        results[i] = fetch_user_timeline(source, dump.handles[i], policy, limiter, clock);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  workers = std::max<std::size_t>(1, std::min(workers, dump.handles.size()));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  FetchRun run;
  corpus::DatasetBuilder builder("fetched");
  for (auto& r : results) {
    auto& user = builder.user(r.user.user_id);
    user.handle = r.user.handle;
    for (auto& t : r.user.tweets) builder.add(std::move(t));
    r.user.tweets.clear();
    run.audit.push_back(std::move(r));
  }
  run.dataset = std::move(builder).finish();
  return run;
}

void write_audit_jsonl(std::ostream& out, const std::vector<FetchResult>& audit) {
  for (const auto& r : audit) {
    nlohmann::ordered_json j = {{"handle", r.user.handle.value_or(r.user.user_id)},
              {"status", to_string(r.status)},
              {"n_tweets", r.n_tweets},
              {"requests", r.requests},
              {"rate_limit_retries", r.rate_limit_retries}};
    if (!r.note.empty()) j["note"] = r.note;
    out << j.dump() << '\n';
  }
}

}  // namespace radrisk::acquisition
