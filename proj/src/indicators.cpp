#include "radrisk/indicators.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <thread>

#include <fmt/format.h>

#include "radrisk/csv.hpp"
#include "radrisk/error.hpp"
#include "radrisk/stats.hpp"
#include "radrisk/textprep.hpp"
#include "radrisk/unicode.hpp"

namespace radrisk::indicators {

using lexicon::IndicatorId;

namespace {

void require_tweets(const corpus::UserRecord& user) {
  if (user.tweets.empty()) {
    throw UndefinedMetricError("user " + user.user_id + " has no tweets");
  }
}

std::vector<ProcessedTweet> process_all(const corpus::UserRecord& user,
                                        const textprep::Stemmer& stemmer) {
  std::vector<ProcessedTweet> out;
  out.reserve(user.tweets.size());
  for (const auto& t : user.tweets) out.push_back(process_tweet(t.text, stemmer));
  return out;
}

double keyword_ratio(std::span<const ProcessedTweet> tweets, const lexicon::KeywordSet& ks,
                     RatioMode mode) {
  std::size_t hits = 0;
  for (const auto& t : tweets) {
    const auto n = lexicon::match_count(t.stems, ks);
    hits += mode == RatioMode::containment ? (n > 0 ? 1 : 0) : n;
  }
  return static_cast<double>(hits) / static_cast<double>(tweets.size());
}

double ellipsis_of(std::span<const ProcessedTweet> tweets) {
  const auto n = std::count_if(tweets.begin(), tweets.end(),
                               [](const auto& t) { return t.has_ellipsis; });
  return static_cast<double>(n) / static_cast<double>(tweets.size());
}

double median_of(std::span<const ProcessedTweet> tweets) {
  std::vector<double> lengths;
  lengths.reserve(tweets.size());
  for (const auto& t : tweets) lengths.push_back(static_cast<double>(t.length));
  return stats::median(lengths);
}

double caps_of(std::span<const ProcessedTweet> tweets, bool* undefined) {
  std::size_t sentences = 0;
  std::size_t caps = 0;
  for (const auto& t : tweets) {
    sentences += t.n_sentences;
    caps += t.n_caps_sentences;
  }
  if (undefined) *undefined = sentences == 0;
  if (sentences == 0) return 0.0;
  return static_cast<double>(caps) / static_cast<double>(sentences);
}

double parse_number(const std::string& field, std::size_t line, std::string_view column) {
  double v = 0.0;
  const char* first = field.data();
  const char* last = first + field.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw RecordError(line, fmt::format("column {}: '{}' is not a number", column, field));
  }
  return v;
}

}  // namespace

std::string_view to_string(RatioMode m) {
  return m == RatioMode::containment ? "containment" : "occurrence";
}

std::optional<RatioMode> ratio_mode_from_string(std::string_view s) {
  if (s == "containment") return RatioMode::containment;
  if (s == "occurrence") return RatioMode::occurrence;
  return std::nullopt;
}

bool is_metric_name(std::string_view name) {
  return std::find(kMetricNames.begin(), kMetricNames.end(), name) != kMetricNames.end();
}

double metric_value(const UserMetrics& m, std::string_view name) {
  if (name == "swearing") return m.swearing_ratio;
  if (name == "negative") return m.negative_ratio;
  if (name == "caps") return m.caps_ratio;
  if (name == "ellipsis") return m.ellipsis_ratio;
  if (name == "median_len") return m.median_tweet_length;
  if (name == "discrimination") return m.discrimination_ratio;
  if (name == "anti_western") return m.anti_western_ratio;
  if (name == "pro_jihad") return m.pro_jihadism_ratio;
  throw UsageError(fmt::format("unknown metric '{}'; valid metrics: {}", name,
                               fmt::join(kMetricNames, ", ")));
}

std::vector<double> metric_column(std::span<const UserMetrics> rows, std::string_view name) {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(metric_value(r, name));
  return out;
}

ProcessedTweet process_tweet(std::string_view raw, const textprep::Stemmer& stemmer) {
  ProcessedTweet p;
  const auto clean = textprep::clean_message(raw);
  p.length = unicode::length(clean.text);
  for (const auto& s : textprep::split_sentences(clean)) {
    ++p.n_sentences;
    if (textprep::is_fully_capitalized(s)) ++p.n_caps_sentences;
    if (textprep::detect_ellipsis(s)) p.has_ellipsis = true;
    for (auto& tok : textprep::tokenize_words(s)) p.stems.push_back(stemmer.stem(tok.lower));
  }
  return p;
}

double keyword_tweet_ratio(const corpus::UserRecord& user, const lexicon::KeywordSet& ks,
                           RatioMode mode) {
  require_tweets(user);
  return keyword_ratio(process_all(user, textprep::PorterStemmer()), ks, mode);
}

double ellipsis_ratio(const corpus::UserRecord& user) {
  require_tweets(user);
  return ellipsis_of(process_all(user, textprep::PorterStemmer()));
}

double median_length(const corpus::UserRecord& user) {
  require_tweets(user);
  return median_of(process_all(user, textprep::PorterStemmer()));
}

double caps_ratio(const corpus::UserRecord& user, bool* undefined) {
  require_tweets(user);
  return caps_of(process_all(user, textprep::PorterStemmer()), undefined);
}

UserMetrics compute_user_metrics(const corpus::UserRecord& user,
                                 std::span<const lexicon::KeywordSet> sets, RatioMode mode) {
  require_tweets(user);
  const auto tweets = process_all(user, textprep::PorterStemmer());
  auto ratio = [&](IndicatorId id) {
    const auto& ks = lexicon::find_set(sets, id);
    if (!ks.finalized()) {
      throw UsageError("keyword set " + std::string(lexicon::to_string(id)) + " is not finalized");
    }
    return keyword_ratio(tweets, ks, mode);
  };
  UserMetrics m;
  m.user_id = user.user_id;
  m.n_tweets = user.tweets.size();
  m.swearing_ratio = ratio(IndicatorId::I1_SWEAR);
  m.negative_ratio = ratio(IndicatorId::I1_NEGATIVE);
  m.caps_ratio = caps_of(tweets, &m.caps_undefined);
  m.ellipsis_ratio = ellipsis_of(tweets);
  m.median_tweet_length = median_of(tweets);
  m.discrimination_ratio = ratio(IndicatorId::I3_DISCRIMINATION);
  m.anti_western_ratio = ratio(IndicatorId::I4_ANTI_WESTERN);
  m.pro_jihadism_ratio = ratio(IndicatorId::I5_PRO_JIHAD);
  return m;
}

std::vector<UserMetrics> compute_dataset_metrics(const corpus::Dataset& ds,
                                                 std::span<const lexicon::KeywordSet> sets,
                                                 RatioMode mode, unsigned threads) {
  std::vector<const corpus::UserRecord*> eligible;
  for (const auto& u : ds.users) {
    if (!u.tweets.empty()) eligible.push_back(&u);
  }
  std::vector<UserMetrics> out(eligible.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, eligible.size())));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto work = [&] {
    for (std::size_t i; !failed && (i = next.fetch_add(1)) < eligible.size();) {
      try {
        out[i] = compute_user_metrics(*eligible[i], sets, mode);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
    work();
  }
  if (failure) std::rethrow_exception(failure);

  std::sort(out.begin(), out.end(),
            [](const UserMetrics& a, const UserMetrics& b) { return a.user_id < b.user_id; });
  return out;
}

void write_metrics_csv(std::ostream& out, std::span<const UserMetrics> rows) {
  out << "user_id,n_tweets";
  for (auto name : kMetricNames) out << ',' << name;
  out << '\n';
  for (const auto& r : rows) {
    out << csv::escape(r.user_id) << ',' << r.n_tweets;
    for (auto name : kMetricNames) out << fmt::format(",{:.6f}", metric_value(r, name));
    out << '\n';
  }
}

std::vector<UserMetrics> read_metrics_csv(std::istream& in) {
  csv::Reader reader(in);
  auto header = reader.next();
  if (!header) throw DataError("metrics table is empty");
  auto column = [&](std::string_view name) -> std::optional<std::size_t> {
    const auto& f = header->fields;
    auto it = std::find(f.begin(), f.end(), name);
    if (it == f.end()) return std::nullopt;
    return static_cast<std::size_t>(it - f.begin());
  };
  const auto user_col = column("user_id");
  if (!user_col) throw DataError("metrics table has no user_id column");
  const auto n_col = column("n_tweets");
  std::array<std::optional<std::size_t>, kMetricNames.size()> cols;
  for (std::size_t i = 0; i < kMetricNames.size(); ++i) cols[i] = column(kMetricNames[i]);

  std::vector<UserMetrics> rows;
  while (auto row = reader.next()) {
    if (row->fields.size() == 1 && row->fields[0].empty()) continue;
    if (row->fields.size() != header->fields.size()) {
      throw RecordError(row->line, fmt::format("expected {} fields, found {}",
                                               header->fields.size(), row->fields.size()));
    }
    UserMetrics m;
    m.user_id = row->fields[*user_col];
    if (n_col) {
      m.n_tweets = static_cast<std::size_t>(parse_number(row->fields[*n_col], row->line, "n_tweets"));
    }
    double* slots[] = {&m.swearing_ratio,       &m.negative_ratio,     &m.caps_ratio,
                       &m.ellipsis_ratio,       &m.median_tweet_length, &m.discrimination_ratio,
                       &m.anti_western_ratio,   &m.pro_jihadism_ratio};
    for (std::size_t i = 0; i < kMetricNames.size(); ++i) {
      *slots[i] = cols[i] ? parse_number(row->fields[*cols[i]], row->line, kMetricNames[i])
                          : std::numeric_limits<double>::quiet_NaN();
    }
    rows.push_back(std::move(m));
  }
  return rows;
}

std::vector<UserMetrics> read_metrics_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open metrics table " + path.string());
  return read_metrics_csv(in);
}

}  // namespace radrisk::indicators
