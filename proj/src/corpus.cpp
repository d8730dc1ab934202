#include "radrisk/corpus.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "radrisk/csv.hpp"
#include "radrisk/error.hpp"

namespace radrisk::corpus {

using nlohmann::json;

std::size_t Dataset::tweet_count() const {
  std::size_t n = 0;
  for (const auto& u : users) n += u.tweets.size();
  return n;
}

const UserRecord* Dataset::find(std::string_view user_id) const {
  for (const auto& u : users) {
    if (u.user_id == user_id) return &u;
  }
  return nullptr;
}

std::string_view to_string(StdevConvention c) {
  return c == StdevConvention::sample ? "sample" : "population";
}

DatasetBuilder::DatasetBuilder(std::string label, bool dedupe) : dedupe_(dedupe) {
  ds_.label = std::move(label);
}

UserRecord& DatasetBuilder::user(const std::string& user_id) {
  auto [it, inserted] = index_.try_emplace(user_id, ds_.users.size());
  if (inserted) {
    UserRecord u;
    u.user_id = user_id;
    ds_.users.push_back(std::move(u));
  }
  return ds_.users[it->second];
}

void DatasetBuilder::add(Tweet tweet) {
  if (tweet.user_id.empty()) throw DataError("tweet without a user id");
  if (tweet.tweet_id.empty()) throw DataError("tweet without a tweet id");
  if (dedupe_ && !seen_ids_.insert(tweet.tweet_id).second) {
    ++duplicates_;
    return;
  }
  user(tweet.user_id).tweets.push_back(std::move(tweet));
}

Dataset DatasetBuilder::finish() && { return std::move(ds_); }

namespace {

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return in;
}

std::string default_label(const LoadOptions& options, const std::filesystem::path& path) {
  return options.label.empty() ? path.stem().string() : options.label;
}

std::size_t column_index(const std::vector<std::string>& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw DataError("missing mapped column '" + name + "'");
}

void reject(const RecordError& e, const LoadOptions& options, LoadReport* report) {
  if (!options.skip_bad_records) throw e;
  if (report) report->skipped.emplace_back(e.what());
}

}  // namespace

Dataset load_csv(std::istream& in, const CsvSchema& schema, const LoadOptions& options,
                 LoadReport* report) {
  csv::Reader reader(in);
  DatasetBuilder builder(options.label, options.dedupe);

  std::optional<csv::Row> header;
  try {
    header = reader.next();
  } catch (const RecordError& e) {
    throw DataError(std::string("malformed header: ") + e.what());
  }
  if (!header) throw DataError("empty CSV input: no header row");

  const std::size_t user_col = column_index(header->fields, schema.user_column);
  const std::size_t text_col = column_index(header->fields, schema.text_column);
  const std::optional<std::size_t> id_col =
      schema.tweet_id_column ? std::optional(column_index(header->fields, *schema.tweet_id_column))
                             : std::nullopt;
  const std::optional<std::size_t> time_col =
      schema.timestamp_column
          ? std::optional(column_index(header->fields, *schema.timestamp_column))
          : std::nullopt;

  for (;;) {
    std::optional<csv::Row> row;
    try {
      row = reader.next();
    } catch (const RecordError& e) {
      reject(e, options, report);
      continue;
    }
    if (!row) break;
    if (row->fields.size() == 1 && row->fields[0].empty()) continue;  // blank line
    try {
      if (row->fields.size() != header->fields.size()) {
        throw RecordError(row->line, "expected " + std::to_string(header->fields.size()) +
                                         " fields, found " + std::to_string(row->fields.size()));
      }
      Tweet t;
      t.user_id = row->fields[user_col];
      if (t.user_id.empty()) throw RecordError(row->line, "empty user id");
      t.text = row->fields[text_col];
      t.tweet_id = id_col ? row->fields[*id_col] : "row-" + std::to_string(row->line);
      if (t.tweet_id.empty()) throw RecordError(row->line, "empty tweet id");
      if (time_col && !row->fields[*time_col].empty()) t.timestamp = row->fields[*time_col];
      builder.add(std::move(t));
    } catch (const RecordError& e) {
      reject(e, options, report);
    }
  }
  if (report) report->duplicates_dropped += builder.duplicates_dropped();
  return std::move(builder).finish();
}

Dataset load_csv(const std::filesystem::path& path, const CsvSchema& schema,
                 const LoadOptions& options, LoadReport* report) {
  auto in = open(path);
  LoadOptions opts = options;
  opts.label = default_label(options, path);
  return load_csv(in, schema, opts, report);
}

namespace {

std::string scalar_string(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  if (j.is_number_unsigned()) return std::to_string(j.get<unsigned long long>());
  throw std::invalid_argument("expected a string or integer");
}

}  // namespace

Dataset load_jsonl(std::istream& in, const LoadOptions& options, LoadReport* report) {
  DatasetBuilder builder(options.label, options.dedupe);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      json obj;
      try {
        obj = json::parse(line);
      } catch (const json::parse_error& e) {
        throw RecordError(lineno, std::string("invalid JSON: ") + e.what());
      }
      if (!obj.is_object()) throw RecordError(lineno, "expected a JSON object");
      if (!obj.contains("user_id")) throw RecordError(lineno, "missing \"user_id\"");
      if (!obj.contains("text")) throw RecordError(lineno, "missing \"text\"");
      if (!obj["text"].is_string()) throw RecordError(lineno, "\"text\" is not a string");
      Tweet t;
      try {
        t.user_id = scalar_string(obj["user_id"]);
        t.tweet_id = obj.contains("tweet_id") && !obj["tweet_id"].is_null()
                         ? scalar_string(obj["tweet_id"])
                         : "line-" + std::to_string(lineno);
      } catch (const std::invalid_argument& e) {
        throw RecordError(lineno, e.what());
      }
      if (t.user_id.empty()) throw RecordError(lineno, "empty user id");
      if (t.tweet_id.empty()) throw RecordError(lineno, "empty tweet id");
      t.text = obj["text"].get<std::string>();
      if (obj.contains("timestamp") && obj["timestamp"].is_string()) {
        t.timestamp = obj["timestamp"].get<std::string>();
      }
      if (obj.contains("handle") && obj["handle"].is_string()) {
        builder.user(t.user_id).handle = obj["handle"].get<std::string>();
      }
      builder.add(std::move(t));
    } catch (const RecordError& e) {
      reject(e, options, report);
    }
  }
  if (report) report->duplicates_dropped += builder.duplicates_dropped();
  return std::move(builder).finish();
}

Dataset load_jsonl(const std::filesystem::path& path, const LoadOptions& options,
                   LoadReport* report) {
  auto in = open(path);
  LoadOptions opts = options;
  opts.label = default_label(options, path);
  return load_jsonl(in, opts, report);
}

Dataset load_dataset(const std::filesystem::path& path, const CsvSchema& schema,
                     const LoadOptions& options, LoadReport* report) {
  const auto ext = path.extension().string();
  if (ext == ".jsonl" || ext == ".json" || ext == ".ndjson") {
    return load_jsonl(path, options, report);
  }
  return load_csv(path, schema, options, report);
}

void write_jsonl(std::ostream& out, const Dataset& ds) {
  for (const auto& u : ds.users) {
    for (const auto& t : u.tweets) {
      json obj = {{"user_id", t.user_id}, {"tweet_id", t.tweet_id}, {"text", t.text}};
      if (t.timestamp) obj["timestamp"] = *t.timestamp;
      if (u.handle) obj["handle"] = *u.handle;
      out << obj.dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
    }
  }
}

DatasetSummary summarize(const Dataset& ds, StdevConvention convention) {
  DatasetSummary s;
  s.label = ds.label;
  s.convention = convention;
  s.n_users = ds.users.size();
  s.n_tweets = ds.tweet_count();
  if (s.n_users == 0) {
    s.empty = true;
    return s;
  }
  const double n = static_cast<double>(s.n_users);
  s.avg_tweets_per_user = static_cast<double>(s.n_tweets) / n;
  double ss = 0.0;
  for (const auto& u : ds.users) {
    const double d = static_cast<double>(u.tweets.size()) - s.avg_tweets_per_user;
    ss += d * d;
  }
  const double denom = convention == StdevConvention::sample ? n - 1.0 : n;
  s.stdev_tweets_per_user = denom > 0.0 ? std::sqrt(ss / denom) : 0.0;
  return s;
}

}  // namespace radrisk::corpus
