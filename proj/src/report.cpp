#include "radrisk/report.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include <unistd.h>

#include <fmt/format.h>

#include "radrisk/csv.hpp"
#include "radrisk/error.hpp"
#include "radrisk/langprofile.hpp"
#include "radrisk/unicode.hpp"

namespace radrisk::report {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

void emit(const OutputOptions& o, std::ostream& out,
          const std::function<void(std::ostream&)>& writer) {
  if (o.path) {
    write_file_atomic(*o.path, writer);
  } else {
    writer(out);
  }
}

void emit_json(const OutputOptions& o, std::ostream& out, const ordered_json& j) {
  emit(o, out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

std::string num(double v) { return fmt::format("{:.9g}", v); }

std::string fixed(double v, int digits) { return fmt::format("{:.{}f}", v, digits); }

ordered_json number_or_null(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

void require_column(std::span<const indicators::UserMetrics> rows, const std::string& metric,
                    const fs::path& file) {
  for (const auto& r : rows) {
    if (std::isnan(indicators::metric_value(r, metric))) {
      throw DataError(fmt::format("{}: no values for metric '{}'", file.string(), metric));
    }
  }
}

void check_metric_name(const std::string& metric) {
  if (!indicators::is_metric_name(metric)) {
    throw UsageError(fmt::format("unknown metric '{}'; valid metrics: {}", metric,
                                 fmt::join(indicators::kMetricNames, ", ")));
  }
}

ordered_json metrics_to_json(std::span<const indicators::UserMetrics> rows) {
  ordered_json users = ordered_json::array();
  for (const auto& r : rows) {
    ordered_json u;
    u["user_id"] = r.user_id;
    u["n_tweets"] = r.n_tweets;
    for (auto name : indicators::kMetricNames) {
      u[std::string(name)] = number_or_null(indicators::metric_value(r, name));
    }
    u["caps_undefined"] = r.caps_undefined;
    users.push_back(std::move(u));
  }
  return users;
}

}  // namespace

ComparisonReport compare_metric(std::span<const indicators::UserMetrics> a,
                                std::span<const indicators::UserMetrics> b,
                                const std::string& metric, stats::Tail tail, std::string label_a,
                                std::string label_b) {
  check_metric_name(metric);
  const auto xa = indicators::metric_column(a, metric);
  const auto xb = indicators::metric_column(b, metric);
  if (xa.empty() || xb.empty()) throw DataError("cannot compare an empty metrics table");
  ComparisonReport r;
  r.metric = metric;
  r.label_a = std::move(label_a);
  r.label_b = std::move(label_b);
  r.median_a = stats::median(xa);
  r.median_b = stats::median(xb);
  r.test = stats::wilcoxon_rank_sum(xa, xb, tail);
  r.significant = r.test.p_value < kAlpha;
  return r;
}

ordered_json to_json(const ComparisonReport& r) {
  ordered_json j;
  j["metric"] = r.metric;
  j["datasets"] = {r.label_a, r.label_b};
  j["medians"] = {{r.label_a, r.median_a}, {r.label_b, r.median_b}};
  j["n1"] = r.test.n1;
  j["n2"] = r.test.n2;
  j["w"] = r.test.w_statistic;
  // the same test with the samples swapped reports this statistic
  j["w_reversed"] = static_cast<double>(r.test.n1 * r.test.n2) - r.test.w_statistic;
  j["tail"] = stats::to_string(r.test.tail);
  j["method"] = stats::to_string(r.test.method);
  j["p_value"] = r.test.p_value;
  j["degenerate"] = r.test.degenerate;
  j["alpha"] = kAlpha;
  j["significant"] = r.significant;
  return j;
}

ordered_json to_json(const corpus::DatasetSummary& s) {
  ordered_json j;
  j["dataset"] = s.label;
  j["n_users"] = s.n_users;
  j["n_tweets"] = s.n_tweets;
  j["avg_tweets_per_user"] = s.avg_tweets_per_user;
  j["stdev_tweets_per_user"] = s.stdev_tweets_per_user;
  j["stdev_convention"] = corpus::to_string(s.convention);
  j["empty"] = s.empty;
  return j;
}

void write_file_atomic(const fs::path& path, const std::function<void(std::ostream&)>& writer) {
  static std::atomic<unsigned> counter{0};
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  const fs::path tmp =
      dir / fmt::format(".{}.tmp-{}-{}", path.filename().string(), ::getpid(), counter++);
  try {
    {
      std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
      if (!os) throw DataError("cannot write " + tmp.string());
      writer(os);
      os.flush();
      if (!os) throw DataError("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw DataError(fmt::format("cannot move {} into place: {}", path.string(), ec.message()));
  } catch (...) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw;
  }
}

void write_table(std::ostream& out, const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size(), 0);
  auto measure = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size() && i < width.size(); ++i) {
      width[i] = std::max(width[i], unicode::length(row[i]));
    }
  };
  measure(header);
  for (const auto& r : rows) measure(r);
  auto line = [&](const std::vector<std::string>& row) {
    std::string s;
    for (std::size_t i = 0; i < row.size() && i < width.size(); ++i) {
      if (i) s += "  ";
      s += row[i];
      if (i + 1 < row.size()) s.append(width[i] - unicode::length(row[i]), ' ');
    }
    out << s << '\n';
  };
  line(header);
  std::vector<std::string> rule;
  for (auto w : width) rule.emplace_back(w, '-');
  line(rule);
  for (const auto& r : rows) line(r);
}

corpus::Dataset load_input(const fs::path& path, const InputOptions& in, std::ostream& err) {
  corpus::LoadOptions opts;
  opts.label = path.stem().string();
  opts.skip_bad_records = in.skip_bad_rows;
  opts.dedupe = in.dedupe;
  corpus::LoadReport report;
  auto ds = corpus::load_dataset(path, in.schema, opts, &report);
  for (const auto& msg : report.skipped) err << "warning: " << path.string() << ": skipped " << msg << '\n';
  if (report.duplicates_dropped > 0) {
    err << "warning: " << path.string() << ": dropped " << report.duplicates_dropped
        << " duplicate tweets\n";
  }
  return ds;
}

std::vector<lexicon::KeywordSet> build_keyword_sets(const LexiconOptions& lex) {
  auto sets = lex.lexicon_dir ? lexicon::load_keyword_sets(*lex.lexicon_dir)
                              : lexicon::default_keyword_sets();
  if (!lex.expand) return lexicon::prepare(std::move(sets), lexicon::SynonymLexicon());
  if (lex.synsets) return lexicon::prepare(std::move(sets), lexicon::SynonymLexicon::load(*lex.synsets));
  return lexicon::prepare(std::move(sets), lexicon::SynonymLexicon::builtin());
}

// --- summarize --------------------------------------------------------------

int cmd_summarize(const SummarizeArgs& args, std::ostream& out, std::ostream& err) {
  if (args.datasets.empty()) throw UsageError("summarize needs at least one dataset");
  struct Entry {
    std::string label;
    std::optional<corpus::DatasetSummary> summary;
    std::string error;
  };
  std::vector<Entry> entries;
  std::size_t failures = 0;
  for (const auto& path : args.datasets) {
    Entry e{path.stem().string(), std::nullopt, {}};
    try {
      e.summary = corpus::summarize(load_input(path, args.input, err), args.convention);
      if (e.summary->empty) err << "warning: " << path.string() << ": dataset has no users\n";
    } catch (const DataError& ex) {
      e.error = ex.what();
      err << "error: " << path.string() << ": " << ex.what() << '\n';
      ++failures;
    }
    entries.push_back(std::move(e));
  }

  if (args.output.pretty) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& e : entries) {
      if (e.summary) {
        const auto& s = *e.summary;
        rows.push_back({e.label, std::to_string(s.n_users), std::to_string(s.n_tweets),
                        fixed(s.avg_tweets_per_user, 2), fixed(s.stdev_tweets_per_user, 2),
                        s.empty ? "empty" : ""});
      } else {
        rows.push_back({e.label, "", "", "", "", "error: " + e.error});
      }
    }
    emit(args.output, out, [&](std::ostream& os) {
      write_table(os, {"dataset", "users", "tweets", "avg tweets/user",
                       fmt::format("stdev tweets/user ({})", corpus::to_string(args.convention)),
                       "note"},
                  rows);
    });
  } else if (args.output.format == Format::json) {
    ordered_json arr = ordered_json::array();
    for (const auto& e : entries) {
      if (e.summary) {
        arr.push_back(to_json(*e.summary));
      } else {
        arr.push_back({{"dataset", e.label}, {"error", e.error}});
      }
    }
    emit_json(args.output, out, {{"datasets", arr}});
  } else {
    emit(args.output, out, [&](std::ostream& os) {
      os << "dataset,n_users,n_tweets,avg_tweets_per_user,stdev_tweets_per_user,stdev_convention,"
            "empty,error\n";
      for (const auto& e : entries) {
        if (e.summary) {
          const auto& s = *e.summary;
          os << fmt::format("{},{},{},{:.6f},{:.6f},{},{},\n", csv::escape(e.label), s.n_users,
                            s.n_tweets, s.avg_tweets_per_user, s.stdev_tweets_per_user,
                            corpus::to_string(s.convention), s.empty ? "true" : "false");
        } else {
          os << fmt::format("{},,,,,{},,{}\n", csv::escape(e.label),
                            corpus::to_string(args.convention), csv::escape(e.error));
        }
      }
    });
  }
  return failures == entries.size() ? 1 : 0;
}

// --- metrics ----------------------------------------------------------------

int cmd_metrics(const MetricsArgs& args, std::ostream& out, std::ostream& err) {
  const auto ds = load_input(args.dataset, args.input, err);
  const auto sets = build_keyword_sets(args.lexicon);
  const auto rows = indicators::compute_dataset_metrics(ds, sets, args.lexicon.mode, args.lexicon.threads);
  if (rows.empty()) throw DataError(args.dataset.string() + ": no users with tweets");
  if (const auto skipped = ds.users.size() - rows.size()) {
    err << "warning: " << skipped << " users without tweets left out\n";
  }

  if (args.output.pretty) {
    std::vector<std::vector<std::string>> table;
    for (const auto& r : rows) {
      std::vector<std::string> row{r.user_id, std::to_string(r.n_tweets)};
      for (auto name : indicators::kMetricNames) row.push_back(fixed(indicators::metric_value(r, name), 4));
      table.push_back(std::move(row));
    }
    std::vector<std::string> header{"user_id", "n_tweets"};
    for (auto name : indicators::kMetricNames) header.emplace_back(name);
    emit(args.output, out, [&](std::ostream& os) { write_table(os, header, table); });
  } else if (args.output.format == Format::json) {
    ordered_json j;
    j["metadata"] = {{"dataset", ds.label},
                     {"mode", indicators::to_string(args.lexicon.mode)},
                     {"length_unit", "code points of cleaned text"},
                     {"synonym_expansion", args.lexicon.expand},
                     {"n_users", rows.size()}};
    j["users"] = metrics_to_json(rows);
    emit_json(args.output, out, j);
  } else {
    emit(args.output, out, [&](std::ostream& os) { indicators::write_metrics_csv(os, rows); });
  }
  return 0;
}

// --- compare ----------------------------------------------------------------

int cmd_compare(const CompareArgs& args, std::ostream& out, std::ostream&) {
  check_metric_name(args.metric);
  const auto a = indicators::read_metrics_csv(args.metrics_a);
  const auto b = indicators::read_metrics_csv(args.metrics_b);
  if (a.empty()) throw DataError(args.metrics_a.string() + ": metrics table has no rows");
  if (b.empty()) throw DataError(args.metrics_b.string() + ": metrics table has no rows");
  require_column(a, args.metric, args.metrics_a);
  require_column(b, args.metric, args.metrics_b);
  const auto r = compare_metric(a, b, args.metric, args.tail,
                                args.label_a.value_or(args.metrics_a.stem().string()),
                                args.label_b.value_or(args.metrics_b.stem().string()));

  if (args.output.pretty) {
    emit(args.output, out, [&](std::ostream& os) {
      write_table(os, {"metric", "pair", "median a", "median b", "W", "p", "tail", "method", "significant"},
                  {{r.metric, r.label_a + " vs " + r.label_b, num(r.median_a), num(r.median_b),
                    num(r.test.w_statistic), fmt::format("{:.4g}", r.test.p_value),
                    std::string(stats::to_string(r.test.tail)),
                    std::string(stats::to_string(r.test.method)), r.significant ? "yes" : "no"}});
    });
  } else if (args.output.format == Format::csv) {
    emit(args.output, out, [&](std::ostream& os) {
      os << "metric,dataset_a,dataset_b,median_a,median_b,n1,n2,w,tail,method,p_value,significant\n";
      os << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}\n", r.metric, csv::escape(r.label_a),
                        csv::escape(r.label_b), num(r.median_a), num(r.median_b), r.test.n1,
                        r.test.n2, num(r.test.w_statistic), stats::to_string(r.test.tail),
                        stats::to_string(r.test.method), num(r.test.p_value),
                        r.significant ? "true" : "false");
    });
  } else {
    emit_json(args.output, out, to_json(r));
  }
  return 0;
}

// --- distributions ----------------------------------------------------------

int cmd_distributions(const DistributionsArgs& args, std::ostream& out, std::ostream& err) {
  std::vector<std::string> names = args.metric_names;
  if (names.empty()) {
    for (auto n : indicators::kMetricNames) names.emplace_back(n);
  }
  for (const auto& n : names) check_metric_name(n);
  const auto rows = indicators::read_metrics_csv(args.metrics);
  if (rows.empty()) throw DataError(args.metrics.string() + ": metrics table has no rows");

  std::error_code ec;
  fs::create_directories(args.out_dir, ec);
  if (ec) throw DataError(fmt::format("cannot create {}: {}", args.out_dir.string(), ec.message()));

  for (const auto& name : names) {
    require_column(rows, name, args.metrics);
    const auto values = indicators::metric_column(rows, name);
    try {
      const auto density = stats::kde_density(values);
      const auto path = args.out_dir / (name + "_density.csv");
      write_file_atomic(path, [&](std::ostream& os) { stats::write_density_csv(os, density); });
      out << path.string() << '\n';
    } catch (const DegenerateDistributionError&) {
      err << "warning: " << name << ": values have no spread, writing an ECDF instead of a density\n";
      const auto path = args.out_dir / (name + "_ecdf.csv");
      write_file_atomic(path, [&](std::ostream& os) { stats::write_ecdf_csv(os, stats::ecdf(values)); });
      out << path.string() << '\n';
    }
    const auto path = args.out_dir / (name + "_box.csv");
    write_file_atomic(path, [&](std::ostream& os) { stats::write_box_csv(os, stats::quantile_summary(values)); });
    out << path.string() << '\n';
  }
  return 0;
}

// --- langs ------------------------------------------------------------------

int cmd_langs(const LangsArgs& args, std::ostream& out, std::ostream& err) {
  const auto ds = load_input(args.dataset, args.input, err);
  const auto dist = langprofile::script_distribution(ds);
  if (dist.empty) err << "warning: " << args.dataset.string() << ": no tweet could be classified\n";
  if (dist.n_unclassified > 0) err << "note: " << dist.n_unclassified << " tweets unclassified\n";

  if (args.output.pretty) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& [script, pct] : dist.entries) rows.push_back({script, fixed(pct, 2)});
    emit(args.output, out, [&](std::ostream& os) { write_table(os, {"script", "%"}, rows); });
  } else if (args.output.format == Format::json) {
    ordered_json entries = ordered_json::array();
    for (const auto& [script, pct] : dist.entries) entries.push_back({{"script", script}, {"percentage", pct}});
    emit_json(args.output, out,
              {{"dataset", ds.label},
               {"n_classified", dist.n_classified},
               {"n_unclassified", dist.n_unclassified},
               {"empty", dist.empty},
               {"scripts", entries}});
  } else {
    emit(args.output, out, [&](std::ostream& os) { langprofile::write_csv(os, dist); });
  }
  return 0;
}

// --- fetch ------------------------------------------------------------------

int cmd_fetch(const FetchArgs& args, std::ostream& out, std::ostream& err) {
  args.policy.validate();
  if (args.workers == 0) throw UsageError("--workers must be at least 1");
  std::ifstream dump_in(args.dump);
  if (!dump_in) throw DataError("cannot open account dump " + args.dump.string());
  std::stringstream buf;
  buf << dump_in.rdbuf();
  const auto dump = acquisition::parse_account_dump(buf.str());

  std::unique_ptr<acquisition::TimelineSource> base;
  std::unique_ptr<acquisition::Clock> clock;
  if (args.replay) {
    base = std::make_unique<acquisition::ReplaySource>(acquisition::ReplaySource::from_file(*args.replay));
    // replayed rate-limit waits are simulated rather than slept
    clock = std::make_unique<acquisition::ManualClock>();
  } else {
    auto token = acquisition::HttpTimelineSource::bearer_token_from_env();
    if (token.empty()) err << "warning: no bearer token in RADRISK_BEARER_TOKEN or TWITTER_BEARER_TOKEN\n";
    base = std::make_unique<acquisition::HttpTimelineSource>(args.base_url, std::move(token));
    clock = std::make_unique<acquisition::SteadyClock>();
  }

  std::ofstream transcript;
  std::unique_ptr<acquisition::RecordingSource> recorder;
  acquisition::TimelineSource* source = base.get();
  if (args.record) {
    transcript.open(*args.record, std::ios::binary | std::ios::trunc);
    if (!transcript) throw DataError("cannot write transcript " + args.record->string());
    recorder = std::make_unique<acquisition::RecordingSource>(*base, transcript);
    source = recorder.get();
  }

  const auto run = acquisition::fetch_all(*source, dump, args.policy, *clock, args.workers);
  write_file_atomic(args.out, [&](std::ostream& os) { corpus::write_jsonl(os, run.dataset); });
  if (args.audit) {
    write_file_atomic(*args.audit, [&](std::ostream& os) { acquisition::write_audit_jsonl(os, run.audit); });
  }

  std::size_t unavailable = 0;
  std::size_t partial = 0;
  for (const auto& r : run.audit) {
    if (r.status == acquisition::FetchStatus::unavailable) ++unavailable;
    if (r.status == acquisition::FetchStatus::partial) ++partial;
  }
  out << fmt::format("{} accounts, {} tweets, {} unavailable, {} partial\n", run.audit.size(),
                     run.dataset.tweet_count(), unavailable, partial);
  return 0;
}

// --- reproduce --------------------------------------------------------------

stats::Tail reproduce_tail(const std::string& a, const std::string& b, const std::string& metric) {
  if (metric == "ellipsis") return stats::Tail::two_sided;
  if (b == "D3" && a != "D3") return stats::Tail::greater;
  if (a == "D3" && b != "D3") return stats::Tail::less;
  return stats::Tail::two_sided;
}

ordered_json reproduce(const ReproduceArgs& args, std::ostream& err) {
  std::vector<std::pair<std::string, fs::path>> inputs;
  if (args.d1) inputs.emplace_back("D1", *args.d1);
  if (args.d2) inputs.emplace_back("D2", *args.d2);
  if (args.d3) inputs.emplace_back("D3", *args.d3);
  if (inputs.size() < 2) throw UsageError("reproduce needs at least two of --d1, --d2, --d3");

  const auto sets = build_keyword_sets(args.lexicon);
  std::map<std::string, std::vector<indicators::UserMetrics>> metrics;
  ordered_json datasets = ordered_json::array();
  for (const auto& [label, path] : inputs) {
    auto ds = load_input(path, args.input, err);
    ds.label = label;
    if (label == "D3" && args.d3_sample_users && *args.d3_sample_users < ds.users.size()) {
      std::vector<corpus::UserRecord> picked;
      std::mt19937_64 rng(args.seed);
      std::sample(ds.users.begin(), ds.users.end(), std::back_inserter(picked),
                  static_cast<std::ptrdiff_t>(*args.d3_sample_users), rng);
      ds.users = std::move(picked);
    }
    auto summary = to_json(corpus::summarize(ds, args.convention));
    summary["source"] = path.string();
    auto rows = indicators::compute_dataset_metrics(ds, sets, args.lexicon.mode, args.lexicon.threads);
    if (rows.empty()) throw DataError(path.string() + ": no users with tweets");
    summary["n_users_with_metrics"] = rows.size();
    datasets.push_back(std::move(summary));
    metrics.emplace(label, std::move(rows));
  }

  ordered_json medians;
  for (auto name : indicators::kMetricNames) {
    ordered_json m;
    for (const auto& [label, path] : inputs) {
      m[label] = stats::median(indicators::metric_column(metrics.at(label), name));
    }
    medians[std::string(name)] = std::move(m);
  }

  ordered_json comparisons = ordered_json::array();
  ordered_json supplementary = ordered_json::array();
  for (auto name_view : indicators::kMetricNames) {
    const std::string name(name_view);
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      for (std::size_t k = i + 1; k < inputs.size(); ++k) {
        const auto& a = inputs[i].first;
        const auto& b = inputs[k].first;
        auto r = compare_metric(metrics.at(a), metrics.at(b), name, reproduce_tail(a, b, name), a, b);
        // caps is computed but sits outside the reference battery
        (name == "caps" ? supplementary : comparisons).push_back(to_json(r));
      }
    }
  }

  ordered_json j;
  j["config"] = {{"mode", indicators::to_string(args.lexicon.mode)},
                 {"synonym_expansion", args.lexicon.expand},
                 {"stdev_convention", corpus::to_string(args.convention)},
                 {"length_unit", "code points of cleaned text"},
                 {"alpha", kAlpha},
                 {"seed", args.seed},
                 {"d3_sample_users", args.d3_sample_users ? ordered_json(*args.d3_sample_users) : ordered_json()}};
  j["datasets"] = std::move(datasets);
  j["medians"] = std::move(medians);
  j["comparisons"] = std::move(comparisons);
  j["supplementary"] = std::move(supplementary);
  return j;
}

int cmd_reproduce(const ReproduceArgs& args, std::ostream& out, std::ostream& err) {
  const auto j = reproduce(args, err);
  if (args.output.pretty) {
    std::vector<std::vector<std::string>> rows;
    for (const auto* group : {&j["comparisons"], &j["supplementary"]}) {
      for (const auto& c : *group) {
        rows.push_back({c["metric"].get<std::string>(),
                        c["datasets"][0].get<std::string>() + " vs " + c["datasets"][1].get<std::string>(),
                        c["tail"].get<std::string>(), num(c["w"].get<double>()),
                        fmt::format("{:.4g}", c["p_value"].get<double>()),
                        c["significant"].get<bool>() ? "yes" : "no"});
      }
    }
    emit(args.output, out, [&](std::ostream& os) {
      write_table(os, {"metric", "pair", "tail", "W", "p", "significant"}, rows);
    });
  } else {
    emit_json(args.output, out, j);
  }
  return 0;
}

}  // namespace radrisk::report
