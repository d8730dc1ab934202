// radrisk: command-line front end over radrisk_core.
//
// Exit codes: 0 success, 1 data error, 2 usage error.

#include <cstdlib>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "radrisk/error.hpp"
#include "radrisk/report.hpp"

namespace {

using namespace radrisk;

const std::map<std::string, report::Format> kFormats{{"csv", report::Format::csv},
                                                     {"json", report::Format::json}};
const std::map<std::string, indicators::RatioMode> kModes{
    {"containment", indicators::RatioMode::containment},
    {"occurrence", indicators::RatioMode::occurrence}};
const std::map<std::string, stats::Tail> kTails{{"greater", stats::Tail::greater},
                                                {"less", stats::Tail::less},
                                                {"two_sided", stats::Tail::two_sided},
                                                {"two-sided", stats::Tail::two_sided}};
const std::map<std::string, corpus::StdevConvention> kConventions{
    {"sample", corpus::StdevConvention::sample},
    {"population", corpus::StdevConvention::population}};

void add_output(CLI::App* app, report::OutputOptions& o, report::Format default_format) {
  o.format = default_format;
  app->add_option_function<std::string>(
         "--format", [&o](const std::string& v) { o.format = kFormats.at(v); },
         default_format == report::Format::json ? "Output format (default json)" : "Output format (default csv)")
      ->check(CLI::IsMember(kFormats));
  app->add_flag("--pretty", o.pretty, "Print a human-readable table");
  app->add_option("-o,--out", o.path, "Write to this file instead of stdout");
}

void add_input(CLI::App* app, report::InputOptions& in) {
  app->add_option("--user-column", in.schema.user_column, "CSV column holding the account")
      ->capture_default_str();
  app->add_option("--text-column", in.schema.text_column, "CSV column holding the tweet text")
      ->capture_default_str();
  app->add_option("--id-column", in.schema.tweet_id_column, "CSV column holding the tweet id");
  app->add_option("--timestamp-column", in.schema.timestamp_column, "CSV column holding the timestamp");
  app->add_flag("--skip-bad-rows", in.skip_bad_rows, "Skip malformed records instead of aborting");
  app->add_flag("--dedupe", in.dedupe, "Drop repeated tweet ids");
}

void add_convention(CLI::App* app, corpus::StdevConvention& c) {
  app->add_option_function<std::string>(
         "--stdev", [&c](const std::string& v) { c = kConventions.at(v); },
         "Standard deviation convention (default sample)")
      ->check(CLI::IsMember(kConventions));
}

void add_lexicon(CLI::App* app, report::LexiconOptions& lex) {
  app->add_option("--lexicon-dir", lex.lexicon_dir, "Directory with keyword override files")
      ->check(CLI::ExistingDirectory);
  app->add_option("--synsets", lex.synsets, "Synonym file (word: syn, syn, ...)")
      ->check(CLI::ExistingFile);
  app->add_flag("!--no-synonyms", lex.expand, "Match base keywords only");
  app->add_option_function<std::string>(
         "--mode", [&lex](const std::string& v) { lex.mode = kModes.at(v); }, "Keyword ratio mode (default containment)")
      ->check(CLI::IsMember(kModes));
  app->add_option("--threads", lex.threads, "Worker threads (0 = all cores)");
}

int run(int argc, char** argv) {
  CLI::App app{"Linguistic radicalisation-risk indicators for tweet corpora"};
  app.set_config("--config", "", "Read options from a key = value file; flags win");
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  app.add_option("--seed", seed, "Seed for any sampling")->capture_default_str();

  report::SummarizeArgs summarize;
  auto* s = app.add_subcommand("summarize", "Users, tweets and tweets-per-user moments per dataset");
  s->add_option("datasets", summarize.datasets, "Dataset files (CSV or JSONL)")->required();
  add_convention(s, summarize.convention);
  add_input(s, summarize.input);
  add_output(s, summarize.output, report::Format::csv);

  report::MetricsArgs metrics;
  auto* m = app.add_subcommand("metrics", "Per-user indicator metrics table");
  m->add_option("dataset", metrics.dataset, "Dataset file")->required();
  add_input(m, metrics.input);
  add_lexicon(m, metrics.lexicon);
  add_output(m, metrics.output, report::Format::csv);

  report::CompareArgs compare;
  auto* c = app.add_subcommand("compare", "Rank-sum test of one metric between two metrics tables");
  c->add_option("metrics_a", compare.metrics_a, "Metrics CSV for the first population")->required();
  c->add_option("metrics_b", compare.metrics_b, "Metrics CSV for the second population")->required();
  c->add_option("--metric", compare.metric, "Metric column")->required();
  c->add_option_function<std::string>(
       "--tail", [&compare](const std::string& v) { compare.tail = kTails.at(v); },
       "Alternative hypothesis for the first population (default two_sided)")
      ->check(CLI::IsMember(kTails));
  c->add_option("--label-a", compare.label_a, "Name of the first population");
  c->add_option("--label-b", compare.label_b, "Name of the second population");
  add_output(c, compare.output, report::Format::json);

  report::DistributionsArgs dist;
  auto* d = app.add_subcommand("distributions", "Density and box-plot data for metric columns");
  d->add_option("metrics", dist.metrics, "Metrics CSV")->required();
  d->add_option("--metric", dist.metric_names, "Metric column (repeatable; default all)");
  d->add_option("--out-dir", dist.out_dir, "Directory for the CSV files")->capture_default_str();

  report::LangsArgs langs;
  auto* l = app.add_subcommand("langs", "Writing-script profile of a dataset");
  l->add_option("dataset", langs.dataset, "Dataset file")->required();
  add_input(l, langs.input);
  add_output(l, langs.output, report::Format::csv);

  report::FetchArgs fetch;
  std::size_t window_seconds = 900;
  std::size_t backoff_seconds = 60;
  auto* f = app.add_subcommand("fetch", "Collect timelines for the accounts in a dump");
  f->add_option("--dump", fetch.dump, "Account dump")->required()->check(CLI::ExistingFile);
  f->add_option("--out", fetch.out, "Dataset JSONL to write")->required();
  f->add_option("--audit", fetch.audit, "Per-account audit JSONL to write");
  f->add_option("--replay", fetch.replay, "Serve responses from a recorded transcript")
      ->check(CLI::ExistingFile);
  f->add_option("--record", fetch.record, "Record every exchange to a transcript");
  f->add_option("--base-url", fetch.base_url, "Timeline API base URL")->capture_default_str();
  f->add_option("--workers", fetch.workers, "Concurrent fetch workers")->capture_default_str();
  f->add_option("--max-tweets", fetch.policy.max_tweets_per_user, "Tweets per account")
      ->capture_default_str();
  f->add_option("--page-size", fetch.policy.page_size, "Tweets per request")->capture_default_str();
  f->add_option("--requests-per-window", fetch.policy.requests_per_window, "Rate limit")
      ->capture_default_str();
  f->add_option("--window-seconds", window_seconds, "Rate limit window")->capture_default_str();
  f->add_option("--retry-backoff", backoff_seconds, "Wait after a rate-limit response without Retry-After")
      ->capture_default_str();
  f->add_option("--max-retries", fetch.policy.max_retries, "Rate-limit retries per request")
      ->capture_default_str();

  report::ReproduceArgs repro;
  auto* r = app.add_subcommand("reproduce", "Full metric battery over the three reference datasets");
  r->add_option("--d1", repro.d1, "At-risk accounts dataset")->check(CLI::ExistingFile);
  r->add_option("--d2", repro.d2, "Volunteer-flagged accounts dataset")->check(CLI::ExistingFile);
  r->add_option("--d3", repro.d3, "Random accounts dataset")->check(CLI::ExistingFile);
  r->add_option("--d3-sample-users", repro.d3_sample_users, "Analyse a seeded random subset of D3 users");
  add_convention(r, repro.convention);
  add_input(r, repro.input);
  add_lexicon(r, repro.lexicon);
  add_output(r, repro.output, report::Format::json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  fetch.policy.window_seconds = std::chrono::seconds(window_seconds);
  fetch.policy.retry_backoff_seconds = std::chrono::seconds(backoff_seconds);
  repro.seed = seed;

  if (*s) return report::cmd_summarize(summarize, std::cout, std::cerr);
  if (*m) return report::cmd_metrics(metrics, std::cout, std::cerr);
  if (*c) return report::cmd_compare(compare, std::cout, std::cerr);
  if (*d) return report::cmd_distributions(dist, std::cout, std::cerr);
  if (*l) return report::cmd_langs(langs, std::cout, std::cerr);
  if (*f) return report::cmd_fetch(fetch, std::cout, std::cerr);
  return report::cmd_reproduce(repro, std::cout, std::cerr);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const radrisk::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const radrisk::DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
