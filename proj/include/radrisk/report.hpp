#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "radrisk/acquisition.hpp"
#include "radrisk/corpus.hpp"
#include "radrisk/indicators.hpp"
#include "radrisk/lexicon.hpp"
#include "radrisk/stats.hpp"

namespace radrisk::report {

inline constexpr double kAlpha = 0.05;

struct ComparisonReport {
  std::string metric;
  std::string label_a;
  std::string label_b;
  double median_a = 0.0;
  double median_b = 0.0;
  stats::RankSumResult test;
  bool significant = false;  // test.p_value < kAlpha
};

/// Rank-sum comparison of one metric column; `a` plays the role of x.
ComparisonReport compare_metric(std::span<const indicators::UserMetrics> a,
                                std::span<const indicators::UserMetrics> b,
                                const std::string& metric, stats::Tail tail,
                                std::string label_a = "a", std::string label_b = "b");

nlohmann::ordered_json to_json(const ComparisonReport& r);
nlohmann::ordered_json to_json(const corpus::DatasetSummary& s);

/// Writes through a temporary file in the same directory and renames it over
/// `path`, so readers never see a partial file.
void write_file_atomic(const std::filesystem::path& path,
                       const std::function<void(std::ostream&)>& writer);

/// Plain-text table with left-aligned, space-padded columns.
void write_table(std::ostream& out, const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows);

// --- command plumbing -------------------------------------------------------

enum class Format { csv, json };

struct OutputOptions {
  Format format = Format::csv;
  bool pretty = false;                      // human-readable table instead
  std::optional<std::filesystem::path> path;  // stdout when unset
};

struct InputOptions {
  corpus::CsvSchema schema;
  bool skip_bad_rows = false;
  bool dedupe = false;
};

struct LexiconOptions {
  std::optional<std::filesystem::path> lexicon_dir;
  std::optional<std::filesystem::path> synsets;  // builtin snapshot when unset
  bool expand = true;
  indicators::RatioMode mode = indicators::RatioMode::containment;
  unsigned threads = 0;
};

/// Loads a dataset, reporting skipped records on `err`.
corpus::Dataset load_input(const std::filesystem::path& path, const InputOptions& in,
                           std::ostream& err);

/// Keyword sets ready for matching.
std::vector<lexicon::KeywordSet> build_keyword_sets(const LexiconOptions& lex);

// Each command writes its result to `out` (or the output path) and
// diagnostics to `err`. The return value is the process exit code;
// DataError and UsageError propagate to the caller.

struct SummarizeArgs {
  std::vector<std::filesystem::path> datasets;
  InputOptions input;
  corpus::StdevConvention convention = corpus::StdevConvention::sample;
  OutputOptions output;
};
int cmd_summarize(const SummarizeArgs& args, std::ostream& out, std::ostream& err);

struct MetricsArgs {
  std::filesystem::path dataset;
  InputOptions input;
  LexiconOptions lexicon;
  OutputOptions output;
};
int cmd_metrics(const MetricsArgs& args, std::ostream& out, std::ostream& err);

struct CompareArgs {
  std::filesystem::path metrics_a;
  std::filesystem::path metrics_b;
  std::string metric;
  stats::Tail tail = stats::Tail::two_sided;
  std::optional<std::string> label_a;  // file stems by default
  std::optional<std::string> label_b;
  OutputOptions output;
};
int cmd_compare(const CompareArgs& args, std::ostream& out, std::ostream& err);

struct DistributionsArgs {
  std::filesystem::path metrics;
  std::vector<std::string> metric_names;  // every metric when empty
  std::filesystem::path out_dir = ".";
};
int cmd_distributions(const DistributionsArgs& args, std::ostream& out, std::ostream& err);

struct LangsArgs {
  std::filesystem::path dataset;
  InputOptions input;
  OutputOptions output;
};
int cmd_langs(const LangsArgs& args, std::ostream& out, std::ostream& err);

struct FetchArgs {
  std::filesystem::path dump;
  std::filesystem::path out;                      // JSONL dataset
  std::optional<std::filesystem::path> audit;     // JSONL audit trail
  std::optional<std::filesystem::path> replay;    // transcript to serve from
  std::optional<std::filesystem::path> record;    // transcript to write
  std::string base_url = "https://api.twitter.com/1.1";
  std::size_t workers = 1;
  acquisition::FetchPolicy policy;
};
int cmd_fetch(const FetchArgs& args, std::ostream& out, std::ostream& err);

struct ReproduceArgs {
  std::optional<std::filesystem::path> d1;  // at-risk accounts
  std::optional<std::filesystem::path> d2;  // volunteer-flagged accounts
  std::optional<std::filesystem::path> d3;  // random accounts
  /// Draw this many users from D3 before analysis (seeded).
  std::optional<std::size_t> d3_sample_users;
  std::uint64_t seed = 1;
  InputOptions input;
  LexiconOptions lexicon;
  corpus::StdevConvention convention = corpus::StdevConvention::sample;
  OutputOptions output;
};

/// Tail used for `metric` when comparing dataset `a` against `b` (labels
/// "D1", "D2", "D3"). At-risk datasets are tested as larger than the random
/// one; the ellipsis ratio and the D1/D2 pair are two-sided.
stats::Tail reproduce_tail(const std::string& a, const std::string& b, const std::string& metric);

nlohmann::ordered_json reproduce(const ReproduceArgs& args, std::ostream& err);
int cmd_reproduce(const ReproduceArgs& args, std::ostream& out, std::ostream& err);

}  // namespace radrisk::report
