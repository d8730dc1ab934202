#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace radrisk::stats {

enum class Tail { greater, less, two_sided };
enum class Method { exact, normal_approx };

std::string_view to_string(Tail t);
std::string_view to_string(Method m);
std::optional<Tail> tail_from_string(std::string_view s);

/// Midranks: tied values share the mean of the ranks they span.
std::vector<double> rank_with_ties(std::span<const double> values);

struct RankSumOptions {
  /// Normal approximation subtracts 0.5 from |W - mean| toward the null.
  bool continuity_correction = true;
  /// Exact distribution is used when n1 + n2 is at most this and no ties.
  std::size_t exact_max_total = 20;
  /// Pin the method. Exact with ties is rejected with a UsageError.
  std::optional<Method> force_method;
};

/// Wilcoxon rank-sum test in the Mann-Whitney U convention:
/// W = R1 - n1(n1+1)/2 with R1 the rank sum of `x`, so W counts the pairs in
/// which x beats y (ties count one half).
struct RankSumResult {
  double w_statistic = 0.0;
  double p_value = 1.0;
  Tail tail = Tail::two_sided;
  Method method = Method::normal_approx;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  bool degenerate = false;  // every observation identical; p fixed at 1
};

/// `greater` tests whether x is stochastically larger than y.
/// Throws UsageError when either sample is empty.
RankSumResult wilcoxon_rank_sum(std::span<const double> x, std::span<const double> y, Tail tail,
                                const RankSumOptions& options = {});

/// Frequencies of U = 0..n1*n2 over all C(n1+n2, n1) tie-free labelings.
std::vector<double> mann_whitney_counts(std::size_t n1, std::size_t n2);

/// Exact p-value for an integer-valued U. Two-sided sums both tails.
double exact_p_value(double u, std::size_t n1, std::size_t n2, Tail tail);

/// Normal approximation with tie-corrected variance. `tie_term` is
/// sum(t^3 - t) over tie groups of the pooled sample.
double normal_p_value(double u, std::size_t n1, std::size_t n2, double tie_term, Tail tail,
                      bool continuity_correction = true);

// --- descriptive ----------------------------------------------------------

double mean(std::span<const double> values);
/// Sample standard deviation (n - 1); 0 for fewer than two values.
double stdev(std::span<const double> values);
double median(std::span<const double> values);
/// Type-7 quantile (linear interpolation between order statistics) of
/// already sorted values.
double quantile_sorted(std::span<const double> sorted, double p);

/// Right-continuous empirical CDF.
class Ecdf {
 public:
  explicit Ecdf(std::span<const double> values);
  double operator()(double x) const;
  /// (x, F(x)) at every distinct observation, ascending.
  std::vector<std::pair<double, double>> steps() const;

 private:
  std::vector<double> sorted_;
};

Ecdf ecdf(std::span<const double> values);

struct DensitySeries {
  std::vector<std::pair<double, double>> points;  // x strictly increasing
  double bandwidth = 0.0;

  /// Trapezoidal integral of y over x.
  double integral() const;
  /// Linear interpolation between grid points; 0 outside the grid.
  double at(double x) const;
};

/// 0.9 * min(sd, IQR/1.34) * n^(-1/5). When the IQR is zero the standard
/// deviation alone is used. Throws DegenerateDistributionError when the
/// values have no spread.
double silverman_bandwidth(std::span<const double> values);

inline constexpr std::size_t kDensityPoints = 512;

/// Gaussian KDE evaluated on an even grid over [min - 3h, max + 3h]. The grid
/// has kDensityPoints points, or more when that would leave the spacing
/// coarser than h/2.
DensitySeries kde_density(std::span<const double> values,
                          std::optional<double> bandwidth = std::nullopt);

struct QuantileSummary {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  double lower_whisker = 0.0;  // smallest value >= q1 - 1.5 IQR
  double upper_whisker = 0.0;  // largest value <= q3 + 1.5 IQR
  std::vector<double> outliers;
};

QuantileSummary quantile_summary(std::span<const double> values);

void write_density_csv(std::ostream& out, const DensitySeries& d);
void write_ecdf_csv(std::ostream& out, const Ecdf& e);
void write_box_csv(std::ostream& out, const QuantileSummary& q);

}  // namespace radrisk::stats
