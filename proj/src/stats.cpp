#include "radrisk/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include <fmt/format.h>

#include "radrisk/error.hpp"

namespace radrisk::stats {

std::string_view to_string(Tail t) {
  switch (t) {
    case Tail::greater: return "greater";
    case Tail::less: return "less";
    case Tail::two_sided: return "two_sided";
  }
  return "two_sided";
}

std::string_view to_string(Method m) {
  return m == Method::exact ? "exact" : "normal_approx";
}

std::optional<Tail> tail_from_string(std::string_view s) {
  if (s == "greater") return Tail::greater;
  if (s == "less") return Tail::less;
  if (s == "two_sided" || s == "two-sided" || s == "two.sided") return Tail::two_sided;
  return std::nullopt;
}

std::vector<double> rank_with_ties(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double midrank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = midrank;
    i = j + 1;
  }
  return ranks;
}

// --- exact distribution ---------------------------------------------------

std::vector<double> mann_whitney_counts(std::size_t n1, std::size_t n2) {
  // f[i][j][u]: labelings of i x's and j y's with U = u. Either the largest
  // observation is an x (it beats all j y's) or a y.
  std::vector<std::vector<std::vector<double>>> f(n1 + 1, std::vector<std::vector<double>>(n2 + 1));
  for (std::size_t i = 0; i <= n1; ++i) {
    for (std::size_t j = 0; j <= n2; ++j) {
      auto& cur = f[i][j];
      cur.assign(i * j + 1, 0.0);
      if (i == 0 || j == 0) {
        cur[0] = 1.0;
        continue;
      }
      const auto& x_top = f[i - 1][j];
      for (std::size_t u = 0; u < x_top.size(); ++u) cur[u + j] += x_top[u];
      const auto& y_top = f[i][j - 1];
      for (std::size_t u = 0; u < y_top.size(); ++u) cur[u] += y_top[u];
    }
  }
  return f[n1][n2];
}

double exact_p_value(double u, std::size_t n1, std::size_t n2, Tail tail) {
  const auto counts = mann_whitney_counts(n1, n2);
  const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  const auto w = static_cast<long long>(std::llround(u));
  const auto max_u = static_cast<long long>(n1 * n2);

  auto mass = [&](auto keep) {
    double s = 0.0;
    for (long long k = 0; k <= max_u; ++k) {
      if (keep(k)) s += counts[static_cast<std::size_t>(k)];
    }
    return s / total;
  };

  switch (tail) {
    case Tail::greater: return mass([&](long long k) { return k >= w; });
    case Tail::less: return mass([&](long long k) { return k <= w; });
    case Tail::two_sided: {
      // |2k - n1 n2| >= |2w - n1 n2| keeps everything integral
      const long long d = std::llabs(2 * w - max_u);
      return std::min(1.0, mass([&](long long k) { return std::llabs(2 * k - max_u) >= d; }));
    }
  }
  return 1.0;
}

// --- normal approximation -------------------------------------------------

namespace {

double upper_normal(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

double clamp_p(double p) {
  return std::clamp(p, std::numeric_limits<double>::min(), 1.0);
}

}  // namespace

double normal_p_value(double u, std::size_t n1, std::size_t n2, double tie_term, Tail tail,
                      bool continuity_correction) {
  const double a = static_cast<double>(n1);
  const double b = static_cast<double>(n2);
  const double n = a + b;
  const double mu = a * b / 2.0;
  const double var = (a * b / 12.0) * ((n + 1.0) - tie_term / (n * (n - 1.0)));
  if (!(var > 0.0)) return 1.0;
  const double sd = std::sqrt(var);
  const double cc = continuity_correction ? 0.5 : 0.0;

  const double p_greater = upper_normal((u - mu - cc) / sd);
  const double p_less = upper_normal((mu - u - cc) / sd);
  switch (tail) {
    case Tail::greater: return clamp_p(p_greater);
    case Tail::less: return clamp_p(p_less);
    case Tail::two_sided: return clamp_p(2.0 * std::min(p_greater, p_less));
  }
  return 1.0;
}

RankSumResult wilcoxon_rank_sum(std::span<const double> x, std::span<const double> y, Tail tail,
                                const RankSumOptions& options) {
  if (x.empty() || y.empty()) throw UsageError("rank-sum test needs two non-empty samples");
  for (double v : x) {
    if (std::isnan(v)) throw UsageError("rank-sum test input contains NaN");
  }
  for (double v : y) {
    if (std::isnan(v)) throw UsageError("rank-sum test input contains NaN");
  }

  RankSumResult r;
  r.tail = tail;
  r.n1 = x.size();
  r.n2 = y.size();

  std::vector<double> pooled(x.begin(), x.end());
  pooled.insert(pooled.end(), y.begin(), y.end());
  const auto ranks = rank_with_ties(pooled);
  const double r1 = std::accumulate(ranks.begin(), ranks.begin() + static_cast<long>(x.size()), 0.0);
  const double n1 = static_cast<double>(r.n1);
  r.w_statistic = r1 - n1 * (n1 + 1.0) / 2.0;

  std::sort(pooled.begin(), pooled.end());
  double tie_term = 0.0;
  bool ties = false;
  for (std::size_t i = 0; i < pooled.size();) {
    std::size_t j = i;
    while (j < pooled.size() && pooled[j] == pooled[i]) ++j;
    const double t = static_cast<double>(j - i);
    if (j - i > 1) ties = true;
    tie_term += t * t * t - t;
    i = j;
  }

  if (pooled.front() == pooled.back()) {
    r.degenerate = true;
    r.method = Method::normal_approx;
    r.p_value = 1.0;
    return r;
  }

  Method method = (!ties && r.n1 + r.n2 <= options.exact_max_total) ? Method::exact
                                                                     : Method::normal_approx;
  if (options.force_method) {
    if (*options.force_method == Method::exact && ties) {
      throw UsageError("exact rank-sum distribution requires tie-free samples");
    }
    method = *options.force_method;
  }
  r.method = method;
  r.p_value = method == Method::exact
                  ? exact_p_value(r.w_statistic, r.n1, r.n2, tail)
                  : normal_p_value(r.w_statistic, r.n1, r.n2, tie_term, tail,
                                   options.continuity_correction);
  return r;
}

// --- descriptive ----------------------------------------------------------

double mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double stdev(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double m = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw UsageError("quantile of an empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double median(std::span<const double> values) {
  std::vector<double> s(values.begin(), values.end());
  std::sort(s.begin(), s.end());
  return quantile_sorted(s, 0.5);
}

Ecdf::Ecdf(std::span<const double> values) : sorted_(values.begin(), values.end()) {
  if (sorted_.empty()) throw UsageError("ECDF of an empty sample");
  std::sort(sorted_.begin(), sorted_.end());
}

double Ecdf::operator()(double x) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

std::vector<std::pair<double, double>> Ecdf::steps() const {
  std::vector<std::pair<double, double>> out;
  const double n = static_cast<double>(sorted_.size());
  for (std::size_t i = 0; i < sorted_.size(); ++i) {
    if (i + 1 < sorted_.size() && sorted_[i + 1] == sorted_[i]) continue;
    out.emplace_back(sorted_[i], static_cast<double>(i + 1) / n);
  }
  return out;
}

Ecdf ecdf(std::span<const double> values) { return Ecdf(values); }

// --- density --------------------------------------------------------------

double DensitySeries::integral() const {
  double s = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    s += 0.5 * (points[i].second + points[i - 1].second) * (points[i].first - points[i - 1].first);
  }
  return s;
}

double DensitySeries::at(double x) const {
  if (points.empty() || x < points.front().first || x > points.back().first) return 0.0;
  const auto hi = std::lower_bound(points.begin(), points.end(), x,
                                   [](const auto& p, double v) { return p.first < v; });
  if (hi == points.begin()) return hi->second;
  const auto lo = hi - 1;
  const double t = (x - lo->first) / (hi->first - lo->first);
  return lo->second + t * (hi->second - lo->second);
}

double silverman_bandwidth(std::span<const double> values) {
  if (values.size() < 2) throw DegenerateDistributionError("bandwidth needs at least two values");
  std::vector<double> s(values.begin(), values.end());
  std::sort(s.begin(), s.end());
  if (s.front() == s.back()) {
    throw DegenerateDistributionError("all values identical; use the ECDF instead");
  }
  const double sd = stdev(s);
  const double iqr = quantile_sorted(s, 0.75) - quantile_sorted(s, 0.25);
  double spread = std::min(sd, iqr / 1.34);
  if (!(spread > 0.0)) spread = sd;
  return 0.9 * spread * std::pow(static_cast<double>(s.size()), -0.2);
}

DensitySeries kde_density(std::span<const double> values, std::optional<double> bandwidth) {
  if (values.empty()) throw DegenerateDistributionError("density of an empty sample");
  const double h = bandwidth ? *bandwidth : silverman_bandwidth(values);
  if (!(h > 0.0) || !std::isfinite(h)) throw UsageError("bandwidth must be positive");

  std::vector<double> s(values.begin(), values.end());
  std::sort(s.begin(), s.end());
  const double lo = s.front() - 3.0 * h;
  const double hi = s.back() + 3.0 * h;

  constexpr std::size_t kMaxPoints = std::size_t{1} << 20;
  const auto needed = static_cast<std::size_t>(std::ceil((hi - lo) / (h / 2.0))) + 1;
  const std::size_t npts = std::clamp(needed, kDensityPoints, kMaxPoints);

  DensitySeries d;
  d.bandwidth = h;
  d.points.reserve(npts);
  const double step = (hi - lo) / static_cast<double>(npts - 1);
  const double norm = 1.0 / (static_cast<double>(s.size()) * h * std::sqrt(2.0 * M_PI));
  constexpr double kCutoff = 8.0;  // kernel weight beyond 8h is below 1e-14
  for (std::size_t i = 0; i < npts; ++i) {
    const double x = i + 1 == npts ? hi : lo + step * static_cast<double>(i);
    const auto first = std::lower_bound(s.begin(), s.end(), x - kCutoff * h);
    const auto last = std::upper_bound(first, s.end(), x + kCutoff * h);
    double sum = 0.0;
    for (auto it = first; it != last; ++it) {
      const double z = (x - *it) / h;
      sum += std::exp(-0.5 * z * z);
    }
    d.points.emplace_back(x, sum * norm);
  }
  return d;
}

QuantileSummary quantile_summary(std::span<const double> values) {
  if (values.empty()) throw UsageError("quantile summary of an empty sample");
  std::vector<double> s(values.begin(), values.end());
  std::sort(s.begin(), s.end());
  QuantileSummary q;
  q.min = s.front();
  q.max = s.back();
  q.q1 = quantile_sorted(s, 0.25);
  q.median = quantile_sorted(s, 0.5);
  q.q3 = quantile_sorted(s, 0.75);
  const double iqr = q.q3 - q.q1;
  const double lo_fence = q.q1 - 1.5 * iqr;
  const double hi_fence = q.q3 + 1.5 * iqr;
  q.lower_whisker = q.max;
  q.upper_whisker = q.min;
  for (double v : s) {
    if (v < lo_fence || v > hi_fence) {
      q.outliers.push_back(v);
    } else {
      q.lower_whisker = std::min(q.lower_whisker, v);
      q.upper_whisker = std::max(q.upper_whisker, v);
    }
  }
  return q;
}

void write_density_csv(std::ostream& out, const DensitySeries& d) {
  out << "x,y\n";
  for (const auto& [x, y] : d.points) out << fmt::format("{:.9g},{:.9g}\n", x, y);
}

void write_ecdf_csv(std::ostream& out, const Ecdf& e) {
  out << "x,F\n";
  for (const auto& [x, f] : e.steps()) out << fmt::format("{:.9g},{:.9g}\n", x, f);
}

void write_box_csv(std::ostream& out, const QuantileSummary& q) {
  out << "min,q1,median,q3,max,lower_whisker,upper_whisker,outliers\n";
  std::string outliers;
  for (std::size_t i = 0; i < q.outliers.size(); ++i) {
    if (i) outliers += ';';
    outliers += fmt::format("{:.9g}", q.outliers[i]);
  }
  out << fmt::format("{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{}\n", q.min, q.q1,
                     q.median, q.q3, q.max, q.lower_whisker, q.upper_whisker, outliers);
}

}  // namespace radrisk::stats
