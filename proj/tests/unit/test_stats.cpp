#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "radrisk/error.hpp"
#include "radrisk/stats.hpp"
#include "support/oracles.hpp"

using namespace radrisk;
using namespace radrisk::stats;

namespace {

std::vector<double> draw(std::mt19937_64& rng, std::size_t n, double shift = 0.0) {
  std::normal_distribution<double> nd(shift, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = nd(rng);
  return v;
}

std::vector<double> draw_ties(std::mt19937_64& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = static_cast<double>(rng() % 6);
  return v;
}

}  // namespace

TEST_CASE("ranks with ties") {
  CHECK(rank_with_ties(std::vector<double>{3, 1, 2}) == std::vector<double>{3, 1, 2});
  CHECK(rank_with_ties(std::vector<double>{1, 1}) == std::vector<double>{1.5, 1.5});
  CHECK(rank_with_ties(std::vector<double>{2, 2, 2, 5}) == std::vector<double>{2, 2, 2, 4});
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    const auto v = draw_ties(rng, 1 + rng() % 40);
    const auto r = rank_with_ties(v);
    const double n = static_cast<double>(v.size());
    CHECK(std::accumulate(r.begin(), r.end(), 0.0) == n * (n + 1) / 2);
  }
}

TEST_CASE("rank-sum hand examples") {
  const std::vector<double> x{1, 2};
  const std::vector<double> y{3, 4};
  const auto r = wilcoxon_rank_sum(x, y, Tail::less);
  CHECK(r.w_statistic == 0.0);
  CHECK(r.method == Method::exact);
  const auto brute = oracle::brute_force_rank_sum(x, y, Tail::less);
  CHECK(brute.p == doctest::Approx(1.0 / 6.0));
  CHECK(r.p_value == doctest::Approx(brute.p).epsilon(1e-15));
  CHECK(wilcoxon_rank_sum(x, y, Tail::greater).p_value == 1.0);
}

TEST_CASE("identical samples are degenerate") {
  const std::vector<double> x{0.5, 0.5, 0.5};
  const auto r = wilcoxon_rank_sum(x, x, Tail::two_sided);
  CHECK(r.degenerate);
  CHECK(r.p_value == 1.0);
  CHECK(r.w_statistic == 4.5);
  const std::vector<double> same{1, 2, 3, 4};
  CHECK(wilcoxon_rank_sum(same, same, Tail::two_sided).p_value == 1.0);
}

TEST_CASE("rank-sum argument errors") {
  const std::vector<double> x{1, 2};
  const std::vector<double> none;
  CHECK_THROWS_AS(wilcoxon_rank_sum(none, x, Tail::less), UsageError);
  RankSumOptions exact;
  exact.force_method = Method::exact;
  const std::vector<double> tied{1, 1};
  CHECK_THROWS_AS(wilcoxon_rank_sum(tied, x, Tail::less, exact), UsageError);
  CHECK(tail_from_string("greater") == Tail::greater);
  CHECK_FALSE(tail_from_string("up"));
}

TEST_CASE("exact p-values match full enumeration") {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 200; ++i) {
    const auto x = draw(rng, 1 + rng() % 7);
    const auto y = draw(rng, 1 + rng() % 7, 0.5);
    for (auto tail : {Tail::greater, Tail::less, Tail::two_sided}) {
      const auto r = wilcoxon_rank_sum(x, y, tail);
      const auto b = oracle::brute_force_rank_sum(x, y, tail);
      CHECK(r.method == Method::exact);
      CHECK(r.w_statistic == b.u);
      CHECK(std::abs(r.p_value - b.p) < 1e-12);
    }
  }
}

TEST_CASE("mann-whitney counts sum to the binomial coefficient") {
  const auto c = mann_whitney_counts(4, 3);
  CHECK(c.size() == 13);
  CHECK(std::accumulate(c.begin(), c.end(), 0.0) == 35.0);
  for (std::size_t k = 0; k < c.size(); ++k) CHECK(c[k] == c[c.size() - 1 - k]);
}

TEST_CASE("rank-sum properties") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 300; ++i) {
    const bool ties = i % 2 == 0;
    const auto n1 = 1 + rng() % 25;
    const auto n2 = 1 + rng() % 25;
    const auto x = ties ? draw_ties(rng, n1) : draw(rng, n1);
    const auto y = ties ? draw_ties(rng, n2) : draw(rng, n2);
    const auto xy = wilcoxon_rank_sum(x, y, Tail::greater);
    const auto yx = wilcoxon_rank_sum(y, x, Tail::greater);
    CHECK(xy.w_statistic + yx.w_statistic == static_cast<double>(n1 * n2));
    CHECK(xy.w_statistic >= 0.0);
    CHECK(xy.w_statistic <= static_cast<double>(n1 * n2));
    CHECK(xy.p_value > 0.0);
    CHECK(xy.p_value <= 1.0);

    // strictly monotone transform of both samples
    auto fx = x;
    auto fy = y;
    for (auto& v : fx) v = std::exp(v) * 3.0 - 7.0;
    for (auto& v : fy) v = std::exp(v) * 3.0 - 7.0;
    CHECK(wilcoxon_rank_sum(fx, fy, Tail::greater).w_statistic == xy.w_statistic);

    if (xy.method == Method::normal_approx && !xy.degenerate) {
      const double less = wilcoxon_rank_sum(x, y, Tail::less).p_value;
      const double two = wilcoxon_rank_sum(x, y, Tail::two_sided).p_value;
      CHECK(two == doctest::Approx(std::min(1.0, 2.0 * std::min(xy.p_value, less))).epsilon(1e-12));
    }
  }
}

TEST_CASE("normal approximation tracks the exact distribution") {
  std::mt19937_64 rng(4);
  RankSumOptions approx;
  approx.force_method = Method::normal_approx;
  for (int i = 0; i < 100; ++i) {
    const auto x = draw(rng, 10);
    const auto y = draw(rng, 10, 0.3);
    for (auto tail : {Tail::greater, Tail::two_sided}) {
      const double pe = wilcoxon_rank_sum(x, y, tail).p_value;
      const double pa = wilcoxon_rank_sum(x, y, tail, approx).p_value;
      CHECK(std::abs(pe - pa) < 0.02);
    }
  }
}

TEST_CASE("normal p-value reference points") {
  // n1 = n2 = 10, no ties: mean 50, sd sqrt(175); U = 75 greater.
  const double z = (75.0 - 50.0 - 0.5) / std::sqrt(175.0);
  CHECK(normal_p_value(75, 10, 10, 0.0, Tail::greater) == doctest::Approx(0.5 * std::erfc(z / std::sqrt(2.0))));
  CHECK(normal_p_value(50, 10, 10, 0.0, Tail::two_sided) == 1.0);
}

TEST_CASE("descriptive statistics") {
  const std::vector<double> v{4, 1, 3, 2};
  CHECK(mean(v) == 2.5);
  CHECK(median(v) == 2.5);
  CHECK(stdev(v) == doctest::Approx(std::sqrt(5.0 / 3.0)));
  CHECK(stdev(std::vector<double>{7}) == 0.0);
}

TEST_CASE("ecdf") {
  const std::vector<double> v{1, 2, 3};
  const auto f = ecdf(v);
  CHECK(f(2) == doctest::Approx(2.0 / 3.0));
  CHECK(f(3) == 1.0);
  CHECK(f(0.5) == 0.0);
  CHECK(f(1.999) == doctest::Approx(1.0 / 3.0));
  const auto steps = ecdf(std::vector<double>{2, 1, 2}).steps();
  REQUIRE(steps.size() == 2);
  CHECK(steps[0] == std::pair<double, double>{1.0, 1.0 / 3.0});
  CHECK(steps[1] == std::pair<double, double>{2.0, 1.0});
}

TEST_CASE("kde tracks the kernel-smoothed normal density") {
  // E[f_h(0)] for N(0,1) data is the N(0, 1 + h^2) density at 0; the
  // estimate's spread at n = 10^4 is about 0.008.
  double sum = 0.0;
  double expected = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(seed);
    const auto d = kde_density(draw(rng, 10000));
    sum += d.at(0.0);
    expected += 1.0 / std::sqrt(2.0 * M_PI * (1.0 + d.bandwidth * d.bandwidth));
  }
  CHECK(std::abs(sum - expected) / 20.0 < 0.005);
}

TEST_CASE("kde on standard normal samples") {
  std::mt19937_64 rng(107);
  const auto v = draw(rng, 10000);
  const auto d = kde_density(v);
  CHECK(d.points.size() >= kDensityPoints);
  CHECK(d.bandwidth > 0.0);
  CHECK(std::abs(d.integral() - 1.0) < 0.01);
  CHECK(std::abs(d.at(0.0) - 0.3989) < 0.02);
  for (std::size_t i = 1; i < d.points.size(); ++i) CHECK(d.points[i].first > d.points[i - 1].first);
  CHECK(d.at(d.points.front().first - 1.0) == 0.0);
}

TEST_CASE("kde of symmetric data is symmetric") {
  std::vector<double> v{-3, -1, -0.5, 0, 0.5, 1, 3};
  const auto d = kde_density(v);
  for (double x : {0.2, 0.7, 1.5, 2.5, 4.0}) CHECK(d.at(x) == doctest::Approx(d.at(-x)).epsilon(1e-6));
}

TEST_CASE("kde bandwidth and degenerate input") {
  const std::vector<double> same{2, 2, 2};
  CHECK_THROWS_AS(kde_density(same), DegenerateDistributionError);
  CHECK_THROWS_AS(silverman_bandwidth(same), DegenerateDistributionError);
  // IQR of zero falls back to the standard deviation
  const std::vector<double> spike{0, 0, 0, 0, 0, 0, 0, 1};
  const double h = silverman_bandwidth(spike);
  CHECK(h == doctest::Approx(0.9 * stdev(spike) * std::pow(8.0, -0.2)));
  // tiny explicit bandwidths still integrate to one
  const std::vector<double> wide{0, 100};
  const auto d = kde_density(wide, 0.05);
  CHECK(std::abs(d.integral() - 1.0) < 0.01);
  std::mt19937_64 rng(6);
  for (int i = 0; i < 50; ++i) {
    auto s = draw_ties(rng, 2 + rng() % 50);
    s.push_back(100.0);
    CHECK(std::abs(kde_density(s).integral() - 1.0) < 0.01);
  }
}

TEST_CASE("quantile summary") {
  const auto q = quantile_summary(std::vector<double>{1, 2, 3, 4, 5});
  CHECK(q.median == 3);
  CHECK(q.q1 == 2);
  CHECK(q.q3 == 4);
  CHECK(q.outliers.empty());
  const auto one = quantile_summary(std::vector<double>{7});
  CHECK(one.min == 7);
  CHECK(one.q1 == 7);
  CHECK(one.median == 7);
  CHECK(one.q3 == 7);
  CHECK(one.max == 7);
  const auto o = quantile_summary(std::vector<double>{0, 0, 0, 10});
  CHECK(o.q1 == 0);
  CHECK(o.q3 == 2.5);
  CHECK(o.outliers == std::vector<double>{10});
  CHECK(o.upper_whisker == 0);
  CHECK(quantile_sorted(std::vector<double>{1, 2, 3, 4}, 0.25) == 1.75);
}

TEST_CASE("csv writers") {
  DensitySeries d;
  d.points = {{0.0, 0.5}, {1.0, 0.5}};
  std::ostringstream dens;
  write_density_csv(dens, d);
  CHECK(dens.str().rfind("x,y\n", 0) == 0);
  std::ostringstream box;
  write_box_csv(box, quantile_summary(std::vector<double>{0, 0, 0, 10}));
  CHECK(box.str().find("outliers") != std::string::npos);
  CHECK(box.str().find("10") != std::string::npos);
  std::ostringstream e;
  write_ecdf_csv(e, ecdf(std::vector<double>{1, 2}));
  CHECK(e.str().find("0.5") != std::string::npos);
}
