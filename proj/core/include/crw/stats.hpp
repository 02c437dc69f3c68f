#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace crw::stats {

/// Count, sum and sum of squares; merged shard by shard in index order.
struct Moments {
  std::int64_t count = 0;
  long double sum = 0.0L;
  long double sum_sq = 0.0L;

  void add(double x) noexcept {
    ++count;
    sum += x;
    sum_sq += static_cast<long double>(x) * x;
  }
  void merge(const Moments& other) noexcept {
    count += other.count;
    sum += other.sum;
    sum_sq += other.sum_sq;
  }
  [[nodiscard]] double mean() const noexcept;
  /// Unbiased sample variance (0 for fewer than two observations).
  [[nodiscard]] double variance() const noexcept;
  /// Standard error of the mean.
  [[nodiscard]] double std_error() const noexcept;
};

double normal_cdf(double x) noexcept;

/// sup_x |F_N(x) - F(x)| for the empirical CDF of the sample. Ties are
/// handled exactly, so lattice data is fine.
double ks_one_sample(std::vector<double> sample, const std::function<double(double)>& cdf);

/// sup_x |F_N(x) - G_M(x)|, evaluated only after all tied values are consumed.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Asymptotic 1% critical values: 1.63 / sqrt(N) and 1.63 sqrt((N + M) / (N M)).
double ks_critical_1pct(std::int64_t n);
double ks_critical_1pct(std::int64_t n, std::int64_t m);

struct ChiSquare {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

/// Upper tail of the chi-square law.
double chi_square_sf(double statistic, int dof);

/// Goodness of fit of integer counts to Poisson(lambda). Cells are 0, 1, ...
/// merged so every expected count is at least min_expected; the last cell
/// collects the upper tail.
ChiSquare chi_square_poisson(const std::vector<std::int64_t>& counts, double lambda,
                             double min_expected = 5.0);

/// Pearson test of homogeneity/independence on an r x c table of counts.
/// Columns with zero total are dropped.
ChiSquare chi_square_contingency(const std::vector<std::vector<double>>& table);

}  // namespace crw::stats
