#include "crw/stats.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <map>

#include "crw/errors.hpp"

namespace crw::stats {

double Moments::mean() const noexcept {
  return count == 0 ? 0.0 : static_cast<double>(sum / count);
}

double Moments::variance() const noexcept {
  if (count < 2) return 0.0;
  const long double m = sum / count;
  const long double v = (sum_sq - count * m * m) / (count - 1);
  return v > 0 ? static_cast<double>(v) : 0.0;
}

double Moments::std_error() const noexcept {
  return count == 0 ? 0.0 : std::sqrt(variance() / static_cast<double>(count));
}

double normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double ks_one_sample(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw DomainError("ks_one_sample: empty sample");
  std::sort(sample.begin(), sample.end());
  const auto n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw DomainError("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const auto na = static_cast<double>(a.size());
  const auto nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_critical_1pct(std::int64_t n) { return 1.63 / std::sqrt(static_cast<double>(n)); }

double ks_critical_1pct(std::int64_t n, std::int64_t m) {
  const auto a = static_cast<double>(n);
  const auto b = static_cast<double>(m);
  return 1.63 * std::sqrt((a + b) / (a * b));
}

double chi_square_sf(double statistic, int dof) {
  if (dof < 1) return 1.0;
  if (statistic <= 0.0) return 1.0;
  return boost::math::gamma_q(dof / 2.0, statistic / 2.0);
}

ChiSquare chi_square_poisson(const std::vector<std::int64_t>& counts, double lambda,
                             double min_expected) {
  if (counts.empty()) throw DomainError("chi_square_poisson: no observations");
  if (!(lambda > 0.0)) throw DomainError("chi_square_poisson: lambda must be positive");
  std::map<std::int64_t, double> observed;
  for (auto c : counts) {
    if (c < 0) throw DomainError("chi_square_poisson: negative count");
    observed[c] += 1.0;
  }
  const auto total = static_cast<double>(counts.size());

  // Build cells [lo, hi] from the left while enough expected mass remains;
  // the final cell is open to the right.
  struct Cell {
    double expected = 0.0;
    double observed = 0.0;
  };
  std::vector<Cell> cells;
  double pmf = std::exp(-lambda);
  double cdf = 0.0;
  Cell current;
  for (std::int64_t k = 0;; ++k) {
    if (k > 0) pmf *= lambda / static_cast<double>(k);
    current.expected += total * pmf;
    if (auto it = observed.find(k); it != observed.end()) current.observed += it->second;
    cdf += pmf;
    const double rest = total * std::max(0.0, 1.0 - cdf);
    if (current.expected >= min_expected && rest >= min_expected) {
      cells.push_back(current);
      current = {};
    } else if (rest < min_expected) {
      current.expected += rest;
      for (auto it = observed.upper_bound(k); it != observed.end(); ++it) {
        current.observed += it->second;
      }
      cells.push_back(current);
      break;
    }
  }

  ChiSquare out;
  for (const auto& c : cells) {
    out.statistic += (c.observed - c.expected) * (c.observed - c.expected) / c.expected;
  }
  out.dof = static_cast<int>(cells.size()) - 1;
  out.p_value = chi_square_sf(out.statistic, out.dof);
  return out;
}

ChiSquare chi_square_contingency(const std::vector<std::vector<double>>& table) {
  if (table.size() < 2) throw DomainError("chi_square_contingency: needs at least two rows");
  const std::size_t cols = table.front().size();
  for (const auto& row : table) {
    if (row.size() != cols) throw DomainError("chi_square_contingency: ragged table");
  }
  std::vector<double> col_total(cols, 0.0);
  std::vector<double> row_total(table.size(), 0.0);
  double total = 0.0;
  for (std::size_t r = 0; r < table.size(); ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      col_total[c] += table[r][c];
      row_total[r] += table[r][c];
      total += table[r][c];
    }
  }
  if (total <= 0.0) throw DomainError("chi_square_contingency: empty table");
  ChiSquare out;
  std::size_t used_cols = 0;
  for (std::size_t c = 0; c < cols; ++c) {
    if (col_total[c] <= 0.0) continue;
    ++used_cols;
    for (std::size_t r = 0; r < table.size(); ++r) {
      const double expected = row_total[r] * col_total[c] / total;
      if (expected > 0.0) {
        out.statistic += (table[r][c] - expected) * (table[r][c] - expected) / expected;
      }
    }
  }
  std::size_t used_rows = 0;
  for (double t : row_total) used_rows += t > 0.0 ? 1 : 0;
  out.dof = static_cast<int>((used_rows - 1) * (used_cols - 1));
  out.p_value = chi_square_sf(out.statistic, out.dof);
  return out;
}

}  // namespace crw::stats
