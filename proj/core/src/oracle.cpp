#include "crw/oracle.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "crw/errors.hpp"

namespace crw {

ExactDistribution::ExactDistribution(int d, std::int64_t horizon) : d_(d), n_(horizon) {
  side_ = 2 * n_ + 1;
  cells_ = 1;
  for (int j = 0; j < d_; ++j) cells_ *= static_cast<std::size_t>(side_);
  mass_.assign(cells_ * static_cast<std::size_t>(2 * d_), 0.0);
}

std::size_t ExactDistribution::cell(const Point& position) const {
  std::size_t idx = 0;
  for (int j = d_ - 1; j >= 0; --j) {
    idx = idx * static_cast<std::size_t>(side_) +
          static_cast<std::size_t>(position[static_cast<std::size_t>(j)] + n_);
  }
  return idx;
}

Point ExactDistribution::position_of(std::size_t c) const {
  Point pos(static_cast<std::size_t>(d_));
  for (int j = 0; j < d_; ++j) {
    pos[static_cast<std::size_t>(j)] = static_cast<std::int64_t>(c % static_cast<std::size_t>(side_)) - n_;
    c /= static_cast<std::size_t>(side_);
  }
  return pos;
}

double ExactDistribution::probability(const Point& position, Direction direction) const {
  if (position.size() != static_cast<std::size_t>(d_)) {
    throw DomainError("ExactDistribution: position has the wrong dimension");
  }
  for (auto x : position) {
    if (x < -n_ || x > n_) return 0.0;
  }
  return mass_[cell(position) * static_cast<std::size_t>(2 * d_) +
               static_cast<std::size_t>(direction.index())];
}

double ExactDistribution::marginal(const Point& position) const {
  double total = 0.0;
  for (int k = 0; k < 2 * d_; ++k) total += probability(position, Direction::from_index(k));
  return total;
}

double ExactDistribution::total_mass() const {
  long double total = 0.0L;
  for (double m : mass_) total += m;
  return static_cast<double>(total);
}

std::vector<ExactDistribution::Entry> ExactDistribution::entries() const {
  std::vector<Entry> out;
  const auto dirs = static_cast<std::size_t>(2 * d_);
  for (const auto& [pos, _] : marginals()) {
    const std::size_t base = cell(pos) * dirs;
    for (std::size_t k = 0; k < dirs; ++k) {
      if (mass_[base + k] > 0.0) {
        out.push_back({pos, Direction::from_index(static_cast<int>(k)), mass_[base + k]});
      }
    }
  }
  return out;
}

std::map<Point, double> ExactDistribution::marginals() const {
  std::map<Point, double> out;
  const auto dirs = static_cast<std::size_t>(2 * d_);
  for (std::size_t c = 0; c < cells_; ++c) {
    double total = 0.0;
    for (std::size_t k = 0; k < dirs; ++k) total += mass_[c * dirs + k];
    if (total > 0.0) out.emplace(position_of(c), total);
  }
  return out;
}

std::int64_t default_exact_cap(int d) {
  switch (d) {
    case 1: return 500;
    case 2: return 20;
    case 3: return 10;
    default: return 4;
  }
}

ExactDistribution exact_distribution(int d, const Schedule& schedule, std::int64_t n,
                                     std::optional<std::int64_t> cap) {
  if (d < 1) throw DomainError("exact_distribution: d must be >= 1");
  if (n < 1) throw DomainError("exact_distribution: n must be >= 1");
  const std::int64_t limit = cap.value_or(default_exact_cap(d));
  if (n > limit) {
    throw ResourceError("exact_distribution: n = " + std::to_string(n) +
                        " exceeds the cap " + std::to_string(limit) + " for d = " +
                        std::to_string(d));
  }

  ExactDistribution dist(d, n);
  const auto dirs = static_cast<std::size_t>(2 * d);
  std::vector<std::size_t> stride(static_cast<std::size_t>(d));
  std::size_t s = 1;
  for (int j = 0; j < d; ++j) {
    stride[static_cast<std::size_t>(j)] = s;
    s *= static_cast<std::size_t>(dist.side_);
  }
  // Offset in cell index of a move along direction k.
  std::vector<std::ptrdiff_t> shift(dirs);
  for (std::size_t k = 0; k < dirs; ++k) {
    const Direction dir = Direction::from_index(static_cast<int>(k));
    shift[k] = dir.sign * static_cast<std::ptrdiff_t>(stride[static_cast<std::size_t>(dir.axis)]);
  }

  const std::size_t origin = dist.cell(Point(static_cast<std::size_t>(d), 0));
  for (std::size_t k = 0; k < dirs; ++k) {
    dist.mass_[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(origin) + shift[k]) * dirs + k] =
        1.0 / static_cast<double>(dirs);
  }

  std::vector<double> next(dist.mass_.size());
  const double share = 1.0 / static_cast<double>(dirs);
  for (std::int64_t step = 2; step <= n; ++step) {
    const double p = schedule.p_at(step);
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t c = 0; c < dist.cells_; ++c) {
      const double* here = &dist.mass_[c * dirs];
      double total = 0.0;
      for (std::size_t k = 0; k < dirs; ++k) total += here[k];
      if (total == 0.0) continue;
      const double fresh = p * share * total;
      for (std::size_t k = 0; k < dirs; ++k) {
        const auto target = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(c) + shift[k]);
        next[target * dirs + k] += (1.0 - p) * here[k] + fresh;
      }
    }
    dist.mass_.swap(next);
  }
  // Each step forms a cell total (2d additions) and one fused update per
  // entry; relative error per step is below (2d + 4) unit roundoffs.
  dist.error_bound_ = static_cast<double>(n) * static_cast<double>(dirs + 4) *
                      std::numeric_limits<double>::epsilon();
  return dist;
}

double brute_force_L_moment(double p, int n, int m) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("brute_force_L_moment: p must lie in [0, 1]");
  if (n < 1) throw DomainError("brute_force_L_moment: n must be >= 1");
  if (m < 0) throw DomainError("brute_force_L_moment: m must be >= 0");
  if (n > 14) {
    throw ResourceError("brute_force_L_moment: n = " + std::to_string(n) +
                        " exceeds the enumeration cap 14");
  }
  if (m % 2 == 1) return 0.0;  // L_n is symmetric

  const long double flip = static_cast<long double>(p) / 2;
  const long double stay = 1 - flip;
  const std::uint32_t patterns = 1U << (n - 1);
  long double moment = 0.0L;
  for (std::uint32_t w = 0; w < patterns; ++w) {
    long double weight = 1.0L;
    long long sign = 1;
    long long sum = 1;  // Y_1 = +1; even moments do not depend on it
    for (int k = 0; k < n - 1; ++k) {
      if ((w >> k) & 1U) {
        weight *= flip;
        sign = -sign;
      } else {
        weight *= stay;
      }
      sum += sign;
    }
    long double power = 1.0L;
    for (int e = 0; e < m; ++e) power *= static_cast<long double>(sum);
    moment += weight * power;
  }
  return static_cast<double>(moment);
}

}  // namespace crw
