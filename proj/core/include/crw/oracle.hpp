#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "crw/schedule.hpp"
#include "crw/walk.hpp"

namespace crw {

/// Exact law of (S_n, Y_n) at a fixed horizon, held densely over the box
/// [-n, n]^d times the 2d directions.
class ExactDistribution {
 public:
  struct Entry {
    Point position;
    Direction direction;
    double probability;
  };

  ExactDistribution(int d, std::int64_t horizon);

  [[nodiscard]] int dimension() const noexcept { return d_; }
  [[nodiscard]] std::int64_t horizon() const noexcept { return n_; }
  /// Accumulated floating-point error bound on every probability and on the
  /// total mass.
  [[nodiscard]] double error_bound() const noexcept { return error_bound_; }

  [[nodiscard]] double probability(const Point& position, Direction direction) const;
  /// P(S_n = position), summed over directions.
  [[nodiscard]] double marginal(const Point& position) const;
  [[nodiscard]] double total_mass() const;
  /// Nonzero entries in lexicographic position order, then direction index.
  [[nodiscard]] std::vector<Entry> entries() const;
  /// Nonzero marginals keyed by position.
  [[nodiscard]] std::map<Point, double> marginals() const;

 private:
  friend ExactDistribution exact_distribution(int, const Schedule&, std::int64_t,
                                              std::optional<std::int64_t>);

  [[nodiscard]] std::size_t cell(const Point& position) const;
  [[nodiscard]] Point position_of(std::size_t cell) const;

  int d_;
  std::int64_t n_;
  std::int64_t side_;
  std::size_t cells_;
  std::vector<double> mass_;  // mass_[cell * 2d + direction index]
  double error_bound_ = 0.0;
};

/// Largest horizon exact_distribution accepts by default for dimension d.
std::int64_t default_exact_cap(int d);

/// Forward dynamic programme over (position, direction). At step 1 the mass
/// is uniform over the 2d unit vectors; at step k each direction keeps
/// (1 - p_k) of its own mass and receives p_k / (2d) of the cell total.
/// Throws ResourceError when n exceeds the cap (default_exact_cap(d) unless
/// given).
ExactDistribution exact_distribution(int d, const Schedule& schedule, std::int64_t n,
                                     std::optional<std::int64_t> cap = std::nullopt);

/// E[L_n^m] for the one-dimensional homogeneous walk by enumeration of the
/// 2^(n-1) sign-flip patterns W_2..W_n, each flip having probability p/2.
/// Throws ResourceError for n > 14.
double brute_force_L_moment(double p, int n, int m);

}  // namespace crw
