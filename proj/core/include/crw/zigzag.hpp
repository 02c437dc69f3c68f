#pragma once

#include <cstddef>
#include <vector>

#include "crw/rng.hpp"
#include "crw/walk.hpp"

namespace crw {

/// Intensity of the direction-change process in the critical regime:
/// b = (2d - 1) a / (2d).
double b_from_a(double a, int d);

/// Points of a Poisson process with intensity b/x dx on (epsilon, horizon].
struct PPPRealization {
  std::vector<double> points;  // strictly increasing
  double epsilon = 0.0;
  double horizon = 0.0;
  double intensity_b = 0.0;
};

/// Samples the scale-free Poisson process. In log coordinates the process is
/// homogeneous with rate b, so points are generated from exponential gaps
/// starting at ln(epsilon). epsilon == T yields no points.
PPPRealization sample_ppp(double b, double epsilon, double T, RandomStream& rng);

/// Intervals (boundaries[k], boundaries[k+1]] with one direction each.
struct LabeledIntervals {
  int dimension = 1;
  std::vector<double> boundaries;  // epsilon, points..., T
  std::vector<Direction> labels;   // one per interval
  std::size_t anchor = 0;          // index of the interval containing t = 1

  [[nodiscard]] std::size_t size() const noexcept { return labels.size(); }
  [[nodiscard]] double left(std::size_t k) const { return boundaries[k]; }
  [[nodiscard]] double right(std::size_t k) const { return boundaries[k + 1]; }
};

/// Labels the intervals of a realization: the interval containing 1 gets a
/// uniform direction, then the chain moves outwards (first towards epsilon,
/// then towards T), each label uniform over the 2d - 1 directions other than
/// its already labelled neighbour. Requires epsilon < 1 <= T.
LabeledIntervals label_intervals(const PPPRealization& ppp, int d, RandomStream& rng);

class ZigzagPath {
 public:
  explicit ZigzagPath(LabeledIntervals intervals);

  [[nodiscard]] const LabeledIntervals& intervals() const noexcept { return intervals_; }
  [[nodiscard]] int dimension() const noexcept { return intervals_.dimension; }
  [[nodiscard]] double epsilon() const { return intervals_.boundaries.front(); }
  [[nodiscard]] double horizon() const { return intervals_.boundaries.back(); }

  /// Signed occupation time of each axis direction over (epsilon, t].
  /// Requires epsilon < t <= T.
  [[nodiscard]] std::vector<double> position_at(double t) const;

 private:
  LabeledIntervals intervals_;
};

/// sample_ppp followed by label_intervals.
ZigzagPath sample_zigzag(double b, int d, double epsilon, double T, RandomStream& rng);

}  // namespace crw
