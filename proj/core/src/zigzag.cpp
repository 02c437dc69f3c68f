#include "crw/zigzag.hpp"

#include <algorithm>
#include <cmath>

#include "crw/errors.hpp"

namespace crw {

double b_from_a(double a, int d) {
  if (!(a > 0.0) || d < 1) throw DomainError("b_from_a: requires a > 0 and d >= 1");
  return (2.0 * d - 1.0) * a / (2.0 * d);
}

PPPRealization sample_ppp(double b, double epsilon, double T, RandomStream& rng) {
  if (!(b > 0.0)) throw DomainError("sample_ppp: intensity b must be positive");
  if (!(epsilon > 0.0) || epsilon > T) {
    throw DomainError("sample_ppp: requires 0 < epsilon <= T");
  }
  PPPRealization ppp{{}, epsilon, T, b};
  const double log_end = std::log(T);
  double x = std::log(epsilon);
  double last = epsilon;
  while (true) {
    const double next = x + rng.exponential(b);
    if (next >= log_end) break;
    const double point = std::exp(next);
    if (point <= last || point >= T) continue;  // coincident after rounding
    ppp.points.push_back(point);
    last = point;
    x = next;
  }
  return ppp;
}

LabeledIntervals label_intervals(const PPPRealization& ppp, int d, RandomStream& rng) {
  if (d < 1) throw DomainError("label_intervals: d must be >= 1");
  if (!(ppp.epsilon < 1.0 && 1.0 <= ppp.horizon)) {
    throw DomainError("label_intervals: the anchor time 1 must lie in (epsilon, T]");
  }
  LabeledIntervals out;
  out.dimension = d;
  out.boundaries.reserve(ppp.points.size() + 2);
  out.boundaries.push_back(ppp.epsilon);
  out.boundaries.insert(out.boundaries.end(), ppp.points.begin(), ppp.points.end());
  out.boundaries.push_back(ppp.horizon);

  const std::size_t count = out.boundaries.size() - 1;
  const auto first_at_or_above =
      std::lower_bound(out.boundaries.begin() + 1, out.boundaries.end(), 1.0);
  out.anchor = static_cast<std::size_t>(first_at_or_above - out.boundaries.begin()) - 1;

  const auto options = static_cast<std::uint64_t>(2 * d);
  auto differing = [&](const Direction& neighbour) {
    int idx = static_cast<int>(rng.uniform_index(options - 1));
    if (idx >= neighbour.index()) ++idx;
    return Direction::from_index(idx);
  };

  out.labels.resize(count);
  out.labels[out.anchor] = Direction::from_index(static_cast<int>(rng.uniform_index(options)));
  for (std::size_t k = out.anchor; k-- > 0;) out.labels[k] = differing(out.labels[k + 1]);
  for (std::size_t k = out.anchor + 1; k < count; ++k) out.labels[k] = differing(out.labels[k - 1]);
  return out;
}

ZigzagPath::ZigzagPath(LabeledIntervals intervals) : intervals_(std::move(intervals)) {
  if (intervals_.boundaries.size() != intervals_.labels.size() + 1 || intervals_.labels.empty()) {
    throw DomainError("ZigzagPath: boundaries must have one more entry than labels");
  }
}

std::vector<double> ZigzagPath::position_at(double t) const {
  if (!(t > epsilon() && t <= horizon())) {
    throw DomainError("ZigzagPath::position_at: t must lie in (epsilon, T]");
  }
  std::vector<double> z(static_cast<std::size_t>(dimension()), 0.0);
  for (std::size_t k = 0; k < intervals_.size(); ++k) {
    const double lo = intervals_.left(k);
    if (lo >= t) break;
    const double hi = std::min(intervals_.right(k), t);
    const Direction& dir = intervals_.labels[k];
    z[static_cast<std::size_t>(dir.axis)] += dir.sign * (hi - lo);
  }
  return z;
}

ZigzagPath sample_zigzag(double b, int d, double epsilon, double T, RandomStream& rng) {
  const PPPRealization ppp = sample_ppp(b, epsilon, T, rng);
  return ZigzagPath(label_intervals(ppp, d, rng));
}

}  // namespace crw
