#include "crw/walk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "crw/errors.hpp"

namespace crw {

WalkState initial_state(int d) {
  if (d < 1) throw DomainError("dimension must be >= 1");
  return WalkState{Point(static_cast<std::size_t>(d), 0), Direction{}, 0};
}

Point Path::position_at(std::int64_t n) const {
  if (n < 0 || n > horizon) throw DomainError("position_at: time outside [0, horizon]");
  Point pos = start;
  for (std::size_t k = 0; k < events.size() && events[k].update_time <= n; ++k) {
    const std::int64_t next =
        k + 1 < events.size() ? events[k + 1].update_time : horizon + 1;
    const std::int64_t last = std::min(next - 1, n);
    const Direction dir = events[k].new_direction;
    pos[static_cast<std::size_t>(dir.axis)] += dir.sign * (last - events[k].update_time + 1);
  }
  return pos;
}

Direction Path::direction_at(std::int64_t n) const {
  if (n < 1 || n > horizon) throw DomainError("direction_at: time outside [1, horizon]");
  auto it = std::upper_bound(events.begin(), events.end(), n,
                             [](std::int64_t t, const TurnEvent& e) { return t < e.update_time; });
  return std::prev(it)->new_direction;
}

WalkState step(const WalkState& state, const Schedule& schedule, RandomStream& rng) {
  const int d = static_cast<int>(state.position.size());
  WalkState next = state;
  next.time = state.time + 1;
  const double p = schedule.p_at(next.time);
  if (next.time == 1 || p >= 1.0 || (p > 0.0 && rng.uniform() < p)) {
    next.direction = Direction::uniform(d, rng);
  }
  next.position[static_cast<std::size_t>(next.direction.axis)] += next.direction.sign;
  return next;
}

Path simulate(int d, const Schedule& schedule, std::int64_t n_steps, RandomStream& rng) {
  if (n_steps < 0) throw DomainError("simulate: n_steps must be >= 0");
  WalkState state = initial_state(d);
  Path path{d, state.position, {}, n_steps};
  for (std::int64_t n = 1; n <= n_steps; ++n) {
    const double p = schedule.p_at(n);
    if (n == 1 || p >= 1.0 || (p > 0.0 && rng.uniform() < p)) {
      state.direction = Direction::uniform(d, rng);
      path.events.push_back({n, state.direction});
    }
  }
  return path;
}

UpdateClock::UpdateClock(const Schedule& schedule, std::int64_t horizon)
    : horizon_(horizon) {
  if (horizon < 0) throw DomainError("UpdateClock: horizon must be >= 0");
  if (schedule.is_constant()) {
    constant_ = true;
    constant_p_ = schedule.p_at(1);
    constant_log_q_ = constant_p_ < 1.0 ? std::log1p(-constant_p_) : 0.0;
    return;
  }
  const auto size = static_cast<std::size_t>(horizon + 1);
  p_.assign(size, 0.0);
  cum_log_.assign(size, 0.0);
  double acc = 0.0;
  for (std::int64_t n = 1; n <= horizon; ++n) {
    const double p = schedule.p_at(n);
    p_[static_cast<std::size_t>(n)] = p;
    if (p >= 1.0) {
      certain_.push_back(n);
    } else {
      acc += std::log1p(-p);
    }
    cum_log_[static_cast<std::size_t>(n)] = acc;
  }
}

std::size_t UpdateClock::expected_updates() const noexcept {
  if (horizon_ == 0) return 0;
  if (constant_) return static_cast<std::size_t>(1.0 + constant_p_ * static_cast<double>(horizon_ - 1));
  // -cum_log_ bounds sum p_j from below; good enough for a reservation.
  return static_cast<std::size_t>(1.0 - cum_log_.back()) + certain_.size();
}

std::int64_t UpdateClock::next_after(std::int64_t m, RandomStream& rng) const {
  const std::int64_t none = horizon_ + 1;
  if (m >= horizon_) return none;
  if (constant_) {
    if (constant_p_ <= 0.0) return none;
    const std::uint64_t gap = constant_p_ >= 1.0 ? 1 : rng.geometric_log(constant_log_q_);
    const auto room = static_cast<std::uint64_t>(horizon_ - m);
    return gap > room ? none : m + static_cast<std::int64_t>(gap);
  }

  std::int64_t t = m;
  while (t < horizon_) {
    const double p = p_[static_cast<std::size_t>(t + 1)];
    if (p >= kThinningThreshold) {
      if (p >= 1.0 || rng.uniform() < p) return t + 1;
      ++t;
      continue;
    }
    // Survival inversion: first s > t with prod_{t<j<=s}(1 - p_j) < U. Steps
    // with p_j == 1 are excluded from the log table and handled as a hard stop.
    const auto certain = std::upper_bound(certain_.begin(), certain_.end(), t);
    const std::int64_t stop = certain == certain_.end() ? none : *certain;
    const double threshold = cum_log_[static_cast<std::size_t>(t)] + std::log(rng.uniform_open());
    const auto first = cum_log_.begin() + (t + 1);
    const auto last = cum_log_.begin() + std::min(stop, none);
    const auto hit = std::partition_point(first, last, [&](double c) { return c >= threshold; });
    return hit == last ? stop : static_cast<std::int64_t>(hit - cum_log_.begin());
  }
  return none;
}

Path simulate_events(int d, const UpdateClock& clock, RandomStream& rng) {
  if (d < 1) throw DomainError("dimension must be >= 1");
  Path path{d, Point(static_cast<std::size_t>(d), 0), {}, clock.horizon()};
  path.events.reserve(clock.expected_updates());
  for_each_update(d, clock, rng, [&](std::int64_t t, Direction dir) {
    path.events.push_back({t, dir});
  });
  return path;
}

Path simulate_events(int d, const Schedule& schedule, std::int64_t n_steps,
                     RandomStream& rng) {
  if (n_steps < 0) throw DomainError("simulate_events: n_steps must be >= 0");
  return simulate_events(d, UpdateClock(schedule, n_steps), rng);
}

std::int64_t visits_between(const Path& path, const Point& target, std::int64_t after,
                            std::int64_t upto) {
  if (target.size() != path.start.size()) throw DomainError("visits: target dimension mismatch");
  upto = std::min(upto, path.horizon);
  std::int64_t count = 0;
  Point pos = path.start;
  const std::size_t d = pos.size();
  for (std::size_t k = 0; k < path.events.size(); ++k) {
    const TurnEvent& e = path.events[k];
    if (e.update_time > upto) break;
    const std::int64_t next =
        k + 1 < path.events.size() ? path.events[k + 1].update_time : path.horizon + 1;
    const std::int64_t len = std::min(next, path.horizon + 1) - e.update_time;
    const auto axis = static_cast<std::size_t>(e.new_direction.axis);

    bool on_line = true;
    for (std::size_t j = 0; j < d && on_line; ++j) {
      if (j != axis && pos[j] != target[j]) on_line = false;
    }
    if (on_line) {
      const std::int64_t offset = (target[axis] - pos[axis]) * e.new_direction.sign;
      const std::int64_t time = e.update_time - 1 + offset;
      if (offset >= 1 && offset <= len && time > after && time <= upto) ++count;
    }
    pos[axis] += e.new_direction.sign * len;
  }
  return count;
}

std::int64_t visits(const Path& path, const Point& target) {
  return visits_between(path, target, 0, path.horizon);
}

std::vector<Point> replay(const Path& path) {
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(path.horizon + 1));
  Point pos = path.start;
  out.push_back(pos);
  std::size_t k = 0;
  Direction dir{};
  for (std::int64_t n = 1; n <= path.horizon; ++n) {
    while (k < path.events.size() && path.events[k].update_time == n) {
      dir = path.events[k].new_direction;
      ++k;
    }
    pos[static_cast<std::size_t>(dir.axis)] += dir.sign;
    out.push_back(pos);
  }
  return out;
}

}  // namespace crw
