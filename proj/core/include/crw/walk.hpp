#pragma once

#include <cstdint>
#include <vector>

#include "crw/rng.hpp"
#include "crw/schedule.hpp"

namespace crw {

/// One of the 2d unit vectors +-e_axis. Encoded as axis + sign so that
/// "uniform over 2d" is a single index draw.
struct Direction {
  int axis = 0;
  int sign = 1;

  [[nodiscard]] int index() const noexcept { return 2 * axis + (sign > 0 ? 0 : 1); }
  static Direction from_index(int idx) noexcept {
    return Direction{idx / 2, (idx % 2 == 0) ? 1 : -1};
  }
  static Direction uniform(int d, RandomStream& rng) noexcept {
    return from_index(static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(2 * d))));
  }

  friend bool operator==(const Direction&, const Direction&) = default;
};

using Point = std::vector<std::int64_t>;

struct WalkState {
  Point position;
  Direction direction;
  /// Number of steps taken so far. At time 0 the direction is unset and the
  /// first step always draws it uniformly.
  std::int64_t time = 0;
};

WalkState initial_state(int d);

struct TurnEvent {
  /// Step index n at which the direction was redrawn; the step S_n - S_{n-1}
  /// already uses new_direction.
  std::int64_t update_time;
  Direction new_direction;

  friend bool operator==(const TurnEvent&, const TurnEvent&) = default;
};

/// A trajectory stored sparsely as its update events. Between consecutive
/// update times the walk moves in a straight line; the first event is
/// always at time 1 when horizon >= 1.
struct Path {
  int dimension = 1;
  Point start;
  std::vector<TurnEvent> events;
  std::int64_t horizon = 0;

  /// S_n for 0 <= n <= horizon, reconstructed from the events.
  [[nodiscard]] Point position_at(std::int64_t n) const;
  [[nodiscard]] Point endpoint() const { return position_at(horizon); }
  /// Direction of step n (1 <= n <= horizon).
  [[nodiscard]] Direction direction_at(std::int64_t n) const;
};

/// Advances the walk one step: with probability p_n (always at n = 1) the
/// direction is redrawn uniformly over all 2d unit vectors, possibly
/// unchanged; then the position moves one unit along it.
WalkState step(const WalkState& state, const Schedule& schedule, RandomStream& rng);

/// Direct simulation by repeated stepping.
Path simulate(int d, const Schedule& schedule, std::int64_t n_steps, RandomStream& rng);

/// Samples update times of a schedule up to a fixed horizon.
///
/// Constant(p) uses Geometric(p) gaps by inversion. Otherwise the next
/// update after m is found by Bernoulli thinning while p_{m+1} >= 0.1, and by
/// inverting the survival product prod_{j>m}(1 - p_j) against a uniform
/// variate when the turning probability is small; the survival product is
/// held as a precomputed prefix sum of log(1 - p_j), so each inversion is a
/// binary search. The tables are immutable after construction and may be
/// shared across threads.
class UpdateClock {
 public:
  static constexpr double kThinningThreshold = 0.1;

  UpdateClock(const Schedule& schedule, std::int64_t horizon);

  [[nodiscard]] std::int64_t horizon() const noexcept { return horizon_; }

  /// Approximate number of updates of one trajectory; used to size buffers.
  [[nodiscard]] std::size_t expected_updates() const noexcept;

  /// Next update time strictly after m, or horizon() + 1 if there is none
  /// within the horizon.
  std::int64_t next_after(std::int64_t m, RandomStream& rng) const;

 private:
  std::int64_t horizon_;
  bool constant_ = false;
  double constant_p_ = 0.0;
  double constant_log_q_ = 0.0;
  std::vector<double> p_;        // p_[n] for 1 <= n <= horizon
  std::vector<double> cum_log_;  // sum_{j <= n, p_j < 1} log(1 - p_j)
  std::vector<std::int64_t> certain_;  // times with p_j == 1
};

/// Event-driven simulation: samples only the update times and the new
/// directions. Same law as simulate().
Path simulate_events(int d, const Schedule& schedule, std::int64_t n_steps,
                     RandomStream& rng);
Path simulate_events(int d, const UpdateClock& clock, RandomStream& rng);

/// Calls on_event(update_time, new_direction) for every update of one
/// event-driven trajectory, in time order. RNG draws are interleaved as
/// direction, next time, direction, ... so this is the single source of
/// truth for simulate_events().
template <class OnEvent>
void for_each_update(int d, const UpdateClock& clock, RandomStream& rng,
                     OnEvent&& on_event) {
  const std::int64_t n = clock.horizon();
  std::int64_t t = 1;
  while (t <= n) {
    on_event(t, Direction::uniform(d, rng));
    t = clock.next_after(t, rng);
  }
}

/// Number of times 1 <= n <= horizon with S_n == target.
std::int64_t visits(const Path& path, const Point& target);

/// Number of times after < n <= upto with S_n == target.
std::int64_t visits_between(const Path& path, const Point& target, std::int64_t after,
                            std::int64_t upto);

/// Dense positions S_0..S_horizon; test and export use only.
std::vector<Point> replay(const Path& path);

}  // namespace crw
