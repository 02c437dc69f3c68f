#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "crw/errors.hpp"
#include "crw/oracle.hpp"
#include "crw/stats.hpp"
#include "crw/walk.hpp"

namespace crw {
namespace {

std::int64_t l1(const Point& p) {
  std::int64_t s = 0;
  for (auto x : p) s += std::llabs(x);
  return s;
}

TEST(Step, NoUpdateKeepsDirection) {
  RandomStream rng(1);
  WalkState s = initial_state(3);
  s = step(s, Schedule::constant(0.0), rng);  // step 1 always draws
  const Direction first = s.direction;
  for (int k = 0; k < 100; ++k) {
    s = step(s, Schedule::constant(0.0), rng);
    ASSERT_EQ(s.direction, first);
  }
  EXPECT_EQ(s.time, 101);
  EXPECT_EQ(l1(s.position), 101);
}

TEST(Step, OneDimensionFullUpdateIsFairAndIndependent) {
  RandomStream rng(2);
  const Schedule s = Schedule::constant(1.0);
  stats::Moments up;
  stats::Moments same;
  for (int k = 0; k < 100'000; ++k) {
    WalkState a = step(initial_state(1), s, rng);
    WalkState b = step(a, s, rng);
    up.add(b.direction.sign > 0 ? 1.0 : 0.0);
    same.add(a.direction == b.direction ? 1.0 : 0.0);
  }
  EXPECT_NEAR(up.mean(), 0.5, 4.0 * up.std_error());
  EXPECT_NEAR(same.mean(), 0.5, 4.0 * same.std_error());
}

TEST(Step, PlaneKeepProbability) {
  const double p = 0.6;
  RandomStream rng(3);
  const Schedule s = Schedule::constant(p);
  stats::Moments kept;
  WalkState state = step(initial_state(2), s, rng);
  for (int k = 0; k < 200'000; ++k) {
    const WalkState next = step(state, s, rng);
    kept.add(next.direction == state.direction ? 1.0 : 0.0);
    ASSERT_EQ(l1(next.position) - l1(state.position) == 1 || l1(next.position) - l1(state.position) == -1, true);
    state = next;
  }
  EXPECT_NEAR(kept.mean(), 1.0 - 3.0 * p / 4.0, 4.0 * kept.std_error());
}

TEST(Simulate, ZeroSteps) {
  RandomStream rng(4);
  for (auto path : {simulate(2, Schedule::constant(0.5), 0, rng),
                    simulate_events(2, Schedule::constant(0.5), 0, rng)}) {
    EXPECT_TRUE(path.events.empty());
    EXPECT_EQ(path.endpoint(), (Point{0, 0}));
    EXPECT_EQ(visits(path, Point{0, 0}), 0);
  }
}

TEST(Simulate, EndpointWithinL1Ball) {
  RandomStream rng(5);
  for (int k = 0; k < 2000; ++k) {
    const auto n = static_cast<std::int64_t>(rng.uniform_index(300));
    const Path a = simulate(3, Schedule::critical(1.0, 1), n, rng);
    const Path b = simulate_events(3, Schedule::critical(1.0, 1), n, rng);
    ASSERT_LE(l1(a.endpoint()), n);
    ASSERT_LE(l1(b.endpoint()), n);
    if (n > 0) {
      ASSERT_EQ(a.events.front().update_time, 1);
      ASSERT_EQ(b.events.front().update_time, 1);
    }
  }
}

TEST(Simulate, ReturnProbabilityMatchesExact) {
  const Schedule s = Schedule::constant(0.5);
  const double exact = exact_distribution(2, s, 6).marginal(Point{0, 0});
  const UpdateClock clock(s, 6);
  RandomStream rng(6);
  stats::Moments step_hits;
  stats::Moments event_hits;
  for (int k = 0; k < 1'000'000; ++k) {
    step_hits.add(simulate(2, s, 6, rng).endpoint() == Point{0, 0} ? 1.0 : 0.0);
    event_hits.add(simulate_events(2, clock, rng).endpoint() == Point{0, 0} ? 1.0 : 0.0);
  }
  EXPECT_NEAR(step_hits.mean(), exact, 4.0 * step_hits.std_error());
  EXPECT_NEAR(event_hits.mean(), exact, 4.0 * event_hits.std_error());
}

TEST(SimulateProperty, BothSamplersMatchExactLawInThreeDimensions) {
  for (double p : {0.2, 0.7}) {
    const Schedule s = Schedule::constant(p);
    const auto exact = exact_distribution(3, s, 5).marginals();
    const UpdateClock clock(s, 5);
    RandomStream rng(7);
    for (int sampler = 0; sampler < 2; ++sampler) {
      std::map<Point, double> freq;
      const int samples = 1'000'000;
      for (int k = 0; k < samples; ++k) {
        const Path path = sampler == 0 ? simulate(3, s, 5, rng) : simulate_events(3, clock, rng);
        freq[path.endpoint()] += 1.0 / samples;
      }
      double tv = 0.0;
      for (const auto& [pos, prob] : exact) tv += std::fabs(freq[pos] - prob);
      for (const auto& [pos, f] : freq) {
        if (!exact.contains(pos)) tv += f;
      }
      EXPECT_LT(tv / 2.0, 0.01) << "p=" << p << " sampler=" << sampler;
    }
  }
}

TEST(SimulateEvents, FullUpdateHasUnitGaps) {
  RandomStream rng(8);
  const Path path = simulate_events(2, Schedule::constant(1.0), 500, rng);
  ASSERT_EQ(path.events.size(), 500U);
  for (std::size_t k = 0; k < path.events.size(); ++k) {
    EXPECT_EQ(path.events[k].update_time, static_cast<std::int64_t>(k) + 1);
  }
}

TEST(SimulateEvents, GeometricGapsForConstantSchedule) {
  RandomStream rng(9);
  const UpdateClock clock(Schedule::constant(0.5), 4'000'000);
  stats::Moments gaps;
  std::int64_t t = 1;
  while (gaps.count < 1'000'000) {
    const std::int64_t next = clock.next_after(t, rng);
    ASSERT_LE(next, clock.horizon());
    gaps.add(static_cast<double>(next - t));
    t = next;
  }
  EXPECT_NEAR(gaps.mean(), 2.0, 3.0 * gaps.std_error());
}

TEST(SimulateEvents, EmbeddedJumpMoments) {
  const double p = 0.3;
  RandomStream rng(10);
  const UpdateClock clock(Schedule::constant(p), 10'000'000);
  stats::Moments len;
  stats::Moments len_sq;
  std::int64_t t = 1;
  for (int k = 0; k < 1'000'000; ++k) {
    const std::int64_t next = clock.next_after(t, rng);
    const auto g = static_cast<double>(next - t);
    len.add(g);
    len_sq.add(g * g);
    t = next;
  }
  EXPECT_NEAR(len.mean(), 1.0 / p, 4.0 * len.std_error());
  EXPECT_NEAR(len_sq.mean(), (2.0 - p) / (p * p), 4.0 * len_sq.std_error());
  // Variance (1-p)/p^2 of the magnitude.
  const double var = len.variance();
  EXPECT_NEAR(var, (1.0 - p) / (p * p), 0.02 * (1.0 - p) / (p * p));
}

// Both samplers must reproduce P(update at k) = p_k and independence of
// update indicators for a schedule mixing certain, thinned and inverted steps.
TEST(UpdateClock, UpdateIndicatorsMatchSchedule) {
  const Schedule s = Schedule::explicit_values({1.0, 0.5, 0.05, 1.0, 0.02, 0.0, 0.3, 0.08, 0.08, 0.15});
  const std::int64_t n = 14;
  const UpdateClock clock(s, n);
  RandomStream rng(11);
  const int samples = 400'000;
  for (int sampler = 0; sampler < 2; ++sampler) {
    std::vector<stats::Moments> hit(static_cast<std::size_t>(n + 1));
    stats::Moments joint;  // updates at 3 and 8
    for (int k = 0; k < samples; ++k) {
      const Path path = sampler == 0 ? simulate(1, s, n, rng) : simulate_events(1, clock, rng);
      std::vector<bool> at(static_cast<std::size_t>(n + 1), false);
      for (const auto& e : path.events) at[static_cast<std::size_t>(e.update_time)] = true;
      for (std::int64_t t = 1; t <= n; ++t) hit[static_cast<std::size_t>(t)].add(at[static_cast<std::size_t>(t)] ? 1.0 : 0.0);
      joint.add(at[3] && at[8] ? 1.0 : 0.0);
    }
    for (std::int64_t t = 1; t <= n; ++t) {
      const auto& h = hit[static_cast<std::size_t>(t)];
      const double expected = t == 1 ? 1.0 : s.p_at(t);
      if (expected == 0.0 || expected == 1.0) {
        EXPECT_EQ(h.mean(), expected) << "t=" << t << " sampler=" << sampler;
      } else {
        EXPECT_NEAR(h.mean(), expected, 4.0 * h.std_error()) << "t=" << t << " sampler=" << sampler;
      }
    }
    EXPECT_NEAR(joint.mean(), 0.05 * 0.08, 4.0 * joint.std_error());
  }
}

TEST(UpdateClock, CriticalUpdateCountMatchesSum) {
  const Schedule s = Schedule::critical(1.0, 1);
  const std::int64_t n = 100'000;
  const UpdateClock clock(s, n);
  double expected = 0.0;
  for (std::int64_t k = 1001; k <= n; ++k) expected += s.p_at(k);
  RandomStream rng(12);
  stats::Moments count;
  for (int k = 0; k < 100'000; ++k) {
    const Path path = simulate_events(2, clock, rng);
    count.add(static_cast<double>(std::count_if(path.events.begin(), path.events.end(),
                                                [](const TurnEvent& e) { return e.update_time > 1000; })));
  }
  EXPECT_NEAR(count.mean(), expected, 4.0 * count.std_error());
}

TEST(SimulateProperty, MarginalSymmetry) {
  RandomStream rng(13);
  const Schedule s = Schedule::critical(2.0, 2);
  const UpdateClock clock(s, 300);
  std::vector<stats::Moments> coord(3);
  for (int k = 0; k < 100'000; ++k) {
    const Point end = simulate_events(3, clock, rng).endpoint();
    for (std::size_t j = 0; j < 3; ++j) coord[j].add(static_cast<double>(end[j]));
  }
  for (const auto& m : coord) EXPECT_NEAR(m.mean(), 0.0, 4.0 * m.std_error());
}

TEST(SimulateProperty, SamplersAgreeOnCoarseEndpointLaw) {
  const Schedule s = Schedule::constant(0.3);
  const std::int64_t n = 1000;
  const UpdateClock clock(s, n);
  RandomStream rng(14);
  auto cell = [](const Point& p) {
    auto bin = [](std::int64_t x) { return std::clamp<std::int64_t>((x + 10) / 20 + (x < -10 ? -1 : 0), -4, 4) + 4; };
    return static_cast<std::size_t>(bin(p[0]) * 9 + bin(p[1]));
  };
  std::vector<std::vector<double>> table(2, std::vector<double>(81, 0.0));
  for (int k = 0; k < 100'000; ++k) {
    table[0][cell(simulate(2, s, n, rng).endpoint())] += 1.0;
    table[1][cell(simulate_events(2, clock, rng).endpoint())] += 1.0;
  }
  const auto chi = stats::chi_square_contingency(table);
  EXPECT_GE(chi.p_value, 0.01) << "statistic " << chi.statistic << " dof " << chi.dof;
}

TEST(Visits, StraightPath) {
  Path path{2, Point{0, 0}, {TurnEvent{1, Direction{0, 1}}}, 5};
  EXPECT_EQ(visits(path, Point{3, 0}), 1);
  EXPECT_EQ(visits(path, Point{0, 0}), 0);
  EXPECT_EQ(visits(path, Point{6, 0}), 0);
  EXPECT_EQ(visits(path, Point{3, 1}), 0);
  EXPECT_EQ(visits_between(path, Point{3, 0}, 3, 5), 0);
  EXPECT_EQ(visits_between(path, Point{3, 0}, 2, 3), 1);
}

TEST(VisitsProperty, EventCountEqualsReplay) {
  RandomStream rng(15);
  const std::vector<Schedule> schedules = {Schedule::constant(0.5), Schedule::constant(0.05),
                                           Schedule::critical(1.0, 1),
                                           Schedule::power_decay(1.0, 0.5, 1)};
  for (int k = 0; k < 10'000; ++k) {
    const auto n = static_cast<std::int64_t>(rng.uniform_index(1001));
    const Schedule& s = schedules[static_cast<std::size_t>(k) % schedules.size()];
    const Path path = simulate_events(2, s, n, rng);
    const auto dense = replay(path);
    ASSERT_EQ(dense.back(), path.endpoint());
    Point target{0, 0};
    if (k % 2 == 1 && n > 0) target = dense[rng.uniform_index(static_cast<std::uint64_t>(n)) + 1];
    const std::int64_t after = n > 0 ? static_cast<std::int64_t>(rng.uniform_index(static_cast<std::uint64_t>(n))) : 0;
    std::int64_t all = 0;
    std::int64_t late = 0;
    for (std::int64_t t = 1; t <= n; ++t) {
      if (dense[static_cast<std::size_t>(t)] == target) {
        ++all;
        if (t > after) ++late;
      }
    }
    ASSERT_EQ(visits(path, target), all);
    ASSERT_EQ(visits_between(path, target, after, n), late);
  }
}

TEST(Path, PositionAndDirectionAgreeWithReplay) {
  RandomStream rng(16);
  const Path path = simulate(2, Schedule::constant(0.2), 300, rng);
  const auto dense = replay(path);
  for (std::int64_t t = 0; t <= 300; ++t) ASSERT_EQ(path.position_at(t), dense[static_cast<std::size_t>(t)]);
  for (std::int64_t t = 1; t <= 300; ++t) {
    const Direction dir = path.direction_at(t);
    Point diff = dense[static_cast<std::size_t>(t)];
    diff[static_cast<std::size_t>(dir.axis)] -= dir.sign;
    ASSERT_EQ(diff, dense[static_cast<std::size_t>(t - 1)]);
  }
  EXPECT_THROW((void)path.position_at(301), DomainError);
}

}  // namespace
}  // namespace crw
