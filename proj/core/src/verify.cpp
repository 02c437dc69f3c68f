#include "crw/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "crw/errors.hpp"
#include "crw/walk.hpp"
#include "crw/zigzag.hpp"

namespace crw {
namespace {

void require(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}

void require_options(const RunOptions& opt) {
  require(opt.samples >= 1, "samples must be >= 1");
  require(opt.shards >= 1, "shards must be >= 1");
}

stats::Moments merge(const std::vector<stats::Moments>& parts) {
  stats::Moments total;
  for (const auto& m : parts) total.merge(m);
  return total;
}

/// Endpoint of one event-driven trajectory; same draw order as for_each_update.
void sample_endpoint(int d, const UpdateClock& clock, RandomStream& rng, Point& pos) {
  std::fill(pos.begin(), pos.end(), 0);
  const std::int64_t n = clock.horizon();
  std::int64_t t = 1;
  while (t <= n) {
    const Direction dir = Direction::uniform(d, rng);
    const std::int64_t next = clock.next_after(t, rng);
    pos[static_cast<std::size_t>(dir.axis)] += dir.sign * (next - t);
    t = next;
  }
}

/// Endpoints of all samples, d coordinates per sample, in shard order.
std::vector<std::int64_t> sample_endpoints(int d, const UpdateClock& clock,
                                           const RunOptions& opt, std::uint64_t stream) {
  auto parts = run_sharded(opt, stream, [&](int, std::int64_t count, RandomStream& rng) {
    std::vector<std::int64_t> out;
    out.reserve(static_cast<std::size_t>(count * d));
    Point pos(static_cast<std::size_t>(d));
    for (std::int64_t s = 0; s < count; ++s) {
      sample_endpoint(d, clock, rng, pos);
      out.insert(out.end(), pos.begin(), pos.end());
    }
    return out;
  });
  std::vector<std::int64_t> all;
  for (auto& part : parts) all.insert(all.end(), part.begin(), part.end());
  return all;
}

json options_json(const RunOptions& opt) {
  return {{"samples", opt.samples}, {"seed", opt.seed}, {"shards", opt.shards}};
}

}  // namespace

EstimatorResult EstimatorResult::from_moments(const stats::Moments& m, std::uint64_t seed,
                                              int shards) {
  EstimatorResult r;
  r.estimate = m.mean();
  r.std_error = m.std_error();
  r.n_samples = m.count;
  r.ci95 = {r.estimate - 1.96 * r.std_error, r.estimate + 1.96 * r.std_error};
  r.seed = seed;
  r.shards = shards;
  return r;
}

bool bound_holds(const EstimatorResult& r, double bound) {
  return r.estimate - 4.0 * r.std_error <= bound;
}

bool TestReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

TailEstimate estimate_tail(int d, double p, std::int64_t n, double a, const RunOptions& opt) {
  require(d >= 1, "estimate_tail: d must be >= 1");
  require(p > 0.0 && p <= 1.0, "estimate_tail: p must lie in (0, 1]");
  require(n >= 1, "estimate_tail: n must be >= 1");
  require_options(opt);
  TailEstimate out;
  out.bound = ld_bound(p, a, d);  // validates a

  const UpdateClock clock(Schedule::constant(p), n);
  const long double radius_sq = static_cast<long double>(a) * a * static_cast<long double>(n);
  auto parts = run_sharded(opt, 0, [&](int, std::int64_t count, RandomStream& rng) {
    stats::Moments m;
    Point pos(static_cast<std::size_t>(d));
    for (std::int64_t s = 0; s < count; ++s) {
      sample_endpoint(d, clock, rng, pos);
      long double norm_sq = 0.0L;
      for (auto x : pos) norm_sq += static_cast<long double>(x) * x;
      m.add(norm_sq > radius_sq ? 1.0 : 0.0);
    }
    return m;
  });
  out.result = EstimatorResult::from_moments(merge(parts), opt.seed, opt.shards);
  out.holds = bound_holds(out.result, out.bound);
  return out;
}

EstimatorResult estimate_covariance(const Schedule& schedule, std::int64_t i, std::int64_t j,
                                    const RunOptions& opt) {
  require(1 <= i && i <= j, "estimate_covariance: requires 1 <= i <= j");
  require_options(opt);
  std::vector<double> p(static_cast<std::size_t>(j + 1), 1.0);
  for (std::int64_t k = 2; k <= j; ++k) p[static_cast<std::size_t>(k)] = schedule.p_at(k);

  auto parts = run_sharded(opt, 0, [&](int, std::int64_t count, RandomStream& rng) {
    stats::Moments m;
    for (std::int64_t s = 0; s < count; ++s) {
      int y = rng.uniform_index(2) == 0 ? 1 : -1;
      int y_i = y;
      for (std::int64_t k = 2; k <= j; ++k) {
        const double pk = p[static_cast<std::size_t>(k)];
        if (pk >= 1.0 || (pk > 0.0 && rng.uniform() < pk)) y = rng.uniform_index(2) == 0 ? 1 : -1;
        if (k == i) y_i = y;
      }
      m.add(static_cast<double>(y_i * y));
    }
    return m;
  });
  return EstimatorResult::from_moments(merge(parts), opt.seed, opt.shards);
}

TestReport scaling_limit_test(int d, double p, std::int64_t n, const RunOptions& opt,
                              ScalingNormalization norm) {
  require(d >= 1, "scaling_limit_test: d must be >= 1");
  require(p > 0.0 && p <= 1.0, "scaling_limit_test: p must lie in (0, 1]");
  require(n >= 1000, "scaling_limit_test: n must be >= 1000");
  require(opt.samples >= 2 && opt.shards >= 1, "scaling_limit_test: needs samples >= 2");

  const UpdateClock clock(Schedule::constant(p), n);
  const std::vector<std::int64_t> ends = sample_endpoints(d, clock, opt, 0);
  const auto samples = static_cast<std::size_t>(opt.samples);
  const auto dd = static_cast<std::size_t>(d);

  const double stated = std::sqrt(p / (2.0 - p)) / std::sqrt(static_cast<double>(n));
  const double per_coord = stated * std::sqrt(static_cast<double>(d));
  const double primary = norm == ScalingNormalization::AsStated ? stated : per_coord;
  const double secondary = norm == ScalingNormalization::AsStated ? per_coord : stated;
  const double ks_crit = stats::ks_critical_1pct(opt.samples);

  auto coordinate = [&](std::size_t j, double scale) {
    std::vector<double> xs(samples);
    for (std::size_t s = 0; s < samples; ++s) xs[s] = scale * static_cast<double>(ends[s * dd + j]);
    return xs;
  };

  TestReport report;
  report.config = {{"d", d}, {"p", p}, {"n", n}};
  report.config.update(options_json(opt));
  report.config["normalization"] =
      norm == ScalingNormalization::AsStated ? "sqrt(p/(2-p))" : "sqrt(d*p/(2-p))";
  report.threshold = ks_crit + primary;  // one lattice spacing of allowance

  json coords = json::array();
  json alternate = json::array();
  bool variance_ok = true;
  for (std::size_t j = 0; j < dd; ++j) {
    const std::vector<double> xs = coordinate(j, primary);
    stats::Moments m;
    stats::Moments sq;
    for (double x : xs) {
      m.add(x);
      sq.add(x * x);
    }
    const double ks = stats::ks_one_sample(xs, stats::normal_cdf);
    const double var = m.variance();
    variance_ok = variance_ok && var >= 0.96 && var <= 1.04;
    report.statistic = std::max(report.statistic, ks);
    coords.push_back({{"axis", j}, {"ks", ks}, {"mean", m.mean()}, {"variance", var},
                      {"variance_se", sq.std_error()}});
    const std::vector<double> ys = coordinate(j, secondary);
    stats::Moments my;
    for (double y : ys) my.add(y);
    alternate.push_back({{"axis", j},
                         {"ks", stats::ks_one_sample(ys, stats::normal_cdf)},
                         {"variance", my.variance()}});
  }

  json cross = json::array();
  bool cross_ok = true;
  for (std::size_t j = 0; j < dd; ++j) {
    for (std::size_t k = j + 1; k < dd; ++k) {
      stats::Moments m;
      for (std::size_t s = 0; s < samples; ++s) {
        m.add(primary * primary * static_cast<double>(ends[s * dd + j]) *
              static_cast<double>(ends[s * dd + k]));
      }
      const bool ok = std::fabs(m.mean()) <= 4.0 * m.std_error();
      cross_ok = cross_ok && ok;
      cross.push_back({{"axes", {j, k}}, {"covariance", m.mean()}, {"std_error", m.std_error()},
                       {"within_4se", ok}});
    }
  }

  report.rejected = report.statistic > report.threshold;
  report.checks = {{"ks_normal", !report.rejected},
                   {"cross_covariance_zero", cross_ok},
                   {"variance_in_[0.96,1.04]", variance_ok}};
  report.details = {{"ks_critical", ks_crit},
                    {"lattice_spacing", primary},
                    {"coordinates", coords},
                    {"cross_covariances", cross},
                    {"other_normalization",
                     {{"normalization", norm == ScalingNormalization::AsStated
                                            ? "sqrt(d*p/(2-p))"
                                            : "sqrt(p/(2-p))"},
                      {"coordinates", alternate}}}};
  return report;
}

TestReport critical_limit_test(int d, double a, std::int64_t n, double delta,
                               const RunOptions& opt, std::int64_t zigzag_samples) {
  require(d >= 1, "critical_limit_test: d must be >= 1");
  require(a > 0.0, "critical_limit_test: a must be positive");
  require(n >= 10000, "critical_limit_test: n must be >= 10^4");
  require(delta > 0.0 && delta < 1.0, "critical_limit_test: delta must lie in (0, 1)");
  require(opt.samples >= 2 && opt.shards >= 1, "critical_limit_test: needs samples >= 2");
  if (zigzag_samples <= 0) zigzag_samples = opt.samples;

  const auto n0 = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(a)));
  const Schedule schedule = Schedule::critical(a, n0);
  const double b = b_from_a(a, d);
  const double lambda = b * std::log(1.0 / delta);
  const auto m = static_cast<std::int64_t>(std::floor(delta * static_cast<double>(n)));
  const auto dd = static_cast<std::size_t>(d);
  const UpdateClock clock(schedule, n);

  struct WalkPart {
    std::vector<std::int64_t> turns;
    std::vector<std::int64_t> increments;
  };
  auto walk_parts = run_sharded(opt, 0, [&](int, std::int64_t count, RandomStream& rng) {
    WalkPart part;
    part.turns.reserve(static_cast<std::size_t>(count));
    part.increments.reserve(static_cast<std::size_t>(count) * dd);
    Point early(dd);
    Point late(dd);
    for (std::int64_t s = 0; s < count; ++s) {
      std::fill(early.begin(), early.end(), 0);
      std::fill(late.begin(), late.end(), 0);
      std::int64_t turns = 0;
      Direction previous{};
      std::int64_t t = 1;
      while (t <= n) {
        const Direction dir = Direction::uniform(d, rng);
        const std::int64_t next = clock.next_after(t, rng);
        if (t > m && dir != previous) ++turns;
        const auto axis = static_cast<std::size_t>(dir.axis);
        const std::int64_t before = std::clamp<std::int64_t>(m - t + 1, 0, next - t);
        early[axis] += dir.sign * before;
        late[axis] += dir.sign * (next - t - before);
        previous = dir;
        t = next;
      }
      part.turns.push_back(turns);
      part.increments.insert(part.increments.end(), late.begin(), late.end());
    }
    return part;
  });

  const RunOptions zig_opt{zigzag_samples, opt.seed, opt.shards};
  const double scale = static_cast<double>(n);
  auto zig_parts = run_sharded(zig_opt, 1, [&](int, std::int64_t count, RandomStream& rng) {
    std::vector<std::int64_t> out;
    out.reserve(static_cast<std::size_t>(count) * dd);
    for (std::int64_t s = 0; s < count; ++s) {
      const ZigzagPath path = sample_zigzag(b, d, delta, 1.0, rng);
      for (double z : path.position_at(1.0)) {
        out.push_back(static_cast<std::int64_t>(std::llround(z * scale)));
      }
    }
    return out;
  });

  std::vector<std::int64_t> turns;
  std::vector<std::int64_t> walk_inc;
  for (auto& part : walk_parts) {
    turns.insert(turns.end(), part.turns.begin(), part.turns.end());
    walk_inc.insert(walk_inc.end(), part.increments.begin(), part.increments.end());
  }
  std::vector<std::int64_t> zig_inc;
  for (auto& part : zig_parts) zig_inc.insert(zig_inc.end(), part.begin(), part.end());

  stats::Moments turn_moments;
  for (auto c : turns) turn_moments.add(static_cast<double>(c));
  const EstimatorResult turn_mean =
      EstimatorResult::from_moments(turn_moments, opt.seed, opt.shards);
  const bool mean_ok = std::fabs(turn_mean.estimate - lambda) <= 4.0 * turn_mean.std_error;
  const stats::ChiSquare chi = stats::chi_square_poisson(turns, lambda);
  const bool chi_ok = chi.p_value >= 0.01;

  auto project = [&](const std::vector<std::int64_t>& inc, std::optional<std::size_t> axis) {
    const std::size_t count = inc.size() / dd;
    std::vector<double> out(count);
    for (std::size_t s = 0; s < count; ++s) {
      if (axis) {
        out[s] = static_cast<double>(inc[s * dd + *axis]) / scale;
      } else {
        std::int64_t sq = 0;
        for (std::size_t j = 0; j < dd; ++j) sq += inc[s * dd + j] * inc[s * dd + j];
        out[s] = std::sqrt(static_cast<double>(sq)) / scale;
      }
    }
    return out;
  };

  bool bounded = true;
  for (auto x : walk_inc) bounded = bounded && std::llabs(x) <= n;

  const double ks_crit = stats::ks_critical_1pct(opt.samples, zigzag_samples);
  TestReport report;
  report.config = {{"d", d}, {"a", a}, {"n0", n0}, {"n", n}, {"delta", delta}};
  report.config.update(options_json(opt));
  report.config["zigzag_samples"] = zigzag_samples;
  report.threshold = ks_crit;

  json ks = json::object();
  const double norm_ks = stats::ks_two_sample(project(walk_inc, std::nullopt),
                                              project(zig_inc, std::nullopt));
  ks["norm"] = norm_ks;
  report.statistic = norm_ks;
  for (std::size_t j = 0; j < dd; ++j) {
    const double v = stats::ks_two_sample(project(walk_inc, j), project(zig_inc, j));
    ks["axis_" + std::to_string(j)] = v;
    report.statistic = std::max(report.statistic, v);
  }
  report.rejected = report.statistic > report.threshold;
  report.checks = {{"ks_two_sample", !report.rejected},
                   {"turn_count_mean", mean_ok},
                   {"turn_count_poisson_chi2", chi_ok},
                   {"increments_bounded", bounded}};
  report.details = {{"b", b},
                    {"expected_turns", lambda},
                    {"turn_count", to_json(turn_mean)},
                    {"chi_square", {{"statistic", chi.statistic}, {"dof", chi.dof},
                                    {"p_value", chi.p_value}}},
                    {"ks", ks},
                    {"ks_critical", ks_crit}};
  return report;
}

std::vector<RecurrencePoint> recurrence_experiment(int d, const Schedule& schedule,
                                                   const std::vector<std::int64_t>& horizons,
                                                   const RunOptions& opt) {
  require(d >= 1, "recurrence_experiment: d must be >= 1");
  require_options(opt);
  for (std::size_t k = 0; k < horizons.size(); ++k) {
    require(horizons[k] >= 0, "recurrence_experiment: horizons must be >= 0");
    require(k == 0 || horizons[k] > horizons[k - 1],
            "recurrence_experiment: horizons must be increasing");
  }
  const Point origin(static_cast<std::size_t>(d), 0);
  std::vector<RecurrencePoint> out;
  for (std::size_t k = 0; k < horizons.size(); ++k) {
    const std::int64_t h = horizons[k];
    const UpdateClock clock(schedule, h);
    struct Part {
      stats::Moments visits;
      stats::Moments late;
    };
    auto parts = run_sharded(opt, k, [&](int, std::int64_t count, RandomStream& rng) {
      Part part;
      for (std::int64_t s = 0; s < count; ++s) {
        const Path path = simulate_events(d, clock, rng);
        part.visits.add(static_cast<double>(visits(path, origin)));
        part.late.add(visits_between(path, origin, h / 2, h) > 0 ? 1.0 : 0.0);
      }
      return part;
    });
    stats::Moments v;
    stats::Moments l;
    for (const auto& part : parts) {
      v.merge(part.visits);
      l.merge(part.late);
    }
    out.push_back({h, EstimatorResult::from_moments(v, opt.seed, opt.shards),
                   EstimatorResult::from_moments(l, opt.seed, opt.shards)});
  }
  return out;
}

std::int64_t min_volkov_horizon(double p, std::int64_t j) {
  require(p > 0.5 && p <= 1.0, "min_volkov_horizon: p must lie in (1/2, 1]");
  require(j >= 1, "min_volkov_horizon: j must be >= 1");
  const double q = 1.0 - p;
  const double margin = q > 0.0 ? std::log(1e-6) / std::log(q / p) : 0.0;
  auto ok = [&](double h) {
    return (p - q) * h - 5.0 * std::sqrt(4.0 * p * q * h) - static_cast<double>(j) >= margin;
  };
  std::int64_t hi = 1;
  while (!ok(static_cast<double>(hi))) hi *= 2;
  std::int64_t lo = hi / 2;  // ok(lo) false unless lo == 0
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    (ok(static_cast<double>(mid)) ? hi : lo) = mid;
  }
  return hi;
}

VolkovResult volkov_bc_experiment(double p, std::int64_t i, std::int64_t j, std::int64_t horizon,
                                  const RunOptions& opt) {
  require(p > 0.5 && p <= 1.0, "volkov_bc_experiment: p must lie in (1/2, 1]");
  require(1 <= i && i < j, "volkov_bc_experiment: requires 1 <= i < j");
  require_options(opt);
  const std::int64_t needed = min_volkov_horizon(p, j);
  if (horizon < needed) {
    throw DomainError("volkov_bc_experiment: horizon " + std::to_string(horizon) +
                      " too short; at least " + std::to_string(needed) + " is needed");
  }
  struct Part {
    stats::Moments single;
    stats::Moments joint;
  };
  auto parts = run_sharded(opt, 0, [&](int, std::int64_t count, RandomStream& rng) {
    Part part;
    for (std::int64_t s = 0; s < count; ++s) {
      std::int64_t x = 0;
      std::int64_t at_i = 0;
      std::int64_t at_j = 0;
      for (std::int64_t t = 0; t < horizon; ++t) {
        x += rng.uniform() < p ? 1 : -1;
        at_i += x == i ? 1 : 0;
        at_j += x == j ? 1 : 0;
      }
      const bool a_i = at_i == 1 && x > i;
      const bool a_j = at_j == 1 && x > j;
      part.single.add(a_i ? 1.0 : 0.0);
      part.joint.add(a_i && a_j ? 1.0 : 0.0);
    }
    return part;
  });
  stats::Moments single;
  stats::Moments joint;
  for (const auto& part : parts) {
    single.merge(part.single);
    joint.merge(part.joint);
  }
  return {EstimatorResult::from_moments(single, opt.seed, opt.shards),
          EstimatorResult::from_moments(joint, opt.seed, opt.shards),
          gambler_pass_once(p, j - i), horizon};
}

EstimatorResult moment4_experiment(double p, std::int64_t n, const RunOptions& opt) {
  require(p > 0.0 && p <= 1.0, "moment4_experiment: p must lie in (0, 1]");
  require(n >= 1, "moment4_experiment: n must be >= 1");
  require_options(opt);
  const UpdateClock clock(Schedule::constant(p), n);
  auto parts = run_sharded(opt, 0, [&](int, std::int64_t count, RandomStream& rng) {
    stats::Moments m;
    Point pos(1);
    for (std::int64_t s = 0; s < count; ++s) {
      sample_endpoint(1, clock, rng, pos);
      const auto l = static_cast<double>(pos[0]);
      m.add(l * l * l * l);
    }
    return m;
  });
  return EstimatorResult::from_moments(merge(parts), opt.seed, opt.shards);
}

json to_json(const EstimatorResult& r) {
  return {{"estimate", r.estimate},   {"std_error", r.std_error},
          {"n_samples", r.n_samples}, {"ci95", {r.ci95.first, r.ci95.second}},
          {"seed", r.seed},           {"shards", r.shards}};
}

json result_json(const std::string& op, const json& config, const EstimatorResult& r,
                 std::optional<double> bound, bool verdict) {
  json out = {{"op", op}, {"config", config}};
  out.update(to_json(r));
  if (bound) out["bound"] = *bound;
  out["verdict"] = verdict;
  return out;
}

json to_json(const TestReport& report, const std::string& op) {
  json checks = json::array();
  for (const auto& c : report.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}});
  return {{"op", op},
          {"config", report.config},
          {"statistic", report.statistic},
          {"threshold", report.threshold},
          {"rejected", report.rejected},
          {"checks", checks},
          {"details", report.details},
          {"verdict", report.passed()}};
}

}  // namespace crw
