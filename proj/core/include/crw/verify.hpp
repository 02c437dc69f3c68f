#pragma once

#include <cstdint>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "crw/analytics.hpp"
#include "crw/rng.hpp"
#include "crw/schedule.hpp"
#include "crw/stats.hpp"

namespace crw {

using json = nlohmann::ordered_json;

/// Monte Carlo mean with its standard error.
struct EstimatorResult {
  double estimate = 0.0;
  double std_error = 0.0;
  std::int64_t n_samples = 0;
  std::pair<double, double> ci95{0.0, 0.0};
  std::uint64_t seed = 0;
  int shards = 1;

  static EstimatorResult from_moments(const stats::Moments& m, std::uint64_t seed, int shards);
};

/// One-sided check used for every bound comparison: the bound holds unless
/// the estimate exceeds it by more than four standard errors.
bool bound_holds(const EstimatorResult& r, double bound);

struct Check {
  std::string name;
  bool passed = false;
};

struct TestReport {
  /// Primary statistic and its rejection threshold.
  double statistic = 0.0;
  double threshold = 0.0;
  bool rejected = false;
  json config;
  json details;
  /// Every sub-check, the primary one first.
  std::vector<Check> checks;

  [[nodiscard]] bool passed() const;
};

/// Monte Carlo options shared by every estimator. Shard k draws from
/// RandomStream::derive(seed, k, stream); samples are split as evenly as
/// possible with the remainder going to the lowest shards.
struct RunOptions {
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
  int shards = 1;
};

/// Runs fn(shard, shard_samples, rng) on one thread per shard and returns the
/// per-shard results in shard order.
template <class Fn>
auto run_sharded(const RunOptions& opt, std::uint64_t stream, Fn&& fn) {
  using Result = decltype(fn(0, std::int64_t{0}, std::declval<RandomStream&>()));
  const int shards = opt.shards < 1 ? 1 : opt.shards;
  std::vector<Result> results(static_cast<std::size_t>(shards));
  auto work = [&](int k) {
    const std::int64_t base = opt.samples / shards;
    const std::int64_t extra = k < opt.samples % shards ? 1 : 0;
    RandomStream rng = RandomStream::derive(opt.seed, static_cast<std::uint64_t>(k), stream);
    results[static_cast<std::size_t>(k)] = fn(k, base + extra, rng);
  };
  if (shards == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(shards));
    for (int k = 0; k < shards; ++k) threads.emplace_back(work, k);
    for (auto& t : threads) t.join();
  }
  return results;
}

struct TailEstimate {
  EstimatorResult result;
  double bound = 1.0;
  bool holds = true;
};

/// Empirical P(|S_n| > a sqrt(n)) for the homogeneous walk, compared with
/// ld_bound(p, a, d).
TailEstimate estimate_tail(int d, double p, std::int64_t n, double a, const RunOptions& opt);

/// Empirical E[Y_i Y_j] for the one-dimensional walk by direct stepping.
EstimatorResult estimate_covariance(const Schedule& schedule, std::int64_t i, std::int64_t j,
                                    const RunOptions& opt);

enum class ScalingNormalization {
  /// sqrt(p / (2 - p)) S_n / sqrt(n) per coordinate.
  AsStated,
  /// sqrt(d p / (2 - p)) S_n / sqrt(n): unit variance per coordinate for any d.
  PerCoordinate,
};

/// KS test of each rescaled endpoint coordinate against the standard normal
/// (critical value 1.63 / sqrt(samples) plus one lattice spacing), pairwise
/// cross-covariances within 4 s.e. of 0, and the coordinate variances.
/// details also carries the statistics under the other normalization.
TestReport scaling_limit_test(int d, double p, std::int64_t n, const RunOptions& opt,
                              ScalingNormalization norm = ScalingNormalization::AsStated);

/// Walk under Critical(a, ceil(a)) against the zigzag process with
/// b = b_from_a(a, d):
///  - number of direction changes in steps (delta n, n]: mean within 4 s.e. of
///    b ln(1/delta) and chi-square fit to Poisson(b ln(1/delta)) at 1%;
///  - two-sample KS (1%) between (S_n - S_{delta n}) / n and Z_1 with
///    epsilon = delta, per coordinate and for the Euclidean norm. Both sides
///    are put on the 1/n lattice before comparison.
TestReport critical_limit_test(int d, double a, std::int64_t n, double delta,
                               const RunOptions& opt, std::int64_t zigzag_samples = 0);

struct RecurrencePoint {
  std::int64_t horizon = 0;
  EstimatorResult mean_visits;
  EstimatorResult late_visit_fraction;  // at least one visit in (horizon/2, horizon]
};

/// Origin-visit statistics per horizon; each horizon uses its own streams.
std::vector<RecurrencePoint> recurrence_experiment(int d, const Schedule& schedule,
                                                   const std::vector<std::int64_t>& horizons,
                                                   const RunOptions& opt);

/// Smallest horizon H with (p - q) H - 5 sqrt(4 p q H) - j >= ln(1e-6) / ln(q/p):
/// by then the walk is five standard deviations above the level from which a
/// return to j has probability below 1e-6.
std::int64_t min_volkov_horizon(double p, std::int64_t j);

struct VolkovResult {
  EstimatorResult single;
  EstimatorResult joint;
  PassOnce expected;
  std::int64_t horizon = 0;
};

/// Nearest-neighbour walk from 0 with up-probability p. A_i: the walk visits
/// level i exactly once within the horizon and steps up from it.
VolkovResult volkov_bc_experiment(double p, std::int64_t i, std::int64_t j, std::int64_t horizon,
                                  const RunOptions& opt);

/// Empirical E L_n^4 for the homogeneous one-dimensional walk.
EstimatorResult moment4_experiment(double p, std::int64_t n, const RunOptions& opt);

/// {estimate, std_error, n_samples, ci95, seed, shards}.
json to_json(const EstimatorResult& r);

/// {op, config, estimate, std_error, n_samples, ci95, seed, shards, bound?, verdict}.
json result_json(const std::string& op, const json& config, const EstimatorResult& r,
                 std::optional<double> bound, bool verdict);

json to_json(const TestReport& report, const std::string& op);

}  // namespace crw
