// Acceptance suite: one PASS/FAIL line per criterion.
//
//   crw_acceptance                 run every criterion
//   crw_acceptance --criterion N   run criterion N only
//
// Exit status is 0 iff every selected criterion passed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "crw/analytics.hpp"
#include "crw/oracle.hpp"
#include "crw/rng.hpp"
#include "crw/schedule.hpp"
#include "crw/verify.hpp"
#include "crw/walk.hpp"

namespace {

using namespace crw;

struct Outcome {
  bool passed = false;
  std::string detail;
  std::vector<std::string> notes;  // informational lines, never part of the verdict
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

// 1. Both samplers against the exact law at n = 6.
Outcome criterion_1() {
  constexpr std::int64_t kSamples = 1'000'000;
  constexpr std::int64_t kN = 6;
  Outcome out{true, {}, {}};
  double worst = 0.0;
  std::uint64_t stream = 0;
  for (int d : {1, 2}) {
    for (double p : {0.3, 0.5, 0.8}) {
      const Schedule schedule = Schedule::constant(p);
      const ExactDistribution exact = exact_distribution(d, schedule, kN);
      const auto marginals = exact.marginals();
      for (const char* sampler : {"step", "events"}) {
        RandomStream rng = RandomStream::derive(1, 0, stream++);
        const UpdateClock clock(schedule, kN);
        std::map<Point, std::int64_t> counts;
        for (std::int64_t s = 0; s < kSamples; ++s) {
          const Path path = std::strcmp(sampler, "step") == 0 ? simulate(d, schedule, kN, rng)
                                                             : simulate_events(d, clock, rng);
          ++counts[path.endpoint()];
        }
        double tv = 0.0;
        for (const auto& [pos, prob] : marginals) {
          const auto it = counts.find(pos);
          const double freq =
              it == counts.end() ? 0.0 : static_cast<double>(it->second) / kSamples;
          tv += std::fabs(freq - prob);
        }
        for (const auto& [pos, c] : counts) {
          if (!marginals.contains(pos)) tv += static_cast<double>(c) / kSamples;
        }
        tv /= 2.0;
        worst = std::max(worst, tv);
        if (!(tv < 0.01)) {
          out.passed = false;
          out.notes.push_back(fmt("d=%d p=%.1f %s: TV=%.5f", d, p, sampler, tv));
        }
      }
    }
  }
  out.detail = fmt("12 (d, p, sampler) runs at 1e6 samples, max TV = %.5f (< 0.01)", worst);
  return out;
}

// 2. Fourth moment: O(n) formula against enumeration.
Outcome criterion_2() {
  double worst = 0.0;
  for (double p : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    for (int n = 1; n <= 12; ++n) {
      const double exact = fourth_moment_L(p, n, MomentMode::Exact);
      const double brute = brute_force_L_moment(p, n, 4);
      worst = std::max(worst, std::fabs(exact - brute) / brute);
    }
  }
  return {worst < 1e-10, fmt("max relative error %.3e over n <= 12, 5 values of p (< 1e-10)", worst), {}};
}

// 3. Correlation decay.
Outcome criterion_3() {
  struct Case {
    const char* name;
    Schedule schedule;
    std::int64_t i;
    std::int64_t j;
  };
  const std::vector<Case> cases = {
      {"Constant(0.5)", Schedule::constant(0.5), 5, 8},
      {"Constant(0.5)", Schedule::constant(0.5), 2, 4},
      {"Constant(0.5)", Schedule::constant(0.5), 7, 7},
      {"Constant(0.2)", Schedule::constant(0.2), 3, 7},
      {"Constant(0.2)", Schedule::constant(0.2), 1, 15},
      {"Constant(0.9)", Schedule::constant(0.9), 4, 6},
      {"Critical(1,2)", Schedule::critical(1.0, 2), 20, 25},
      {"Critical(1,2)", Schedule::critical(1.0, 2), 10, 12},
      {"Critical(2,2)", Schedule::critical(2.0, 2), 10, 20},
      {"Critical(0.5,1)", Schedule::critical(0.5, 1), 3, 30},
  };
  Outcome out{true, {}, {}};
  double worst_z = 0.0;
  std::uint64_t seed = 100;
  for (const auto& c : cases) {
    const EstimatorResult r = estimate_covariance(c.schedule, c.i, c.j, {1'000'000, seed++, 1});
    const double expected = correlation_e(c.schedule, c.i, c.j);
    const double diff = std::fabs(r.estimate - expected);
    const bool ok = diff <= 4.0 * r.std_error;
    if (r.std_error > 0.0) worst_z = std::max(worst_z, diff / r.std_error);
    out.passed = out.passed && ok;
    if (!ok) {
      out.notes.push_back(fmt("%s (i=%lld, j=%lld): %.5f vs %.5f, s.e. %.5f", c.name,
                              static_cast<long long>(c.i), static_cast<long long>(c.j),
                              r.estimate, expected, r.std_error));
    }
  }
  out.detail = fmt("10 cases at 1e6 samples, max |est - e_ij| = %.2f s.e. (<= 4)", worst_z);
  return out;
}

TailEstimate criterion_4_run(int d, double a, std::uint64_t seed) {
  const double p = 0.9;
  const std::int64_t n = 10'000;
  return estimate_tail(d, p, n, a, {100'000, seed, 1});
}

json tail_json(int d, double a, const TailEstimate& t) {
  const json config = {{"d", d}, {"p", 0.9}, {"n", 10'000}, {"a", a}};
  return result_json("estimate_tail", config, t.result, t.bound, t.holds);
}

// 4. Tail bounds.
Outcome criterion_4() {
  Outcome out{true, {}, {}};
  std::string detail;
  struct Run {
    int d;
    double a;
    std::uint64_t seed;
  };
  for (const Run& run : {Run{2, 20.0, 4}, Run{2, 25.0, 5}, Run{1, 10.0, 6}}) {
    const TailEstimate t = criterion_4_run(run.d, run.a, run.seed);
    out.passed = out.passed && t.holds;
    detail += fmt("%sd=%d a=%g: %.5f +- %.5f vs bound %.5f", detail.empty() ? "" : "; ", run.d,
                  run.a, t.result.estimate, t.result.std_error, t.bound);
  }
  out.detail = detail;
  return out;
}

// 5. Homogeneous scaling limit, normalization exactly as stated.
Outcome criterion_5() {
  const TestReport r = scaling_limit_test(2, 0.5, 100'000, {10'000, 7, 1});
  bool variance_ok = true;
  std::string vars;
  for (const auto& c : r.details["coordinates"]) {
    const double v = c["variance"].get<double>();
    variance_ok = variance_ok && v >= 0.96 && v <= 1.04;
    vars += fmt("%s%.4f", vars.empty() ? "" : ", ", v);
  }
  Outcome out;
  out.passed = !r.rejected && variance_ok;
  out.detail = fmt("sqrt(p/(2-p)) S_n/sqrt(n): max KS %.4f vs %.4f; variances [%s] vs [0.96, 1.04]",
                   r.statistic, r.threshold, vars.c_str());
  double ks_alt = 0.0;
  std::string alt_vars;
  for (const auto& c : r.details["other_normalization"]["coordinates"]) {
    ks_alt = std::max(ks_alt, c["ks"].get<double>());
    alt_vars += fmt("%s%.4f", alt_vars.empty() ? "" : ", ", c["variance"].get<double>());
  }
  out.notes.push_back(
      fmt("info: same samples with sqrt(d p/(2-p)) S_n/sqrt(n): max KS %.4f vs %.4f + %.4f; variances [%s]",
          ks_alt, stats::ks_critical_1pct(10'000), std::sqrt(2.0) * r.details["lattice_spacing"].get<double>(),
          alt_vars.c_str()));
  return out;
}

// 6. Critical regime against the zigzag process.
Outcome criterion_6() {
  const TestReport r = critical_limit_test(2, 1.0, 100'000, 0.1, {100'000, 8, 1});
  bool mean_ok = false;
  for (const auto& c : r.checks) {
    if (c.name == "turn_count_mean") mean_ok = c.passed;
  }
  const json& tc = r.details["turn_count"];
  const json& ks = r.details["ks"];
  const double norm_ks = ks["norm"].get<double>();
  Outcome out;
  out.passed = mean_ok && norm_ks <= r.threshold;
  out.detail = fmt("turn count %.4f +- %.4f vs %.4f; norm KS %.5f vs %.5f",
                   tc["estimate"].get<double>(), tc["std_error"].get<double>(),
                   r.details["expected_turns"].get<double>(), norm_ks, r.threshold);
  out.notes.push_back(fmt("info: per-axis KS %.5f, %.5f; Poisson chi-square p-value %.3f",
                          ks["axis_0"].get<double>(), ks["axis_1"].get<double>(),
                          r.details["chi_square"]["p_value"].get<double>()));
  return out;
}

// 7. Lyapunov drift.
Outcome criterion_7() {
  Outcome out{true, {}, {}};
  std::string detail;
  for (double p : {0.3, 0.5, 0.7}) {
    const double a = std::ceil(LyapunovConfig::admissibility_threshold(p)) + 5.0;
    const LyapunovConfig config(p, a, 1e-30);
    double lo = INFINITY;
    double hi = 0.0;
    bool negative = true;
    for (std::int64_t r : {200, 500, 1000, 2000}) {
      const DriftValue v = lyapunov_drift(config, {r, 0});
      negative = negative && v.drift + v.remainder < 0.0;
      const double scaled = std::fabs(v.drift) * std::pow(static_cast<double>(r), 4);
      lo = std::min(lo, scaled);
      hi = std::max(hi, scaled);
    }
    const double variation = (hi - lo) / lo;
    out.passed = out.passed && negative && variation < 0.5;
    detail += fmt("%sp=%.1f a=%g: drift r^4 in [-%.1f, -%.1f] (variation %.3f)%s",
                  detail.empty() ? "" : "; ", p, a, hi, lo, variation,
                  negative ? "" : " NOT NEGATIVE");
  }
  out.detail = detail;
  return out;
}

// 8. Appendix lemmas.
Outcome criterion_8() {
  std::int64_t checked = 0;
  std::int64_t violations = 0;
  for (std::int64_t s_num = 1; s_num <= 50; ++s_num) {
    for (std::int64_t s0_num = 0; s0_num <= 90; s0_num += 10) {
      for (std::int64_t M = 2; M <= 1000; ++M) {
        if (M * s_num < 100) continue;
        const std::int64_t count = count_arith_progression(s_num, s0_num, 100, M);
        ++checked;
        if (15 * count < 2 * M) ++violations;
      }
    }
  }

  std::int64_t cos_violations = 0;
  constexpr int kGrid = 10'000;
  for (int k = 0; k < kGrid; ++k) {
    const double alpha = (std::numbers::pi / 2) * k / (kGrid - 1);
    if (cosine_quadratic_margin(alpha) < 0.0) ++cos_violations;
  }

  RandomStream rng = RandomStream::derive(9, 0, 0);
  std::int64_t h_violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto M = static_cast<std::int64_t>(2 + rng.uniform_index(49));
    const double a = 0.05 + 0.95 * rng.uniform();
    const auto length = static_cast<std::size_t>(M) + rng.uniform_index(100);
    std::vector<double> w(length);
    double total = 0.0;
    for (auto& x : w) total += (x = rng.exponential(1.0));
    std::vector<double> q(length);
    for (std::size_t j = 0; j < length; ++j) {
      q[j] = (j < static_cast<std::size_t>(M) ? a / static_cast<double>(M) : 0.0) +
             (1.0 - a) * w[j] / total;
    }
    for (int k = 0; k < 200; ++k) {
      const double s = (std::numbers::pi / 2) * k / 199.0;
      const CosineSum cs = cosine_sum_bound(q, M, a, s);
      if (cs.h > cs.bound + 1e-12) ++h_violations;
    }
  }
  return {violations == 0 && cos_violations == 0 && h_violations == 0,
          fmt("arithmetic progressions: %lld violations in %lld cases; 1-cos >= a^2/4: %lld "
              "violations on 1e4 points; h <= bound: %lld violations in 100 x 200",
              static_cast<long long>(violations), static_cast<long long>(checked),
              static_cast<long long>(cos_violations), static_cast<long long>(h_violations)),
          {}};
}

// 9. Pass-once events of the biased walk.
Outcome criterion_9() {
  const double p = 0.7;
  Outcome out{true, {}, {}};
  std::string detail;
  struct Run {
    std::int64_t i;
    std::int64_t j;
    std::uint64_t seed;
  };
  bool first = true;
  for (const Run& run : {Run{5, 6, 10}, Run{5, 10, 11}}) {
    const VolkovResult v =
        volkov_bc_experiment(p, run.i, run.j, min_volkov_horizon(p, run.j), {100'000, run.seed, 1});
    const bool joint_ok = std::fabs(v.joint.estimate - v.expected.joint) <= 4.0 * v.joint.std_error;
    out.passed = out.passed && joint_ok;
    if (first) {
      const bool single_ok =
          std::fabs(v.single.estimate - v.expected.single) <= 4.0 * v.single.std_error;
      out.passed = out.passed && single_ok;
      detail += fmt("P(A_5) %.4f +- %.4f vs %.4f", v.single.estimate, v.single.std_error,
                    v.expected.single);
      first = false;
    }
    detail += fmt("; P(A_5 A_%lld) %.4f +- %.4f vs %.5f", static_cast<long long>(run.j),
                  v.joint.estimate, v.joint.std_error, v.expected.joint);
  }
  out.detail = detail;
  return out;
}

// 10. Qualitative regime trends.
Outcome criterion_10() {
  const std::vector<std::int64_t> horizons = {1'000, 10'000, 100'000};
  const auto rec = recurrence_experiment(2, Schedule::constant(0.5), horizons, {10'000, 12, 1});
  const auto tra = recurrence_experiment(2, Schedule::power_decay(1.0, 0.7, 1), horizons,
                                         {100'000, 13, 1});
  bool increasing = true;
  bool decreasing = true;
  for (std::size_t k = 1; k < horizons.size(); ++k) {
    increasing = increasing && rec[k].mean_visits.estimate > rec[k - 1].mean_visits.estimate;
    decreasing = decreasing &&
                 tra[k].late_visit_fraction.estimate < tra[k - 1].late_visit_fraction.estimate;
  }
  return {increasing && decreasing,
          fmt("Constant(0.5) mean visits %.4f, %.4f, %.4f (increasing); PowerDecay(0.7) late-visit "
              "fraction %.5f, %.5f, %.5f (decreasing)",
              rec[0].mean_visits.estimate, rec[1].mean_visits.estimate, rec[2].mean_visits.estimate,
              tra[0].late_visit_fraction.estimate, tra[1].late_visit_fraction.estimate,
              tra[2].late_visit_fraction.estimate),
          {}};
}

// 11. Determinism of criterion 4's run, single and multi-threaded.
Outcome criterion_11() {
  bool same = true;
  std::size_t bytes = 0;
  for (int shards : {1, 4}) {
    auto run = [&] {
      const TailEstimate t = estimate_tail(2, 0.9, 10'000, 20.0, {100'000, 4, shards});
      return tail_json(2, 20.0, t).dump();
    };
    const std::string first = run();
    const std::string second = run();
    same = same && first == second;
    bytes = first.size();
  }
  return {same, fmt("estimate_tail(d=2, a=20) JSON repeated with shards 1 and 4: %s (%zu bytes)",
                    same ? "byte-identical" : "DIFFERENT", bytes),
          {}};
}

// Runtime limits in seconds; criterion 11 has none.
double budget(int id) {
  static const std::map<int, double> limits = {{1, 60},  {2, 10},  {3, 60}, {4, 300},
                                               {5, 600}, {6, 600}, {7, 30}, {8, 60},
                                               {9, 60},  {10, 600}};
  const auto it = limits.find(id);
  return it == limits.end() ? HUGE_VAL : it->second;
}

const std::map<int, std::pair<const char*, std::function<Outcome()>>>& criteria() {
  static const std::map<int, std::pair<const char*, std::function<Outcome()>>> table = {
      {1, {"oracle agreement of both samplers", criterion_1}},
      {2, {"fourth moment exact vs enumeration", criterion_2}},
      {3, {"correlation decay", criterion_3}},
      {4, {"large-deviation tail bounds", criterion_4}},
      {5, {"homogeneous scaling limit", criterion_5}},
      {6, {"critical regime and zigzag limit", criterion_6}},
      {7, {"Lyapunov drift", criterion_7}},
      {8, {"appendix lemmas", criterion_8}},
      {9, {"pass-once probabilities", criterion_9}},
      {10, {"regime trends", criterion_10}},
      {11, {"determinism", criterion_11}},
  };
  return table;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int k = 1; k < argc; ++k) {
    if (std::strcmp(argv[k], "--criterion") == 0 && k + 1 < argc) {
      selected.push_back(std::atoi(argv[++k]));
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]...\n", argv[0]);
      return 2;
    }
  }
  if (selected.empty()) {
    for (const auto& [id, _] : criteria()) selected.push_back(id);
  }

  bool all = true;
  for (int id : selected) {
    const auto it = criteria().find(id);
    if (it == criteria().end()) {
      std::fprintf(stderr, "unknown criterion %d\n", id);
      return 2;
    }
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = it->second.second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what(), {}};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs >= budget(id)) {
      o.passed = false;
      o.detail += fmt(" (over the %.0f s runtime limit)", budget(id));
    }
    std::printf("[%s] criterion %d (%s): %s [%.1f s]\n", o.passed ? "PASS" : "FAIL", id,
                it->second.first, o.detail.c_str(), secs);
    for (const auto& note : o.notes) std::printf("       %s\n", note.c_str());
    std::fflush(stdout);
    all = all && o.passed;
  }
  return all ? 0 : 1;
}
