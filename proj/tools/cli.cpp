#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "crw/analytics.hpp"
#include "crw/errors.hpp"
#include "crw/io.hpp"
#include "crw/oracle.hpp"
#include "crw/schedule.hpp"
#include "crw/verify.hpp"
#include "crw/walk.hpp"
#include "crw/zigzag.hpp"

namespace crw::cli {
namespace {

using ojson = nlohmann::ordered_json;

struct Options {
  std::string schedule;
  int d = 2;
  std::int64_t n = 0;
  std::int64_t samples = 10000;
  std::uint64_t seed = 0;
  int shards = 1;
  std::string out;
  std::string format;

  std::string sampler = "events";
  bool dense = false;

  double a = 0.0;
  double b = 0.0;
  double epsilon = 0.0;
  double T = 1.0;
  std::int64_t grid = 0;

  std::string op;
  double p = 0.5;
  int m = 2;
  std::string mode = "exact";
  std::int64_t i = 1;
  std::int64_t j = 1;
  std::int64_t gap = 0;
  std::int64_t x = 0;
  std::int64_t y = 0;
  double tail = 1e-12;
  double s = 0.5;
  double s0 = 0.0;
  std::int64_t M = 2;
  double alpha = 0.0;

  std::int64_t cap = 0;

  std::string experiment;
  double delta = 0.1;
  std::vector<std::int64_t> horizons;
  std::int64_t horizon = 0;
  std::string normalization = "stated";
  std::int64_t zigzag_samples = 0;
  std::string expect = "none";
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Schedule load_schedule(const std::string& text) {
  if (text.empty()) throw UsageError("--schedule is required");
  std::string body = text;
  if (text.front() == '@') {
    std::ifstream in(text.substr(1));
    if (!in) throw UsageError("cannot read schedule file " + text.substr(1));
    std::stringstream ss;
    ss << in.rdbuf();
    body = ss.str();
  }
  ojson j;
  try {
    j = ojson::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError(std::string("--schedule is not valid JSON: ") + e.what());
  }
  return schedule_from_json(j);
}

ojson common_config(const std::string& command, const Options& o) {
  return {{"command", command}, {"d", o.d}, {"seed", o.seed}, {"out", o.out}};
}

/// Writes `text` to --out or `out`. CSV carries no room for the config, so
/// it goes to <out>.config.json, or to `err` when writing to stdout.
void emit(const std::string& text, const Options& o, const ojson& config, bool csv,
          std::ostream& out, std::ostream& err) {
  if (o.out.empty()) {
    out << text;
    if (csv) err << config.dump() << '\n';
    return;
  }
  std::ofstream file(o.out, std::ios::binary);
  if (!file) throw UsageError("cannot open output file " + o.out);
  file << text;
  if (csv) {
    std::ofstream side(o.out + ".config.json", std::ios::binary);
    if (!side) throw UsageError("cannot open output file " + o.out + ".config.json");
    side << config.dump(2) << '\n';
  }
}

void emit_json(const ojson& j, const Options& o, std::ostream& out, std::ostream& err) {
  emit(j.dump(2) + "\n", o, j.contains("config") ? j["config"] : ojson{}, false, out, err);
}

bool want_json(const Options& o) { return o.format == "json"; }

int cmd_simulate(const Options& o, std::ostream& out, std::ostream& err) {
  const Schedule schedule = load_schedule(o.schedule);
  if (o.d < 1) throw DomainError("--d must be >= 1");
  if (o.n < 0) throw DomainError("--n must be >= 0");
  ojson config = common_config("simulate", o);
  config["schedule"] = schedule_to_json(schedule);
  config["n"] = o.n;
  config["sampler"] = o.sampler;
  config["dense"] = o.dense;
  config["format"] = want_json(o) ? "json" : "csv";

  RandomStream rng = RandomStream::derive(o.seed, 0, 0);
  const Path path = o.sampler == "step" ? simulate(o.d, schedule, o.n, rng)
                                        : simulate_events(o.d, schedule, o.n, rng);
  if (want_json(o)) {
    ojson events = ojson::array();
    for (std::size_t k = 0; k < path.events.size(); ++k) {
      const auto& e = path.events[k];
      events.push_back({{"k", k + 1}, {"tau_k", e.update_time},
                        {"axis", e.new_direction.axis}, {"sign", e.new_direction.sign}});
    }
    emit_json({{"op", "simulate"}, {"config", config}, {"events", events},
               {"endpoint", path.endpoint()}},
              o, out, err);
    return kSuccess;
  }
  std::ostringstream csv;
  if (o.dense) {
    write_dense_csv(csv, path);
  } else {
    write_path_csv(csv, path);
  }
  emit(csv.str(), o, config, true, out, err);
  return kSuccess;
}

int cmd_zigzag(const Options& o, bool a_given, bool b_given, bool eps_given, std::ostream& out,
               std::ostream& err) {
  if (a_given == b_given) throw UsageError("zigzag needs exactly one of --a and --b");
  const double b = b_given ? o.b : b_from_a(o.a, o.d);
  const double eps = eps_given ? o.epsilon : 1e-4 * o.T;
  ojson config = common_config("zigzag", o);
  if (a_given) config["a"] = o.a;
  config["b"] = b;
  config["epsilon"] = eps;
  config["T"] = o.T;
  config["grid"] = o.grid;
  config["format"] = want_json(o) ? "json" : "csv";

  RandomStream rng = RandomStream::derive(o.seed, 0, 0);
  const ZigzagPath path = sample_zigzag(b, o.d, eps, o.T, rng);
  std::vector<double> grid;
  for (std::int64_t k = 1; k <= o.grid; ++k) {
    grid.push_back(k == o.grid ? o.T
                               : eps + (o.T - eps) * static_cast<double>(k) /
                                           static_cast<double>(o.grid));
  }
  if (want_json(o)) {
    ojson intervals = ojson::array();
    const auto& iv = path.intervals();
    for (std::size_t k = 0; k < iv.size(); ++k) {
      intervals.push_back({{"left", iv.left(k)}, {"right", iv.right(k)},
                           {"axis", iv.labels[k].axis}, {"sign", iv.labels[k].sign}});
    }
    ojson traj = ojson::array();
    for (double t : grid) traj.push_back({{"t", t}, {"z", path.position_at(t)}});
    emit_json({{"op", "zigzag"}, {"config", config}, {"intervals", intervals},
               {"trajectory", traj}},
              o, out, err);
    return kSuccess;
  }
  std::ostringstream csv;
  if (o.grid > 0) {
    write_trajectory_csv(csv, path, grid);
  } else {
    write_zigzag_csv(csv, path);
  }
  emit(csv.str(), o, config, true, out, err);
  return kSuccess;
}

int cmd_classify(const Options& o, std::ostream& out, std::ostream& err) {
  const Schedule schedule = load_schedule(o.schedule);
  if (o.d < 1) throw DomainError("--d must be >= 1");
  ojson config = {{"command", "classify"}, {"d", o.d}, {"schedule", schedule_to_json(schedule)}};
  ojson result = {{"op", "classify"}, {"config", config}};
  result.update(to_json(classify_regime(schedule, o.d)));
  emit_json(result, o, out, err);
  return kSuccess;
}

int cmd_moments(const Options& o, bool gap_given, std::ostream& out, std::ostream& err) {
  ojson config = {{"command", "moments"}, {"op", o.op}};
  ojson value;
  if (o.op == "sgeom") {
    config["p"] = o.p;
    config["m"] = o.m;
    value = sgeom_moment(o.p, o.m);
  } else if (o.op == "fourth") {
    config["p"] = o.p;
    config["n"] = o.n;
    config["mode"] = o.mode;
    if (o.mode != "exact" && o.mode != "asymptotic") throw UsageError("--mode must be exact or asymptotic");
    value = fourth_moment_L(o.p, o.n,
                            o.mode == "exact" ? MomentMode::Exact : MomentMode::Asymptotic);
  } else if (o.op == "correlation") {
    const Schedule schedule = load_schedule(o.schedule);
    config["schedule"] = schedule_to_json(schedule);
    config["i"] = o.i;
    config["j"] = o.j;
    value = correlation_e(schedule, o.i, o.j);
  } else if (o.op == "ld") {
    config["p"] = o.p;
    config["a"] = o.a;
    config["d"] = o.d;
    value = ld_bound(o.p, o.a, o.d);
  } else if (o.op == "gambler") {
    config["p"] = o.p;
    config["gap"] = gap_given ? ojson(o.gap) : ojson("infinity");
    const PassOnce r =
        gambler_pass_once(o.p, gap_given ? std::optional<std::int64_t>(o.gap) : std::nullopt);
    value = {{"single", r.single}, {"joint", r.joint}};
  } else if (o.op == "lyapunov") {
    const LyapunovConfig lc(o.p, o.a, o.tail);
    config["p"] = o.p;
    config["a"] = o.a;
    config["position"] = {o.x, o.y};
    config["truncation_tail"] = o.tail;
    config["admissibility_threshold"] = LyapunovConfig::admissibility_threshold(o.p);
    const DriftValue dv = lyapunov_drift(lc, {o.x, o.y});
    value = {{"drift", dv.drift}, {"remainder", dv.remainder}};
  } else if (o.op == "arith") {
    config["s"] = o.s;
    config["s0"] = o.s0;
    config["M"] = o.M;
    const std::int64_t count = count_arith_progression(o.s, o.s0, o.M);
    value = {{"count", count},
             {"lower_bound", static_cast<std::int64_t>(std::ceil(2.0 * static_cast<double>(o.M) / 15.0))}};
  } else if (o.op == "cosine-margin") {
    config["alpha"] = o.alpha;
    value = cosine_quadratic_margin(o.alpha);
  } else {
    throw UsageError("unknown --op " + o.op);
  }
  emit_json({{"op", "moments"}, {"config", config}, {"value", value}}, o, out, err);
  return kSuccess;
}

int cmd_exact(const Options& o, std::ostream& out, std::ostream& err) {
  const Schedule schedule = load_schedule(o.schedule);
  ojson config = {{"command", "exact"}, {"d", o.d}, {"schedule", schedule_to_json(schedule)},
                  {"n", o.n}, {"out", o.out}, {"format", want_json(o) ? "json" : "csv"}};
  std::optional<std::int64_t> cap;
  if (o.cap > 0) {
    cap = o.cap;
    config["cap"] = o.cap;
  }
  const ExactDistribution dist = exact_distribution(o.d, schedule, o.n, cap);
  if (want_json(o)) {
    ojson entries = ojson::array();
    for (const auto& e : dist.entries()) {
      entries.push_back({{"position", e.position}, {"axis", e.direction.axis},
                         {"sign", e.direction.sign}, {"prob", e.probability}});
    }
    emit_json({{"op", "exact"}, {"config", config}, {"error_bound", dist.error_bound()},
               {"entries", entries}},
              o, out, err);
    return kSuccess;
  }
  std::ostringstream csv;
  write_distribution_csv(csv, dist);
  emit(csv.str(), o, config, true, out, err);
  return kSuccess;
}

RunOptions run_options(const Options& o) { return {o.samples, o.seed, o.shards}; }

ojson run_config(const std::string& experiment, const Options& o) {
  return {{"command", "verify"}, {"experiment", experiment}, {"samples", o.samples},
          {"seed", o.seed},      {"shards", o.shards}};
}

int cmd_verify(const Options& o, bool horizon_given, std::ostream& out, std::ostream& err) {
  const std::string& e = o.experiment;
  ojson config = run_config(e, o);
  bool verdict = true;
  ojson result;

  if (e == "tail") {
    config.update({{"d", o.d}, {"p", o.p}, {"n", o.n}, {"a", o.a}});
    const TailEstimate t = estimate_tail(o.d, o.p, o.n, o.a, run_options(o));
    verdict = t.holds;
    result = result_json("estimate_tail", config, t.result, t.bound, verdict);
  } else if (e == "covariance") {
    const Schedule schedule = load_schedule(o.schedule);
    config.update({{"schedule", schedule_to_json(schedule)}, {"i", o.i}, {"j", o.j}});
    const EstimatorResult r = estimate_covariance(schedule, o.i, o.j, run_options(o));
    const double expected = correlation_e(schedule, o.i, o.j);
    verdict = std::fabs(r.estimate - expected) <= 4.0 * r.std_error;
    result = result_json("estimate_covariance", config, r, std::nullopt, verdict);
    result["expected"] = expected;
  } else if (e == "scaling") {
    if (o.normalization != "stated" && o.normalization != "per-coordinate") {
      throw UsageError("--normalization must be stated or per-coordinate");
    }
    const TestReport report = scaling_limit_test(
        o.d, o.p, o.n, run_options(o),
        o.normalization == "stated" ? ScalingNormalization::AsStated
                                    : ScalingNormalization::PerCoordinate);
    verdict = report.passed();
    result = to_json(report, "scaling_limit_test");
    result["config"].update({{"command", "verify"}, {"experiment", e}});
  } else if (e == "critical") {
    const TestReport report =
        critical_limit_test(o.d, o.a, o.n, o.delta, run_options(o), o.zigzag_samples);
    verdict = report.passed();
    result = to_json(report, "critical_limit_test");
    result["config"].update({{"command", "verify"}, {"experiment", e}});
  } else if (e == "recurrence") {
    const Schedule schedule = load_schedule(o.schedule);
    if (o.horizons.empty()) throw UsageError("--horizons is required");
    if (o.expect != "none" && o.expect != "recurrent" && o.expect != "transient") {
      throw UsageError("--expect must be none, recurrent or transient");
    }
    config.update({{"d", o.d}, {"schedule", schedule_to_json(schedule)},
                   {"horizons", o.horizons}, {"expect", o.expect}});
    const auto points = recurrence_experiment(o.d, schedule, o.horizons, run_options(o));
    ojson rows = ojson::array();
    bool increasing = true;
    bool decreasing = true;
    for (std::size_t k = 0; k < points.size(); ++k) {
      rows.push_back({{"horizon", points[k].horizon},
                      {"mean_visits", to_json(points[k].mean_visits)},
                      {"late_visit_fraction", to_json(points[k].late_visit_fraction)}});
      if (k > 0) {
        increasing = increasing &&
                     points[k].mean_visits.estimate > points[k - 1].mean_visits.estimate;
        decreasing = decreasing && points[k].late_visit_fraction.estimate <
                                       points[k - 1].late_visit_fraction.estimate;
      }
    }
    if (o.expect == "recurrent") verdict = increasing;
    if (o.expect == "transient") verdict = decreasing;
    result = {{"op", "recurrence_experiment"}, {"config", config}, {"horizons", rows},
              {"mean_visits_increasing", increasing}, {"late_fraction_decreasing", decreasing},
              {"verdict", verdict}};
  } else if (e == "volkov") {
    const std::int64_t horizon =
        horizon_given ? o.horizon : min_volkov_horizon(o.p, std::max<std::int64_t>(o.j, 1));
    config.update({{"p", o.p}, {"i", o.i}, {"j", o.j}, {"horizon", horizon}});
    const VolkovResult v = volkov_bc_experiment(o.p, o.i, o.j, horizon, run_options(o));
    const bool single_ok = std::fabs(v.single.estimate - v.expected.single) <= 4.0 * v.single.std_error;
    const bool joint_ok = std::fabs(v.joint.estimate - v.expected.joint) <= 4.0 * v.joint.std_error;
    verdict = single_ok && joint_ok;
    ojson single = to_json(v.single);
    single["expected"] = v.expected.single;
    single["within_4se"] = single_ok;
    ojson joint = to_json(v.joint);
    joint["expected"] = v.expected.joint;
    joint["within_4se"] = joint_ok;
    result = {{"op", "volkov_bc_experiment"}, {"config", config}, {"single", single},
              {"joint", joint}, {"verdict", verdict}};
  } else if (e == "moment4") {
    config.update({{"p", o.p}, {"n", o.n}});
    const EstimatorResult r = moment4_experiment(o.p, o.n, run_options(o));
    const double expected = fourth_moment_L(o.p, o.n, MomentMode::Exact);
    verdict = std::fabs(r.estimate - expected) <= 4.0 * r.std_error;
    result = result_json("moment4_experiment", config, r, std::nullopt, verdict);
    result["expected"] = expected;
  } else {
    throw UsageError("unknown experiment " + e);
  }
  emit_json(result, o, out, err);
  return verdict ? kSuccess : kVerdictFailed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Conservative random walks: simulation, exact laws and verification", "crw"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--d", o.d, "Dimension");
    sub->add_option("--n", o.n, "Horizon / number of steps");
    sub->add_option("--seed", o.seed, "Master seed")->capture_default_str();
    sub->add_option("--out", o.out, "Output file (default stdout)");
  };
  auto add_schedule = [&](CLI::App* sub) {
    sub->add_option("--schedule", o.schedule, "Schedule JSON object or @file");
  };
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
  };

  CLI::App* simulate_cmd = app.add_subcommand("simulate", "Sample one walk path");
  add_common(simulate_cmd);
  add_schedule(simulate_cmd);
  add_format(simulate_cmd);
  simulate_cmd->add_option("--sampler", o.sampler, "events or step")
      ->check(CLI::IsMember({"events", "step"}));
  simulate_cmd->add_flag("--dense", o.dense, "Emit every position instead of update events");

  CLI::App* zigzag_cmd = app.add_subcommand("zigzag", "Sample one zigzag path");
  add_common(zigzag_cmd);
  add_format(zigzag_cmd);
  CLI::Option* a_opt = zigzag_cmd->add_option("--a", o.a, "Critical constant a (b derived)");
  CLI::Option* b_opt = zigzag_cmd->add_option("--b", o.b, "Intensity b");
  CLI::Option* eps_opt = zigzag_cmd->add_option("--epsilon", o.epsilon, "Truncation (default 1e-4 T)");
  zigzag_cmd->add_option("--T", o.T, "Horizon");
  zigzag_cmd->add_option("--grid", o.grid, "Emit the trajectory on this many grid points");

  CLI::App* classify_cmd = app.add_subcommand("classify", "Regime classification of a schedule");
  classify_cmd->add_option("--d", o.d, "Dimension");
  add_schedule(classify_cmd);
  classify_cmd->add_option("--out", o.out, "Output file (default stdout)");

  CLI::App* moments_cmd = app.add_subcommand("moments", "Closed-form quantities");
  moments_cmd->add_option("--op", o.op, "sgeom|fourth|correlation|ld|gambler|lyapunov|arith|cosine-margin")
      ->required();
  add_common(moments_cmd);
  add_schedule(moments_cmd);
  moments_cmd->add_option("--p", o.p, "Turning probability");
  moments_cmd->add_option("--m", o.m, "Moment order");
  moments_cmd->add_option("--mode", o.mode, "exact or asymptotic");
  moments_cmd->add_option("--a", o.a, "a");
  moments_cmd->add_option("--i", o.i, "First index");
  moments_cmd->add_option("--j", o.j, "Second index");
  CLI::Option* gap_opt = moments_cmd->add_option("--gap", o.gap, "j - i (omit for infinity)");
  moments_cmd->add_option("--x", o.x, "First coordinate");
  moments_cmd->add_option("--y", o.y, "Second coordinate");
  moments_cmd->add_option("--tail", o.tail, "Truncation tail");
  moments_cmd->add_option("--s", o.s, "Progression step");
  moments_cmd->add_option("--s0", o.s0, "Progression offset");
  moments_cmd->add_option("--M", o.M, "Progression length");
  moments_cmd->add_option("--alpha", o.alpha, "Angle");

  CLI::App* exact_cmd = app.add_subcommand("exact", "Exact distribution by dynamic programming");
  add_common(exact_cmd);
  add_schedule(exact_cmd);
  add_format(exact_cmd);
  exact_cmd->add_option("--cap", o.cap, "Override the horizon cap");

  CLI::App* verify_cmd = app.add_subcommand("verify", "Monte Carlo verification experiments");
  verify_cmd->add_option("experiment", o.experiment,
                         "tail|covariance|scaling|critical|recurrence|volkov|moment4")
      ->required()
      ->check(CLI::IsMember(
          {"tail", "covariance", "scaling", "critical", "recurrence", "volkov", "moment4"}));
  add_common(verify_cmd);
  add_schedule(verify_cmd);
  verify_cmd->add_option("--samples", o.samples, "Monte Carlo samples")->capture_default_str();
  verify_cmd->add_option("--shards", o.shards, "Worker threads")->capture_default_str();
  verify_cmd->add_option("--p", o.p, "Turning / up probability");
  verify_cmd->add_option("--a", o.a, "Tail radius or critical constant");
  verify_cmd->add_option("--i", o.i, "First index / level");
  verify_cmd->add_option("--j", o.j, "Second index / level");
  verify_cmd->add_option("--delta", o.delta, "Window start fraction");
  verify_cmd->add_option("--horizons", o.horizons, "Increasing horizons")->delimiter(',');
  CLI::Option* horizon_opt = verify_cmd->add_option("--horizon", o.horizon, "Walk horizon");
  verify_cmd->add_option("--normalization", o.normalization, "stated or per-coordinate");
  verify_cmd->add_option("--zigzag-samples", o.zigzag_samples, "Zigzag samples (default --samples)");
  verify_cmd->add_option("--expect", o.expect, "none, recurrent or transient");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }

  try {
    if (simulate_cmd->parsed()) return cmd_simulate(o, out, err);
    if (zigzag_cmd->parsed()) {
      return cmd_zigzag(o, a_opt->count() > 0, b_opt->count() > 0, eps_opt->count() > 0, out, err);
    }
    if (classify_cmd->parsed()) return cmd_classify(o, out, err);
    if (moments_cmd->parsed()) return cmd_moments(o, gap_opt->count() > 0, out, err);
    if (exact_cmd->parsed()) return cmd_exact(o, out, err);
    if (verify_cmd->parsed()) return cmd_verify(o, horizon_opt->count() > 0, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace crw::cli
