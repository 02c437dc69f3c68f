#include "crw/schedule.hpp"

#include <algorithm>
#include <cmath>

#include "crw/errors.hpp"

namespace crw {
namespace {

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

void validate(const Constant& k) {
  require(is_probability(k.p), "Constant: p must lie in [0, 1]");
}

void validate(const Critical& k) {
  require(k.a > 0.0 && std::isfinite(k.a), "Critical: a must be positive");
  require(k.n0 >= 1, "Critical: n0 must be >= 1");
  require(k.a <= static_cast<double>(k.n0),
          "Critical: a > n0 would give p_n0 = a/n0 > 1");
}

void validate(const PowerDecay& k) {
  require(k.c > 0.0 && std::isfinite(k.c), "PowerDecay: c must be positive");
  require(k.gamma > 0.0 && k.gamma < 1.0, "PowerDecay: gamma must lie in (0, 1)");
  require(k.n0 >= 1, "PowerDecay: n0 must be >= 1");
  require(k.c * std::pow(static_cast<double>(k.n0), -k.gamma) <= 1.0,
          "PowerDecay: c * n0^(-gamma) > 1");
}

void validate(const Periodic& k) {
  require(!k.values.empty(), "Periodic: values must be nonempty");
  require(std::all_of(k.values.begin(), k.values.end(), is_probability),
          "Periodic: every value must lie in [0, 1]");
  require(k.n0 >= 1, "Periodic: n0 must be >= 1");
}

void validate(const Explicit& k) {
  require(!k.values.empty(), "Explicit: values must be nonempty");
  require(std::all_of(k.values.begin(), k.values.end(), is_probability),
          "Explicit: every value must lie in [0, 1]");
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

Schedule::Schedule(ScheduleKind kind, double prefix_p)
    : kind_(std::move(kind)), prefix_p_(prefix_p) {
  require(is_probability(prefix_p_), "prefix_p must lie in [0, 1]");
  std::visit([](const auto& k) { validate(k); }, kind_);
}

double Schedule::p_at(std::int64_t n) const {
  if (n < 1) throw DomainError("p_at: n must be >= 1");
  return std::visit(
      overloaded{
          [](const Constant& k) { return k.p; },
          [&](const Critical& k) {
            return n < k.n0 ? prefix_p_ : k.a / static_cast<double>(n);
          },
          [&](const PowerDecay& k) {
            return n < k.n0 ? prefix_p_
                            : k.c * std::pow(static_cast<double>(n), -k.gamma);
          },
          [&](const Periodic& k) {
            if (n < k.n0) return prefix_p_;
            const auto r = static_cast<std::int64_t>(k.values.size());
            return k.values[static_cast<std::size_t>((n - k.n0) % r)];
          },
          [&](const Explicit& k) {
            const auto len = static_cast<std::int64_t>(k.values.size());
            return k.values[static_cast<std::size_t>(std::min(n, len) - 1)];
          },
      },
      kind_);
}

std::string Schedule::kind_name() const {
  return std::visit(overloaded{
                        [](const Constant&) { return std::string("Constant"); },
                        [](const Critical&) { return std::string("Critical"); },
                        [](const PowerDecay&) { return std::string("PowerDecay"); },
                        [](const Periodic&) { return std::string("Periodic"); },
                        [](const Explicit&) { return std::string("Explicit"); },
                    },
                    kind_);
}

bool operator==(const Constant& a, const Constant& b) { return a.p == b.p; }
bool operator==(const Critical& a, const Critical& b) {
  return a.a == b.a && a.n0 == b.n0;
}
bool operator==(const PowerDecay& a, const PowerDecay& b) {
  return a.c == b.c && a.gamma == b.gamma && a.n0 == b.n0;
}
bool operator==(const Periodic& a, const Periodic& b) {
  return a.values == b.values && a.n0 == b.n0;
}
bool operator==(const Explicit& a, const Explicit& b) { return a.values == b.values; }

bool operator==(const Schedule& a, const Schedule& b) {
  return a.kind_ == b.kind_ && a.prefix_p_ == b.prefix_p_;
}

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::Recurrent: return "Recurrent";
    case Regime::NotStronglyTransient: return "NotStronglyTransient";
    case Regime::StronglyTransient: return "StronglyTransient";
    case Regime::ConjecturedStronglyTransient: return "ConjecturedStronglyTransient";
    case Regime::Unknown: return "Unknown";
  }
  return "Unknown";
}

namespace {

// Closed-form asymptotic facts about a schedule, decided per family.
struct TailProfile {
  // p_n = p in (0, 1) for every n >= 2.
  bool homogeneous_from_two = false;
  // p_{n+r} = p_n for all large n.
  bool eventually_periodic = false;
  // sum_n p_n < infinity.
  bool summable = false;
  // p_n < n^(-1/2 - eps) for all large n, some eps > 0.
  bool below_half_power = false;
  // Bounded ratio of max/min of p over windows [n - n^(1-eps'), n].
  bool window_ratio_bounded = false;
  // p_n n^(1-eps) / ln n -> infinity for some admissible eps.
  bool log_growth = false;
  // sum_n (p_n / n^(1-eps))^(d/2) < infinity for some admissible eps.
  bool power_summable = false;
  bool critical = false;
};

// Summary of an eventually-constant or periodic tail.
TailProfile periodic_profile(const std::vector<double>& tail, bool homogeneous_from_two,
                             int d) {
  TailProfile t;
  const auto [lo, hi] = std::minmax_element(tail.begin(), tail.end());
  t.homogeneous_from_two = homogeneous_from_two && *lo > 0.0 && *hi < 1.0 && *lo == *hi;
  t.eventually_periodic = true;
  t.summable = *hi == 0.0;
  t.below_half_power = *hi == 0.0;
  t.window_ratio_bounded = *lo > 0.0;
  t.log_growth = *lo > 0.0;
  // Needs (1 - eps) d / 2 > 1 with eps > 0, i.e. d >= 3.
  t.power_summable = *lo > 0.0 ? d >= 3 : true;
  return t;
}

TailProfile profile(const Schedule& s, int d) {
  return std::visit(
      overloaded{
          [&](const Constant& k) { return periodic_profile({k.p}, true, d); },
          [&](const Periodic& k) {
            return periodic_profile(k.values, k.values.size() == 1 && k.n0 <= 2, d);
          },
          [&](const Explicit& k) {
            // Only the repeated last value matters asymptotically.
            const bool flat_from_two =
                k.values.size() <= 2 ||
                std::all_of(k.values.begin() + 1, k.values.end(),
                            [&](double v) { return v == k.values.back(); });
            return periodic_profile({k.values.back()}, flat_from_two, d);
          },
          [&](const Critical&) {
            TailProfile t;
            t.below_half_power = true;        // a/n < n^(-3/4) eventually
            t.window_ratio_bounded = true;    // n / (n - n^(1-eps')) -> 1
            t.log_growth = false;             // a n^(-eps) / ln n -> 0
            t.power_summable = true;          // (a n^(-2+eps))^(d/2), eps < 1
            t.critical = true;
            return t;
          },
          [&](const PowerDecay& k) {
            TailProfile t;
            t.below_half_power = k.gamma > 0.5;
            // eps < min(gamma, 1 - gamma) satisfies all three regularity conditions.
            t.window_ratio_bounded = true;
            t.log_growth = true;
            t.power_summable = true;
            return t;
          },
      },
      s.kind());
}

int rank(Regime r) {
  switch (r) {
    case Regime::Recurrent: return 0;
    case Regime::StronglyTransient: return 1;
    case Regime::NotStronglyTransient: return 2;
    case Regime::ConjecturedStronglyTransient: return 3;
    case Regime::Unknown: return 4;
  }
  return 4;
}

}  // namespace

RegimeClassification classify_regime(const Schedule& schedule, int d) {
  if (d < 1) throw DomainError("classify_regime: d must be >= 1");

  RegimeClassification out;
  auto& conds = out.checked_conditions;
  conds.push_back({"dimension>=2", d >= 2});
  if (d < 2) return out;

  const TailProfile t = profile(schedule, d);

  struct Match {
    Regime regime;
    const char* ref;
  };
  std::vector<Match> matches;
  auto check = [&](const char* name, bool ok, Regime regime) {
    conds.push_back({name, ok});
    if (ok) matches.push_back({regime, name});
  };

  conds.push_back({"homogeneous p in (0,1) from n=2", t.homogeneous_from_two});
  conds.push_back({"sum p_n < infinity", t.summable});
  conds.push_back({"p_n < n^(-1/2-eps) eventually", t.below_half_power});
  conds.push_back({"window max/min ratio bounded", t.window_ratio_bounded});
  conds.push_back({"p_n n^(1-eps)/ln n -> infinity", t.log_growth});
  conds.push_back({"sum (p_n/n^(1-eps))^(d/2) < infinity", t.power_summable});
  conds.push_back({"eventually periodic with sum p_n = infinity",
                   t.eventually_periodic && !t.summable});

  check(kRecurrenceHomogeneous2d, d == 2 && t.homogeneous_from_two, Regime::Recurrent);
  check(kFiniteTurns, t.summable, Regime::StronglyTransient);
  check(kStrongTransience2d, d == 2 && t.below_half_power, Regime::StronglyTransient);
  check(kStrongTransienceRegularDecay,
        t.window_ratio_bounded && t.log_growth && t.power_summable,
        Regime::StronglyTransient);
  check(kPeriodicNotStronglyTransient, d == 2 && t.eventually_periodic && !t.summable,
        Regime::NotStronglyTransient);
  check(kCriticalConjecture, t.critical, Regime::ConjecturedStronglyTransient);

  const auto best = std::min_element(
      matches.begin(), matches.end(),
      [](const Match& a, const Match& b) { return rank(a.regime) < rank(b.regime); });
  if (best != matches.end()) {
    out.regime = best->regime;
    out.theorem_ref = best->ref;
  }
  return out;
}

}  // namespace crw
