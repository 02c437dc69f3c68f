#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace crw {

/// Turning-probability families. Each p_n is the probability that the walk
/// redraws its direction (uniformly over all 2d unit vectors) at step n.
struct Constant {
  double p;
};

/// p_n = a / n for n >= n0.
struct Critical {
  double a;
  std::int64_t n0;
};

/// p_n = c * n^(-gamma) for n >= n0, gamma in (0, 1).
struct PowerDecay {
  double c;
  double gamma;
  std::int64_t n0;
};

/// p_n = values[(n - n0) mod r] for n >= n0.
struct Periodic {
  std::vector<double> values;
  std::int64_t n0;
};

/// p_1..p_L given explicitly; the last value repeats for n > L.
struct Explicit {
  std::vector<double> values;
};

using ScheduleKind = std::variant<Constant, Critical, PowerDecay, Periodic, Explicit>;

/// An immutable, validated turning-probability sequence {p_n}_{n>=1}.
///
/// Construction rejects any parameters that would put some p_n outside
/// [0, 1]; p_at() is then total. For n < n0 the schedule returns prefix_p,
/// which defaults to 1 so the first steps are free uniform choices.
class Schedule {
 public:
  explicit Schedule(ScheduleKind kind, double prefix_p = 1.0);

  static Schedule constant(double p) { return Schedule(Constant{p}); }
  static Schedule critical(double a, std::int64_t n0, double prefix_p = 1.0) {
    return Schedule(Critical{a, n0}, prefix_p);
  }
  static Schedule power_decay(double c, double gamma, std::int64_t n0,
                              double prefix_p = 1.0) {
    return Schedule(PowerDecay{c, gamma, n0}, prefix_p);
  }
  static Schedule periodic(std::vector<double> values, std::int64_t n0,
                           double prefix_p = 1.0) {
    return Schedule(Periodic{std::move(values), n0}, prefix_p);
  }
  static Schedule explicit_values(std::vector<double> values) {
    return Schedule(Explicit{std::move(values)});
  }

  [[nodiscard]] double p_at(std::int64_t n) const;

  [[nodiscard]] const ScheduleKind& kind() const noexcept { return kind_; }
  [[nodiscard]] double prefix_p() const noexcept { return prefix_p_; }
  [[nodiscard]] std::string kind_name() const;

  /// Constant(p) has the same value at every n; the samplers use this to
  /// switch to geometric gaps.
  [[nodiscard]] bool is_constant() const noexcept {
    return std::holds_alternative<Constant>(kind_);
  }

  friend bool operator==(const Schedule& a, const Schedule& b);

 private:
  ScheduleKind kind_;
  double prefix_p_;
};

bool operator==(const Constant& a, const Constant& b);
bool operator==(const Critical& a, const Critical& b);
bool operator==(const PowerDecay& a, const PowerDecay& b);
bool operator==(const Periodic& a, const Periodic& b);
bool operator==(const Explicit& a, const Explicit& b);

enum class Regime {
  Recurrent,
  NotStronglyTransient,
  StronglyTransient,
  ConjecturedStronglyTransient,
  Unknown,
};

std::string to_string(Regime regime);

struct CheckedCondition {
  std::string name;
  bool satisfied;

  friend bool operator==(const CheckedCondition&, const CheckedCondition&) = default;
};

struct RegimeClassification {
  Regime regime = Regime::Unknown;
  /// Name of the result whose hypotheses decided the regime; empty iff Unknown.
  std::string theorem_ref;
  std::vector<CheckedCondition> checked_conditions;

  friend bool operator==(const RegimeClassification&,
                         const RegimeClassification&) = default;
};

// Result names reported in RegimeClassification::theorem_ref.
inline constexpr const char* kRecurrenceHomogeneous2d = "recurrence-homogeneous-2d";
inline constexpr const char* kPeriodicNotStronglyTransient = "periodic-not-strongly-transient";
inline constexpr const char* kStrongTransience2d = "strong-transience-2d";
inline constexpr const char* kStrongTransienceRegularDecay = "strong-transience-regular-decay";
inline constexpr const char* kFiniteTurns = "finite-turns";
inline constexpr const char* kCriticalConjecture = "critical-case-conjecture";

/// Applies the recurrence/transience results in priority order
/// Recurrent > StronglyTransient > NotStronglyTransient >
/// ConjecturedStronglyTransient > Unknown.
///
/// Hypotheses are checked symbolically per family, never by truncated
/// numeric sums. d = 1 always yields Unknown.
RegimeClassification classify_regime(const Schedule& schedule, int d);

}  // namespace crw
