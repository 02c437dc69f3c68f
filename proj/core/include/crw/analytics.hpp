#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>

#include "crw/schedule.hpp"

namespace crw {

/// e_{i,j} = prod_{k=i+1}^{j} (1 - p_k): the correlation E[Y_i Y_j] of the
/// one-dimensional step signs. Requires 1 <= i <= j.
double correlation_e(const Schedule& schedule, std::int64_t i, std::int64_t j);

/// Even moments of the symmetrized geometric law P(+-m) = (1-p)^(m-1) p / 2:
///   E xi^2 = (2 - p) / p^2,   E xi^4 = (2 - p)(p^2 + 12(1 - p)) / p^4.
/// Throws UnsupportedMoment unless m is 2 or 4.
double sgeom_moment(double p, int m);

enum class MomentMode { Exact, Asymptotic };

/// E L_n^4 for the homogeneous one-dimensional walk.
///
/// Exact mode expands (sum Y_i)^4 with E[Y_i Y_j Y_k Y_l] = q^{j-i} q^{l-k}
/// (i < j < k < l) and collapses the pair and quadruple sums to two single
/// sums, so the cost is O(n). Asymptotic mode drops the O(n q^n) remainder.
double fourth_moment_L(double p, std::int64_t n, MomentMode mode);

/// Exact minus asymptotic fourth moment, in closed form:
///   -q^n [12 n (1-p)(2-p)/p^3 + 8 (1-p)(3-2p)(3-p)/p^4].
double fourth_moment_remainder(double p, std::int64_t n);

/// Large-deviation tail bound for P(|S_n| > a sqrt(n)), valid for large n:
/// 2 exp(-p^2 a / 5) for d = 1 (a >= 1), d exp(-p^2 (a / sqrt d) / 5) for
/// d >= 2 (a >= sqrt d). Clamped to 1.
double ld_bound(double p, double a, int d);

struct LyapunovConfig {
  double p;
  /// Shift in f(z) = ln(|z|^2 - a) outside the disc |z| <= sqrt(a + 1).
  double a;
  /// Geometric mass left out of the exact summation; in (0, 1e-6].
  double truncation_tail = 1e-12;

  LyapunovConfig(double p, double a, double truncation_tail = 1e-12);

  /// Smallest a for which the drift bound of the recurrence argument is
  /// negative at infinity: 3/2 + 18 (1 - p) / p^2.
  static double admissibility_threshold(double p);
};

struct DriftValue {
  /// Exactly summed drift over the jumps kept.
  double drift;
  /// Certified bound on the contribution of the truncated jumps; the true
  /// drift lies in [drift - remainder, drift + remainder].
  double remainder;
};

/// E[f(z + J) - f(z)] for one embedded jump J of the planar walk: a uniform
/// axis and sign times a Geometric(p) length.
DriftValue lyapunov_drift(const LyapunovConfig& config, std::array<std::int64_t, 2> position);

struct PassOnce {
  double single;
  double joint;
};

/// Pass-once probabilities for the nearest-neighbour walk with up-probability
/// p > 1/2: P(A_i) = p - q and P(A_i A_j) = (p - q)^2 / (1 - r^{j-i}), r = q/p.
/// An empty gap means j - i = infinity.
PassOnce gambler_pass_once(double p, std::optional<std::int64_t> gap);

/// Exact count of k in {1..M} with k s + s0 (mod 1) in [0, 1/2).
/// Requires s in (0, 1/2], M >= 2 and M s >= 1.
std::int64_t count_arith_progression(double s, double s0, std::int64_t M);

/// Same count for rational s = s_num / den and s0 = s0_num / den, using
/// integer arithmetic so grid points on the interval boundary are exact.
std::int64_t count_arith_progression(std::int64_t s_num, std::int64_t s0_num,
                                     std::int64_t den, std::int64_t M);

struct CosineSum {
  /// h(s) = sum_j q_j |cos(j s)|.
  double h;
  /// 1 - (a / M) sum_{j=1}^{M} (1 - |cos(j s)|); always >= h.
  double bound;
};

/// q_dist[j - 1] holds q_j. Requires the distribution to sum to 1 within
/// 1e-12, q_j >= a / M for j <= M, and s in [0, pi/2].
CosineSum cosine_sum_bound(std::span<const double> q_dist, std::int64_t M, double a, double s);

/// 1 - cos(alpha) - alpha^2 / 4, nonnegative on [0, pi/2].
double cosine_quadratic_margin(double alpha);

}  // namespace crw
