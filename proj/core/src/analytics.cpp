#include "crw/analytics.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "crw/errors.hpp"

namespace crw {
namespace {

void require(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}

}  // namespace

double correlation_e(const Schedule& schedule, std::int64_t i, std::int64_t j) {
  require(1 <= i && i <= j, "correlation_e: requires 1 <= i <= j");
  long double product = 1.0L;
  for (std::int64_t k = i + 1; k <= j; ++k) product *= 1.0L - schedule.p_at(k);
  return static_cast<double>(product);
}

double sgeom_moment(double p, int m) {
  if (m != 2 && m != 4) {
    throw UnsupportedMoment("sgeom_moment: only m = 2 and m = 4 are supported, got " +
                            std::to_string(m));
  }
  require(p > 0.0 && p <= 1.0, "sgeom_moment: p must lie in (0, 1]");
  if (m == 2) return (2.0 - p) / (p * p);
  return (2.0 - p) * (p * p + 12.0 * (1.0 - p)) / (p * p * p * p);
}

double fourth_moment_L(double p, std::int64_t n, MomentMode mode) {
  require(p > 0.0 && p <= 1.0, "fourth_moment_L: p must lie in (0, 1]");
  require(n >= 1, "fourth_moment_L: n must be >= 1");
  const long double nn = static_cast<long double>(n);

  if (mode == MomentMode::Asymptotic) {
    const long double pp = p;
    return static_cast<double>(
        3.0L * nn * nn * (2 - pp) * (2 - pp) / (pp * pp) -
        2.0L * nn * (2 - pp) * (pp * pp + 12 * (1 - pp)) / (pp * pp * pp) +
        8.0L * (1 - pp) * (3 - 2 * pp) * (3 - pp) / (pp * pp * pp * pp));
  }

  const long double q = 1.0L - static_cast<long double>(p);
  // Pair sum: sum_{i<j} q^{j-i} = sum_{g=1}^{n-1} (n - g) q^g.
  long double pairs = 0.0L;
  long double qg = 1.0L;
  for (std::int64_t g = 1; g < n; ++g) {
    qg *= q;
    pairs += static_cast<long double>(n - g) * qg;
  }
  // Quadruple sum over i<j<k<l of q^{j-i} q^{l-k}: with s = (j-i) + (l-k)
  // there are (s - 1) splits and C(n - s, 2) placements of the rest.
  long double quads = 0.0L;
  long double qs = q;
  for (std::int64_t s = 2; s <= n; ++s) {
    qs *= q;
    const long double m = static_cast<long double>(n - s);
    if (m >= 2) quads += static_cast<long double>(s - 1) * qs * m * (m - 1) / 2.0L;
  }
  const long double moment = nn + 3.0L * nn * (nn - 1) + 8.0L * pairs + 24.0L * quads +
                             12.0L * (nn - 2) * pairs;
  return static_cast<double>(moment);
}

double fourth_moment_remainder(double p, std::int64_t n) {
  require(p > 0.0 && p <= 1.0, "fourth_moment_remainder: p must lie in (0, 1]");
  require(n >= 1, "fourth_moment_remainder: n must be >= 1");
  const long double pp = p;
  const long double q = 1.0L - pp;
  const long double qn = std::pow(q, static_cast<long double>(n));
  const long double nn = static_cast<long double>(n);
  return static_cast<double>(-qn * (12.0L * nn * q * (2 - pp) / (pp * pp * pp) +
                                    8.0L * q * (3 - 2 * pp) * (3 - pp) / (pp * pp * pp * pp)));
}

double ld_bound(double p, double a, int d) {
  require(p >= 0.0 && p <= 1.0, "ld_bound: p must lie in [0, 1]");
  require(d >= 1, "ld_bound: d must be >= 1");
  double bound = 0.0;
  if (d == 1) {
    require(a >= 1.0, "ld_bound: d = 1 requires a >= 1");
    bound = 2.0 * std::exp(-p * p * a / 5.0);
  } else {
    const double root_d = std::sqrt(static_cast<double>(d));
    require(a >= root_d, "ld_bound: d >= 2 requires a >= sqrt(d)");
    bound = d * std::exp(-p * p * (a / root_d) / 5.0);
  }
  return std::min(bound, 1.0);
}

LyapunovConfig::LyapunovConfig(double p_, double a_, double tail_)
    : p(p_), a(a_), truncation_tail(tail_) {
  require(p > 0.0 && p <= 1.0, "LyapunovConfig: p must lie in (0, 1]");
  require(a >= 1.0, "LyapunovConfig: a must be >= 1");
  require(truncation_tail > 0.0 && truncation_tail <= 1e-6,
          "LyapunovConfig: truncation_tail must lie in (0, 1e-6]");
}

double LyapunovConfig::admissibility_threshold(double p) {
  return 1.5 + 18.0 * (1.0 - p) / (p * p);
}

DriftValue lyapunov_drift(const LyapunovConfig& config, std::array<std::int64_t, 2> position) {
  using real = long double;
  const real a = config.a;
  const real x = static_cast<real>(position[0]);
  const real y = static_cast<real>(position[1]);
  const real r2 = x * x + y * y;
  require(r2 > a + 1, "lyapunov_drift: position must lie outside the disc |z| <= sqrt(a + 1)");

  const real p = config.p;
  const real q = 1 - p;
  const real denom = r2 - a;
  const real f_here = std::log(denom);
  auto f = [&](real norm2) { return norm2 >= a + 1 ? std::log(norm2 - a) : real{0}; };

  // Both signs along one axis, combined so the leading terms cancel exactly:
  // (1 + u+)(1 + u-) - 1 = (2k^2 (o^2 - c^2 - a) + k^4) / D^2.
  auto pair = [&](real c, real o, real k) -> real {
    const real plus = (c + k) * (c + k) + o * o;
    const real minus = (c - k) * (c - k) + o * o;
    if (plus >= a + 1 && minus >= a + 1) {
      const real k2 = k * k;
      return std::log1p((2 * k2 * (o * o - c * c - a) + k2 * k2) / (denom * denom));
    }
    return f(plus) + f(minus) - 2 * f_here;
  };

  std::int64_t max_jump = 1;
  real tail = q;
  while (tail > config.truncation_tail) {
    tail *= q;
    ++max_jump;
  }

  real sum = 0;
  real compensation = 0;
  real weight = p;  // P(|xi| = k) = p q^{k-1}
  for (std::int64_t k = 1; k <= max_jump; ++k) {
    const real kk = static_cast<real>(k);
    const real term = weight * (pair(x, y, kk) + pair(y, x, kk)) / 4;
    const real t = sum + term;
    compensation += std::fabs(sum) >= std::fabs(term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
    weight *= q;
  }
  sum += compensation;

  // |f(z + J) - f(z)| <= f(z) + ln(2|z|^2 + 2k^2) and for k > K,
  // ln(2|z|^2 + 2k^2) <= ln(2|z|^2 + 2K^2) + 2 (k - K) / K, with E[k - K | k > K] = 1/p.
  const real kk = static_cast<real>(max_jump);
  const real remainder = tail * (f_here + std::log(2 * r2 + 2 * kk * kk) + 2 / (p * kk));
  return {static_cast<double>(sum), static_cast<double>(remainder)};
}

PassOnce gambler_pass_once(double p, std::optional<std::int64_t> gap) {
  require(p > 0.5 && p <= 1.0, "gambler_pass_once: p must lie in (1/2, 1]");
  require(!gap || *gap >= 1, "gambler_pass_once: gap must be >= 1");
  const double q = 1.0 - p;
  const double single = p - q;
  if (!gap) return {single, single * single};
  const double r = q / p;
  return {single, single * single / (1.0 - std::pow(r, static_cast<double>(*gap)))};
}

std::int64_t count_arith_progression(double s, double s0, std::int64_t M) {
  require(s > 0.0 && s <= 0.5, "count_arith_progression: s must lie in (0, 1/2]");
  require(M >= 2, "count_arith_progression: M must be >= 2");
  require(static_cast<double>(M) * s >= 1.0 - 1e-12, "count_arith_progression: needs M s >= 1");
  std::int64_t count = 0;
  for (std::int64_t k = 1; k <= M; ++k) {
    const long double v = static_cast<long double>(k) * s + s0;
    const long double frac = v - std::floor(v);
    if (frac < 0.5L) ++count;
  }
  return count;
}

std::int64_t count_arith_progression(std::int64_t s_num, std::int64_t s0_num, std::int64_t den,
                                     std::int64_t M) {
  require(den > 0, "count_arith_progression: denominator must be positive");
  require(s_num > 0 && 2 * s_num <= den, "count_arith_progression: s must lie in (0, 1/2]");
  require(M >= 2, "count_arith_progression: M must be >= 2");
  require(M * s_num >= den, "count_arith_progression: needs M s >= 1");
  std::int64_t count = 0;
  for (std::int64_t k = 1; k <= M; ++k) {
    std::int64_t r = (k * s_num + s0_num) % den;
    if (r < 0) r += den;
    if (2 * r < den) ++count;
  }
  return count;
}

CosineSum cosine_sum_bound(std::span<const double> q_dist, std::int64_t M, double a, double s) {
  require(M >= 1, "cosine_sum_bound: M must be >= 1");
  require(a > 0.0, "cosine_sum_bound: a must be positive");
  require(s >= 0.0 && s <= std::numbers::pi / 2, "cosine_sum_bound: s must lie in [0, pi/2]");
  require(static_cast<std::int64_t>(q_dist.size()) >= M,
          "cosine_sum_bound: q_j >= a/M violated (distribution shorter than M)");
  long double total = 0.0L;
  for (double qj : q_dist) {
    require(qj >= 0.0, "cosine_sum_bound: negative probability");
    total += qj;
  }
  require(std::fabs(static_cast<double>(total) - 1.0) <= 1e-12,
          "cosine_sum_bound: distribution must sum to 1");
  const double floor_mass = a / static_cast<double>(M);
  for (std::int64_t j = 1; j <= M; ++j) {
    require(q_dist[static_cast<std::size_t>(j - 1)] >= floor_mass,
            "cosine_sum_bound: q_j >= a/M violated");
  }

  long double h = 0.0L;
  for (std::size_t j = 0; j < q_dist.size(); ++j) {
    h += q_dist[j] * std::fabs(std::cos(static_cast<double>(j + 1) * s));
  }
  long double deficit = 0.0L;
  for (std::int64_t j = 1; j <= M; ++j) {
    deficit += 1.0L - std::fabs(std::cos(static_cast<double>(j) * s));
  }
  return {static_cast<double>(h), static_cast<double>(1.0L - floor_mass * deficit)};
}

double cosine_quadratic_margin(double alpha) {
  const double half = std::sin(alpha / 2.0);
  return 2.0 * half * half - alpha * alpha / 4.0;  // 1 - cos(alpha) without cancellation
}

}  // namespace crw
