#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "specrange/potential.hpp"

namespace specrange {

struct PropagateOptions {
  /// Rescale the running pair whenever |u| exceeds rescale_at, tracking the
  /// factor in log_scale. Without it, |u| > 1e300 is an error.
  bool rescale = false;
  double rescale_at = 1e150;
};

/// Solution of u(n-1) + d(n) u(n) + u(n+1) = lambda u(n) on [lo, hi].
/// The true value at n is values[n - lo] * exp(log_scale[n - lo]).
struct SolutionTrace {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  std::vector<cplx> values;
  std::vector<double> log_scale;
  cplx lambda;
  std::int64_t anchor = 0;
  std::pair<cplx, cplx> seed;  // (u(anchor), u(anchor + 1))

  cplx at(std::int64_t n) const { return values.at(static_cast<std::size_t>(n - lo)); }
  double log_scale_at(std::int64_t n) const { return log_scale.at(static_cast<std::size_t>(n - lo)); }
};

/// Forward u(n+1) = (lambda - d(n)) u(n) - u(n-1) from the seed at
/// (anchor, anchor+1), and the mirrored recursion backward.
inline SolutionTrace propagate(const PotentialSpec& potential, cplx lambda, std::pair<cplx, cplx> seed,
                               std::int64_t anchor, std::int64_t lo, std::int64_t hi,
                               const PropagateOptions& opts = {}) {
  if (!(lo <= anchor && anchor + 1 <= hi))
    detail::fail(ErrorKind::invalid_input, "one_dim", "propagate", "range must contain anchor and anchor+1");
  check_dimension(potential, 1);
  SolutionTrace t;
  t.lo = lo, t.hi = hi, t.lambda = lambda, t.anchor = anchor, t.seed = seed;
  const auto len = static_cast<std::size_t>(hi - lo + 1);
  t.values.assign(len, cplx{});
  t.log_scale.assign(len, 0.0);
  auto idx = [&](std::int64_t n) { return static_cast<std::size_t>(n - lo); };
  t.values[idx(anchor)] = seed.first;
  t.values[idx(anchor + 1)] = seed.second;

  auto step = [&](std::int64_t from, std::int64_t to, std::int64_t dir) {
    // u(n + dir) = (lambda - d(n)) u(n) - u(n - dir)
    cplx prev = t.values[idx(from - dir)], cur = t.values[idx(from)];
    double scale = 0.0;
    for (std::int64_t n = from; n != to; n += dir) {
      const cplx next = (lambda - potential(n)) * cur - prev;
      const double mag = std::abs(next);
      if (!std::isfinite(mag) || mag > 1e300) {
        std::ostringstream msg;
        msg << "overflow at site " << n + dir << " (|u| > 1e300): solution grows, not square summable";
        detail::fail(ErrorKind::numerical, "one_dim", "propagate", msg.str());
      }
      prev = cur;
      cur = next;
      if (opts.rescale && mag > opts.rescale_at) {
        prev /= mag;
        cur /= mag;
        scale += std::log(mag);
      }
      t.values[idx(n + dir)] = cur;
      t.log_scale[idx(n + dir)] = scale;
    }
  };
  if (anchor + 1 < hi) step(anchor + 1, hi, +1);
  if (anchor > lo) step(anchor, lo, -1);
  return t;
}

/// max over interior n of |u(n-1) + d(n) u(n) + u(n+1) - lambda u(n)| / max|u|,
/// for traces without rescaling.
inline double recurrence_residual(const SolutionTrace& t, const PotentialSpec& potential) {
  double worst = 0.0, peak = 0.0;
  for (auto v : t.values) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return 0.0;
  for (std::int64_t n = t.lo + 1; n < t.hi; ++n)
    worst = std::max(worst, std::abs(t.at(n - 1) + potential(n) * t.at(n) + t.at(n + 1) - t.lambda * t.at(n)));
  return worst / peak;
}

struct ContinuationCheck {
  bool ok = true;
  std::optional<std::int64_t> forced_zero_at;  // m with u(m) = u(m+1) = 0
};

/// Two consecutive zeros force a solution to vanish; a nonzero trace that
/// has them is inconsistent.
inline ContinuationCheck unique_continuation_check(const SolutionTrace& t) {
  double peak = 0.0;
  for (auto v : t.values) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return {};
  const double cut = 1e-13 * peak;
  for (std::int64_t m = t.lo; m < t.hi; ++m)
    if (std::abs(t.at(m)) < cut && std::abs(t.at(m + 1)) < cut) return {false, m};
  return {};
}

/// u(n+1) v(n) - u(n) v(n+1) for two raw traces at the same lambda.
inline cplx wronskian(const SolutionTrace& u, const SolutionTrace& v, std::int64_t n) {
  return u.at(n + 1) * v.at(n) - u.at(n) * v.at(n + 1);
}

/// The root of r^2 - lambda r + 1 = 0 with |r| < 1, if there is one.
inline std::optional<cplx> decaying_ratio(cplx lambda) {
  const cplx disc = std::sqrt(lambda * lambda - 4.0);
  cplx r1 = 0.5 * (lambda - disc), r2 = 0.5 * (lambda + disc);
  const cplx r = std::abs(r1) <= std::abs(r2) ? r1 : r2;
  if (!(std::abs(r) < 1.0 - 1e-14)) return std::nullopt;
  return r;
}

struct ShootingResult {
  bool compatible = false;
  double mismatch = 0.0;
};

/// Matches the solutions that decay toward +infinity and -infinity at the
/// sites (0, 1). Outside [-window, window] the potential is taken to be zero,
/// so the free decaying ratio seeds both ends.
inline ShootingResult shooting_l2_test(const PotentialSpec& potential, cplx lambda, std::int64_t window,
                                       double match_tol = 1e-6) {
  if (window < 2) detail::fail(ErrorKind::invalid_input, "one_dim", "shooting_l2_test", "window must be >= 2");
  const auto r = decaying_ratio(lambda);
  if (!r)
    detail::fail(ErrorKind::numerical, "one_dim", "shooting_l2_test",
                 "band regime - shooting inapplicable (lambda lies in [-2, 2])");
  const PropagateOptions opts{true};
  // Right: u(window) = 1, u(window+1) = r, run down to 0.
  const auto right = propagate(potential, lambda, {1.0, *r}, window, 0, window + 1, opts);
  // Left: u(-window-1) = r, u(-window) = 1, run up to 1.
  const auto left = propagate(potential, lambda, {*r, 1.0}, -window - 1, -window - 1, 1, opts);

  auto pair_at = [](const SolutionTrace& t) {
    const double l0 = t.log_scale_at(0), l1 = t.log_scale_at(1), m = std::max(l0, l1);
    return std::pair{t.at(0) * std::exp(l0 - m), t.at(1) * std::exp(l1 - m)};
  };
  auto [p0, p1] = pair_at(right);
  auto [m0, m1] = pair_at(left);
  const double norm = std::hypot(std::abs(p0), std::abs(p1)) * std::hypot(std::abs(m0), std::abs(m1));
  const double w = norm == 0.0 ? 0.0 : std::abs(p0 * m1 - p1 * m0) / norm;
  return {w <= match_tol, w};
}

}  // namespace specrange
