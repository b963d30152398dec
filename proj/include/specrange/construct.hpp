#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "specrange/classifier.hpp"
#include "specrange/operator.hpp"
#include "specrange/potential.hpp"

namespace specrange {

/// Square-summable sequence on Z, stored on [window_lo, window_hi] and
/// continued geometrically: u(n) = u(window_lo) r_minus^{window_lo - n} to the
/// left and u(n) = u(window_hi) r_plus^{n - window_hi} to the right.
struct DesignedEigenfunction {
  std::int64_t window_lo = 0;
  std::int64_t window_hi = 0;
  std::vector<cplx> values;
  std::vector<std::int64_t> zeros;
  cplx ratio_minus;
  cplx ratio_plus;

  cplx operator()(std::int64_t n) const {
    if (n < window_lo) return values.front() * std::pow(ratio_minus, static_cast<double>(window_lo - n));
    if (n > window_hi) return values.back() * std::pow(ratio_plus, static_cast<double>(n - window_hi));
    return values[static_cast<std::size_t>(n - window_lo)];
  }

  /// Tail coefficients c_pm in u(n) = c_- r_-^{-n} (n <= lo), u(n) = c_+ r_+^{n} (n >= hi).
  cplx c_minus() const { return values.front() * std::pow(ratio_minus, static_cast<double>(window_lo)); }
  cplx c_plus() const { return values.back() / std::pow(ratio_plus, static_cast<double>(window_hi)); }
};

/// Throws when u breaks one of the structural invariants.
inline void check_designed(const DesignedEigenfunction& u) {
  auto bad = [](const std::string& m) { detail::fail(ErrorKind::invalid_input, "construct", "DesignedEigenfunction", m); };
  if (u.window_hi < u.window_lo || u.values.size() != static_cast<std::size_t>(u.window_hi - u.window_lo + 1))
    bad("window and stored values disagree");
  for (auto r : {u.ratio_minus, u.ratio_plus})
    if (!(std::abs(r) > 0.0 && std::abs(r) < 1.0)) bad("tail ratios must satisfy 0 < |r| < 1");
  if (u.values.front() == cplx{} || u.values.back() == cplx{}) bad("window must end on nonzero values so the tails are nontrivial");
  double peak = 0.0;
  for (auto v : u.values) peak = std::max(peak, std::abs(v));
  for (std::int64_t n = u.window_lo; n < u.window_hi; ++n)
    if (u(n) == cplx{} && u(n + 1) == cplx{})
      bad("consecutive zeros at " + std::to_string(n) + ", " + std::to_string(n + 1) + " force u = 0");
  for (auto z : u.zeros) {
    if (z <= u.window_lo || z >= u.window_hi) bad("zero site " + std::to_string(z) + " not strictly inside the window");
    if (u(z) != cplx{}) bad("declared zero " + std::to_string(z) + " has nonzero value");
    if (std::abs(u(z - 1) + u(z + 1)) > 1e-14 * peak)
      bad("zero at " + std::to_string(z) + " needs u(z-1) = -u(z+1)");
  }
}

/// The tail ratio r with r + 1/r = a and |r| < 1.
inline double tail_ratio(double a) {
  if (!(std::abs(a) > 2.0))
    detail::fail(ErrorKind::invalid_input, "construct", "design_eigenfunction",
                 "no decaying tail ratio exists for |a| <= 2");
  return 0.5 * (a - std::copysign(std::sqrt(a * a - 4.0), a));
}

/// Eigenfunction with prescribed zeros for a target eigenvalue |a| > 2:
/// unit plateau across [z_first - 1, z_last + 1] with a sign flip at every
/// zero (so u(z-1) = -u(z+1)), geometric tails with ratio r outside.
inline DesignedEigenfunction design_eigenfunction(double a, std::vector<std::int64_t> zero_sites, std::int64_t window_lo,
                                                  std::int64_t window_hi) {
  const double r = tail_ratio(a);
  std::sort(zero_sites.begin(), zero_sites.end());
  for (std::size_t i = 1; i < zero_sites.size(); ++i) {
    if (zero_sites[i] == zero_sites[i - 1])
      detail::fail(ErrorKind::invalid_input, "construct", "design_eigenfunction", "duplicate zero site");
    if (zero_sites[i] == zero_sites[i - 1] + 1)
      detail::fail(ErrorKind::invalid_input, "construct", "design_eigenfunction",
                   "adjacent zero sites violate unique continuation");
  }
  const std::int64_t core_lo = zero_sites.empty() ? 0 : zero_sites.front() - 1;
  const std::int64_t core_hi = zero_sites.empty() ? 0 : zero_sites.back() + 1;
  if (window_lo > core_lo || window_hi < core_hi)
    detail::fail(ErrorKind::invalid_input, "construct", "design_eigenfunction",
                 "window must contain [" + std::to_string(core_lo) + ", " + std::to_string(core_hi) + "]");

  DesignedEigenfunction u;
  u.window_lo = window_lo;
  u.window_hi = window_hi;
  u.zeros = zero_sites;
  u.ratio_minus = r;
  u.ratio_plus = r;
  u.values.reserve(static_cast<std::size_t>(window_hi - window_lo + 1));
  double sign = 1.0;
  std::size_t next_zero = 0;
  for (std::int64_t n = window_lo; n <= window_hi; ++n) {
    cplx v;
    if (n < core_lo) {
      v = std::pow(r, static_cast<double>(core_lo - n));
    } else if (n > core_hi) {
      v = sign * std::pow(r, static_cast<double>(n - core_hi));
    } else if (next_zero < zero_sites.size() && n == zero_sites[next_zero]) {
      v = 0.0;
      sign = -sign;
      ++next_zero;
    } else {
      v = sign;
    }
    u.values.push_back(v);
  }
  check_designed(u);
  return u;
}

/// Re d(n) = a - (u(n-1) + u(n+1)) / u(n) on the window, 0 at zeros and in
/// the tails, so that (J0 + Re D) u = a u.
inline PotentialSpec real_potential_from_eigenfunction(const DesignedEigenfunction& u, double a, double ratio_cap = 1e3) {
  check_designed(u);
  for (auto r : {u.ratio_minus, u.ratio_plus})
    if (std::abs(r + 1.0 / r - a) > 1e-12 * (1.0 + std::abs(a)))
      detail::fail(ErrorKind::invalid_input, "construct", "real_potential_from_eigenfunction",
                   "tail ratio does not solve r + 1/r = a; the tails would need a nonzero potential");
  const double snap = 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(a));
  TablePotential table;
  std::int64_t radius = 0;
  for (std::int64_t n = u.window_lo; n <= u.window_hi; ++n) {
    const cplx un = u(n);
    if (un == cplx{}) continue;
    const cplx ratio = (u(n - 1) + u(n + 1)) / un;
    if (std::abs(ratio) > ratio_cap) {
      std::ostringstream msg;
      msg << "|(u(n-1)+u(n+1))/u(n)| = " << std::abs(ratio) << " at n=" << n << " exceeds the cap " << ratio_cap
          << "; use a smoother design";
      detail::fail(ErrorKind::invalid_input, "construct", "real_potential_from_eigenfunction", msg.str());
    }
    const double re_d = (a - ratio).real();
    if (std::abs(re_d) <= snap) continue;
    table.entries[{n}] = re_d;
    radius = std::max(radius, n < 0 ? -n : n);
  }
  PotentialSpec spec(table, VanishesOutside{radius});

  double peak = 0.0, worst = 0.0;
  for (std::int64_t n = u.window_lo; n <= u.window_hi; ++n) {
    peak = std::max(peak, std::abs(u(n)));
    worst = std::max(worst, std::abs(u(n - 1) + spec(n).real() * u(n) + u(n + 1) - a * u(n)));
  }
  if (worst > 1e-12 * peak)
    detail::fail(ErrorKind::numerical, "construct", "real_potential_from_eigenfunction",
                 "eigen-equation residual " + std::to_string(worst / peak) + " above 1e-12");
  return spec;
}

struct ImagPotential {
  PotentialSpec spec;
  /// No zeros: Im d is constant and J is a shifted selfadjoint operator.
  bool shifted_selfadjoint = false;
};

/// Im d = b on supp(u), 0 at the zeros of u.
inline ImagPotential imag_potential_from_support(const DesignedEigenfunction& u, double b) {
  if (!(b > 0.0)) detail::fail(ErrorKind::invalid_input, "construct", "imag_potential_from_support", "b must be > 0");
  check_designed(u);
  TablePotential zeros;
  for (std::int64_t n = u.window_lo; n <= u.window_hi; ++n)
    if (u(n) == cplx{}) zeros.entries[{n}] = cplx{0.0, -b};
  const PotentialSpec constant(ConstantPotential{{0.0, b}});
  if (zeros.entries.empty()) return {constant, true};
  return {sum({constant, PotentialSpec(zeros)}), false};
}

struct CounterexampleOptions {
  HullOptions hull{};
  ClassifierOptions classifier{};
  double tol_match = 1e-6;
  std::size_t max_dim = default_max_dim;
};

struct Counterexample {
  LatticeBox box;
  PotentialSpec potential;
  OperatorMatrix op;
  cplx expected;
  DesignedEigenfunction eigenfunction;
  NumericalRangeHull hull;
  std::vector<EigenClassification> classes;
  std::size_t certified_index = 0;  // into classes
};

/// Builds J = J0 + D on n sites around the origin with a boundary eigenvalue
/// near a + ib, and certifies it.
inline Counterexample build_counterexample(double a, double b, const std::vector<std::int64_t>& zero_sites,
                                           std::int64_t window_lo, std::int64_t window_hi, std::int64_t n,
                                           const CounterexampleOptions& opts = {}) {
  auto u = design_eigenfunction(a, zero_sites, window_lo, window_hi);
  auto re = real_potential_from_eigenfunction(u, a);
  auto im = imag_potential_from_support(u, b);
  const auto box = LatticeBox::centred_line(n);
  if (!box.contains(std::vector<std::int64_t>{window_lo}) || !box.contains(std::vector<std::int64_t>{window_hi}))
    detail::fail(ErrorKind::invalid_input, "construct", "build_counterexample", "box of " + std::to_string(n) + " sites does not contain the window");

  Counterexample cx{box, sum({re, im.spec}), {}, cplx{a, b}, std::move(u), {}, {}, 0};
  cx.op = assemble(box, cx.potential, opts.max_dim);
  cx.hull = compute_hull(cx.op, opts.hull);
  cx.classes = classify(cx.op, cx.hull, opts.classifier);

  auto fail_cert = [&](const std::string& what) {
    detail::fail(ErrorKind::certification, "construct", "build_counterexample", what + " (box of " + std::to_string(n) + " sites may be too small)");
  };
  std::size_t best = cx.classes.size();
  double best_err = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cx.classes.size(); ++i) {
    const double err = std::abs(cx.classes[i].pair.value - cx.expected);
    if (err < best_err) best_err = err, best = i;
  }
  if (best == cx.classes.size() || best_err > opts.tol_match) {
    std::ostringstream msg;
    msg << "no eigenvalue within " << opts.tol_match << " of " << a << "+" << b << "i (closest error " << best_err << ")";
    fail_cert(msg.str());
  }
  const auto& c = cx.classes[best];
  if (!c.is_boundary) fail_cert("eigenvalue is not on the hull boundary, distance " + std::to_string(c.boundary_distance));
  const auto hv = hildebrandt_certificate(cx.op, c, opts.classifier);
  const auto sv = split_certificate(cx.op, c, opts.classifier);
  if (hv != HildebrandtVerdict::certified_normal || sv != SplitVerdict::certified) {
    std::ostringstream msg;
    msg << "certificates failed: hildebrandt=" << to_string(hv) << " split=" << to_string(sv)
        << " normality_residual=" << c.normality_residual << " split_re=" << c.split_residual_re
        << " split_im=" << c.split_residual_im;
    fail_cert(msg.str());
  }
  for (auto v : cx.hull.polygon)
    if (v.imag() < -cx.hull.tol_hull || v.imag() > b + cx.hull.tol_hull)
      fail_cert("hull leaves the strip 0 <= Im z <= b");
  cx.certified_index = best;
  return cx;
}

}  // namespace specrange
