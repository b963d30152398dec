#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "specrange/lattice.hpp"
#include "specrange/potential.hpp"

namespace specrange {

enum class Verdict { absence_guaranteed, inconclusive };

inline const char* to_string(Verdict v) {
  return v == Verdict::absence_guaranteed ? "absence_guaranteed" : "inconclusive";
}

/// Which boundary eigenvalues a verdict speaks about.
struct Target {
  enum class Kind { all, imag_part, non_real, real_part };
  Kind kind = Kind::all;
  std::optional<double> a;  // real part (real_part only)
  std::optional<double> b;  // imaginary part (imag_part, optionally real_part)

  static Target all() { return {}; }
  static Target non_real() { return {Kind::non_real, {}, {}}; }
  static Target imag_part(double b) { return {Kind::imag_part, {}, b}; }
  static Target real_part(double a, std::optional<double> b = {}) { return {Kind::real_part, a, b}; }
};

/// Shortest decimal form that parses back to the same double.
inline std::string format_number(double x) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

inline std::string format_site(std::span<const std::int64_t> k) {
  std::string s = "(";
  for (std::size_t i = 0; i < k.size(); ++i) s += (i ? ", " : "") + std::to_string(k[i]);
  return s + ")";
}

inline std::string to_string(const Target& t) {
  switch (t.kind) {
    case Target::Kind::all: return "all";
    case Target::Kind::non_real: return "non_real";
    case Target::Kind::imag_part: return "imag_part=" + format_number(*t.b);
    case Target::Kind::real_part: {
      std::string s = "real_part=" + format_number(*t.a);
      if (t.b) s += ",imag_part=" + format_number(*t.b);
      return s;
    }
  }
  return "?";
}

struct CriterionResult {
  std::string id;
  Target target;
  Verdict verdict = Verdict::inconclusive;
  std::string witness;  // evidence when absence is guaranteed, the reason otherwise
  std::optional<std::int64_t> witness_site;

  bool absent() const { return verdict == Verdict::absence_guaranteed; }
};

struct CriteriaParams {
  std::vector<double> b_list;  // imaginary parts examined (0 and, for nu = 1, Im d(0), Im d(1) are always added)
  std::vector<double> a_list;  // real parts for real_window
  std::optional<std::int64_t> scan_radius;
};

inline std::int64_t default_scan_radius(std::size_t nu) { return nu == 1 ? 1000 : 100; }

/// Largest scan cube evaluated site by site.
inline constexpr std::size_t max_scan_sites = 5'000'000;

struct CriteriaSummary {
  bool no_boundary_eigenvalues = false;
  bool non_real_excluded = false;
  std::vector<double> excluded_imag_parts;
  std::vector<double> excluded_real_parts;  // via real_window without a fixed b
  bool hermitian = false;  // Im d == 0: every eigenvalue of a truncation sits on its (segment) hull
  std::string reason;
};

struct CriteriaReport {
  std::size_t nu = 1;
  std::int64_t scan_radius = 0;
  std::vector<double> b_values;
  std::vector<double> a_values;
  std::vector<CriterionResult> entries;  // sorted by criterion id, stable within one id
  CriteriaSummary summary;

  /// True when some absence_guaranteed entry covers `t` directly or via the summary.
  bool excludes(const Target& t) const;
};

namespace detail {

inline double part(cplx v, int comp) { return comp == 0 ? v.real() : v.imag(); }

struct StepTerm {
  std::size_t axis;
  std::int64_t threshold;
  StepSide side;
  double value;
};

struct DecayTerm {
  double amplitude;  // signed component of the amplitude
  bool geometric;
  double rate;  // exponent, or the ratio itself
  Parity parity;

  double envelope(double t) const {
    return std::abs(amplitude) * (geometric ? std::pow(std::abs(rate), t) : 1.0 / (1.0 + std::pow(t, rate)));
  }
  /// Sign of the term on sites of the given parity in one dimension (|n| and n share parity).
  double sign_on(int parity_bit) const {
    double s = amplitude > 0 ? 1.0 : -1.0;
    if (geometric && rate < 0 && parity_bit == 1) s = -s;
    return s;
  }
  bool active_on(int parity_bit) const {
    return parity == Parity::all || (parity == Parity::even) == (parity_bit == 0);
  }
};

/// Re or Im of d split into persistent pieces, decaying pieces and pieces of
/// finite support.
struct ComponentModel {
  double constant = 0.0;
  double alt_even = 0.0, alt_odd = 0.0;
  std::vector<StepTerm> steps;
  std::vector<DecayTerm> decays;
  std::int64_t finite_radius = -1;  // linf radius of every finite-support piece, -1 if none

  double envelope(double t) const {
    double e = 0.0;
    for (const auto& d : decays) e += d.envelope(t);
    return e;
  }
  bool has_persistent() const {
    return constant != 0.0 || alt_even != 0.0 || alt_odd != 0.0 || !steps.empty();
  }
};

inline ComponentModel component_model(const PotentialSpec& spec, int comp) {
  ComponentModel m;
  for (const PotentialSpec* t : flatten_terms(spec)) {
    std::visit(
        [&](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, TablePotential>) {
            for (const auto& [k, v] : p.entries)
              if (part(v, comp) != 0.0) m.finite_radius = std::max(m.finite_radius, linf_norm(k));
          } else if constexpr (std::is_same_v<T, ConstantPotential>) {
            m.constant += part(p.value, comp);
          } else if constexpr (std::is_same_v<T, DecayPowerPotential>) {
            if (part(p.amplitude, comp) != 0.0) m.decays.push_back({part(p.amplitude, comp), false, p.exponent, p.parity});
          } else if constexpr (std::is_same_v<T, DecayGeometricPotential>) {
            const double amp = part(p.amplitude, comp);
            if (amp == 0.0) return;
            if (p.ratio == 0.0) {
              m.finite_radius = std::max<std::int64_t>(m.finite_radius, 0);
            } else {
              m.decays.push_back({amp, true, p.ratio, p.parity});
            }
          } else if constexpr (std::is_same_v<T, Alternating1DPotential>) {
            if (comp == 1) m.alt_even += p.b1, m.alt_odd += p.b2;
          } else if constexpr (std::is_same_v<T, SeededRandomPotential>) {
            const bool zero = comp == 0 ? (p.re_lo == 0.0 && p.re_hi == 0.0) : (p.im_lo == 0.0 && p.im_hi == 0.0);
            if (!zero) m.finite_radius = std::max(m.finite_radius, p.box.linf_radius());
          } else if constexpr (std::is_same_v<T, StepPotential>) {
            if (part(p.value, comp) != 0.0) m.steps.push_back({p.axis, p.threshold, p.side, part(p.value, comp)});
          }
        },
        t->kind());
  }
  return m;
}

/// State of a step on a region: 1 on, 0 off, -1 either.
inline int step_state(const StepTerm& s, std::optional<std::size_t> axis, int sign, std::optional<std::int64_t> beyond) {
  if (!axis || *axis != s.axis) return -1;
  const bool toward_on = (s.side == StepSide::above) == (sign > 0);
  if (!beyond) return toward_on ? 1 : 0;
  // region: sign * k_axis > beyond
  if (sign > 0) {
    if (s.side == StepSide::below) return s.threshold <= *beyond ? 0 : -1;
    return s.threshold <= *beyond + 1 ? 1 : -1;
  }
  if (s.side == StepSide::below) return s.threshold >= -*beyond - 1 ? 1 : -1;
  return s.threshold >= -*beyond ? 0 : -1;
}

struct FarClass {
  int parity_bit;
  double value;  // persistent part of the component
};

/// Every combination of parity and step states that can occur in the region
/// (over-approximated when steps share an axis). Empty if there are too many steps.
inline std::optional<std::vector<FarClass>> far_classes(const ComponentModel& m, std::optional<std::size_t> axis, int sign,
                                                        std::optional<std::int64_t> beyond) {
  if (m.steps.size() > 16) return std::nullopt;
  std::vector<int> states;
  for (const auto& s : m.steps) states.push_back(step_state(s, axis, sign, beyond));
  std::vector<FarClass> out;
  for (int pbit = 0; pbit < 2; ++pbit) {
    for (std::uint32_t mask = 0; mask < (1u << m.steps.size()); ++mask) {
      double v = m.constant + (pbit == 0 ? m.alt_even : m.alt_odd);
      bool feasible = true;
      for (std::size_t i = 0; i < m.steps.size(); ++i) {
        const int on = (mask >> i) & 1u;
        if (states[i] != -1 && states[i] != on) feasible = false;
        if (on) v += m.steps[i].value;
      }
      if (feasible) out.push_back({pbit, v});
    }
  }
  return out;
}

inline double eq_tol(double b) { return 1e-12 * (1.0 + std::abs(b)); }

/// Values of one component on the scan cube [-R, R]^nu.
struct Scan {
  LatticeBox cube;
  std::vector<double> values;
};

inline std::optional<Scan> scan_component(const PotentialSpec& spec, std::size_t nu, std::int64_t radius, int comp) {
  const double sites = std::pow(2.0 * static_cast<double>(radius) + 1.0, static_cast<double>(nu));
  if (sites > static_cast<double>(max_scan_sites)) return std::nullopt;
  Scan s{LatticeBox(std::vector<Interval>(nu, Interval{-radius, radius})), {}};
  s.values.reserve(s.cube.site_count());
  for_each_site(s.cube, [&](std::span<const std::int64_t> k) { s.values.push_back(part(spec(k), comp)); });
  return s;
}

/// True when no site of the region (bounded away by `beyond` in l1 norm
/// from the origin, finite pieces already gone) can have component value b.
inline bool far_excludes(const ComponentModel& m, const std::vector<FarClass>& classes, double b, std::int64_t beyond,
                         double* gap_out = nullptr) {
  if (m.finite_radius > beyond) return false;
  const double env = m.envelope(static_cast<double>(beyond + 1));
  double gap = std::numeric_limits<double>::infinity();
  for (const auto& c : classes) gap = std::min(gap, std::abs(c.value - b));
  if (gap_out) *gap_out = gap;
  return gap > env + eq_tol(b);
}

/// The decaying part of the component on parity class p is nonzero and of
/// one sign at every site of that parity (1D).
inline bool sign_definite_decay(const ComponentModel& m, int pbit) {
  int sign = 0;
  for (const auto& d : m.decays) {
    if (!d.active_on(pbit)) continue;
    const int s = d.sign_on(pbit) > 0 ? 1 : -1;
    if (sign != 0 && s != sign) return false;
    sign = s;
  }
  return sign != 0;
}

inline bool all_classes_zero(const std::optional<std::vector<FarClass>>& classes) {
  if (!classes) return false;
  for (const auto& c : *classes)
    if (c.value != 0.0) return false;
  return true;
}

inline std::string axis_name(std::size_t j) { return "k" + std::to_string(j); }

}  // namespace detail

/// Shared state for evaluating several criteria on one potential.
class CriteriaContext {
 public:
  CriteriaContext(PotentialSpec potential, std::size_t nu, std::optional<std::int64_t> scan_radius = {})
      : potential_(std::move(potential)), nu_(nu) {
    if (nu == 0) detail::fail(ErrorKind::invalid_input, "criteria", "evaluate", "nu must be >= 1");
    check_dimension(potential_, nu);
    radius_ = scan_radius.value_or(default_scan_radius(nu));
    if (radius_ < 1) detail::fail(ErrorKind::invalid_input, "criteria", "evaluate", "scan_radius must be >= 1");
    re_ = detail::component_model(potential_, 0);
    im_ = detail::component_model(potential_, 1);
  }

  const PotentialSpec& potential() const { return potential_; }
  std::size_t nu() const { return nu_; }
  std::int64_t scan_radius() const { return radius_; }
  const detail::ComponentModel& re_model() const { return re_; }
  const detail::ComponentModel& im_model() const { return im_; }

  const std::optional<detail::Scan>& im_scan() const {
    if (!im_scan_done_) im_scan_ = detail::scan_component(potential_, nu_, radius_, 1), im_scan_done_ = true;
    return im_scan_;
  }

  double im_at(std::int64_t n) const { return potential_(n).imag(); }

 private:
  PotentialSpec potential_;
  std::size_t nu_;
  std::int64_t radius_;
  detail::ComponentModel re_, im_;
  mutable std::optional<detail::Scan> im_scan_;
  mutable bool im_scan_done_ = false;
};

namespace detail {

inline CriterionResult inconclusive(std::string id, Target t, std::string why) {
  return {std::move(id), t, Verdict::inconclusive, std::move(why), std::nullopt};
}
inline CriterionResult absent(std::string id, Target t, std::string why, std::optional<std::int64_t> site = {}) {
  return {std::move(id), t, Verdict::absence_guaranteed, std::move(why), site};
}

inline std::string scan_too_large(const CriteriaContext& c) {
  return "scan cube of radius " + std::to_string(c.scan_radius()) + " in " + std::to_string(c.nu()) +
         " dimensions exceeds " + std::to_string(max_scan_sites) + " sites";
}

}  // namespace detail

/// Im d(k) != b everywhere: scan plus a uniform gap beyond the scan cube.
inline CriterionResult check_level_set_empty(const CriteriaContext& c, double b) {
  const std::string id = "level_set_empty";
  const auto t = Target::imag_part(b);
  const auto& scan = c.im_scan();
  if (!scan) return detail::inconclusive(id, t, detail::scan_too_large(c));
  const double tol = detail::eq_tol(b);
  for (std::size_t i = 0; i < scan->values.size(); ++i)
    if (std::abs(scan->values[i] - b) <= tol) {
      std::ostringstream os;
      os << "Im d = b at site " << format_site(scan->cube.site(i));
      return detail::inconclusive(id, t, os.str());
    }
  const auto classes = detail::far_classes(c.im_model(), std::nullopt, 0, c.scan_radius());
  double gap = 0.0;
  if (!classes || !detail::far_excludes(c.im_model(), *classes, b, c.scan_radius(), &gap))
    return detail::inconclusive(id, t, "no uniform gap between Im d and b beyond radius " + std::to_string(c.scan_radius()));
  std::ostringstream os;
  os << "no site with Im d = b for |k|_inf <= " << c.scan_radius() << "; beyond it |Im d - b| >= " << format_number(gap)
     << " minus envelope " << format_number(c.im_model().envelope(static_cast<double>(c.scan_radius() + 1)));
  return detail::absent(id, t, os.str());
}

enum class HalfspaceSide { sup_finite, inf_finite };

/// sup (or inf) of k_axis over the level set {Im d = b} is finite.
inline CriterionResult check_halfspace_support(const CriteriaContext& c, double b, std::size_t axis, HalfspaceSide side) {
  const std::string id = "halfspace_support";
  const auto t = Target::imag_part(b);
  if (axis >= c.nu()) detail::fail(ErrorKind::invalid_input, "criteria", "check_halfspace_support", "axis out of range");
  const int sign = side == HalfspaceSide::sup_finite ? 1 : -1;
  const std::string what = (sign > 0 ? "sup " : "inf ") + detail::axis_name(axis);
  const auto classes = detail::far_classes(c.im_model(), axis, sign, c.scan_radius());
  if (!classes || !detail::far_excludes(c.im_model(), *classes, b, c.scan_radius()))
    return detail::inconclusive(id, t, what + " of the level set not bounded: Im d may equal b for " +
                                           (sign > 0 ? "k_j > " : "k_j < -") + std::to_string(c.scan_radius()));
  const auto& scan = c.im_scan();
  if (!scan) return detail::inconclusive(id, t, detail::scan_too_large(c));
  const double tol = detail::eq_tol(b);
  std::optional<std::int64_t> extreme;
  for (std::size_t i = 0; i < scan->values.size(); ++i) {
    if (std::abs(scan->values[i] - b) > tol) continue;
    const auto kj = scan->cube.site(i)[axis];
    if (!extreme || (sign > 0 ? kj > *extreme : kj < *extreme)) extreme = kj;
  }
  const auto everywhere = detail::far_classes(c.im_model(), std::nullopt, 0, c.scan_radius());
  const bool far_empty = everywhere && detail::far_excludes(c.im_model(), *everywhere, b, c.scan_radius());
  std::ostringstream os;
  if (!extreme && far_empty) {
    os << "level set empty, " << what << " = " << (sign > 0 ? "-inf" : "+inf");
    return detail::absent(id, t, os.str());
  }
  os << what << " of {Im d = b} is " << (sign > 0 ? "<= " : ">= ") << (sign > 0 ? "" : "-") << c.scan_radius();
  if (extreme) os << "; extreme scanned hit " << detail::axis_name(axis) << " = " << *extreme;
  return detail::absent(id, t, os.str(), extreme);
}

/// Slice suprema of |Im d| tend to 0 as k_axis -> +inf (direction +1) or -inf (-1).
inline CriterionResult check_direction_decay(const CriteriaContext& c, std::size_t axis, int direction) {
  const std::string id = "direction_decay";
  const auto t = Target::non_real();
  if (axis >= c.nu() || (direction != 1 && direction != -1))
    detail::fail(ErrorKind::invalid_input, "criteria", "check_direction_decay", "bad axis or direction");
  const std::string dir = detail::axis_name(axis) + (direction > 0 ? " -> +inf" : " -> -inf");
  if (!detail::all_classes_zero(detail::far_classes(c.im_model(), axis, direction, std::nullopt)))
    return detail::inconclusive(id, t, "Im d has a persistent nonzero part as " + dir);
  std::string why = "slice sup |Im d| -> 0 as " + dir;
  if (c.im_model().finite_radius >= 0) why += "; finite pieces vanish beyond |k|_inf = " + std::to_string(c.im_model().finite_radius);
  if (!c.im_model().decays.empty()) why += "; decaying pieces bounded by their envelope";
  return detail::absent(id, t, why);
}

/// Im d(k) -> 0 as |k|_1 -> inf.
inline CriterionResult check_full_decay(const CriteriaContext& c) {
  const std::string id = "full_decay";
  const auto t = Target::non_real();
  if (!detail::all_classes_zero(detail::far_classes(c.im_model(), std::nullopt, 0, std::nullopt)))
    return detail::inconclusive(id, t, "Im d has a persistent nonzero part");
  return detail::absent(id, t, "Im d -> 0 as |k|_1 -> inf (finite pieces and decaying envelopes only)");
}

/// nu = 1: some m has Im d(m) != b and Im d(m+1) != b.
inline CriterionResult check_pair_condition(const CriteriaContext& c, double b) {
  const std::string id = "pair_condition";
  const auto t = Target::imag_part(b);
  if (c.nu() != 1) return detail::inconclusive(id, t, "defined for nu = 1 only");
  const double tol = detail::eq_tol(b);
  auto differs = [&](std::int64_t n) { return std::abs(c.im_at(n) - b) > tol; };
  for (std::int64_t r = 0; r <= c.scan_radius(); ++r) {
    for (std::int64_t m : {-r, r}) {
      if (differs(m) && differs(m + 1)) {
        std::ostringstream os;
        os << "m = " << m << ": Im d(m) = " << format_number(c.im_at(m)) << ", Im d(m+1) = " << format_number(c.im_at(m + 1));
        return detail::absent(id, t, os.str(), m);
      }
    }
  }
  return detail::inconclusive(id, t, "every adjacent pair in the scan meets b");
}

/// nu = 1: Im d is the global pattern (b1, b2, b1, b2, ...) with b1 != b2.
inline CriterionResult check_alternating(const CriteriaContext& c) {
  const std::string id = "alternating";
  const auto t = Target::all();
  if (c.nu() != 1) return detail::inconclusive(id, t, "defined for nu = 1 only");
  const auto& im = c.im_model();
  if (!im.decays.empty() || !im.steps.empty() || im.finite_radius >= 0)
    return detail::inconclusive(id, t, "Im d is not declared 2-periodic (non-periodic terms carry an imaginary part)");
  const double b1 = im.constant + im.alt_even, b2 = im.constant + im.alt_odd;
  if (b1 == b2) return detail::inconclusive(id, t, "b1 = b2, the pattern is constant");
  for (std::int64_t n = -c.scan_radius(); n <= c.scan_radius(); ++n)
    if (c.im_at(n) != ((n & 1) == 0 ? b1 : b2))
      return detail::inconclusive(id, t, "pattern broken at n = " + std::to_string(n));
  return detail::absent(id, t, "Im d = (" + format_number(b1) + ", " + format_number(b2) + ") 2-periodic with b1 != b2");
}

namespace detail {

/// 1D: {n : Im d(n) != b} is infinite. Without b, it must hold for every b.
inline std::optional<std::string> infinitely_often_differs(const CriteriaContext& c, std::optional<double> b) {
  const auto& im = c.im_model();
  for (int dir : {1, -1}) {
    const auto classes = far_classes(im, 0, dir, std::nullopt);
    if (!classes) continue;
    const char* side = dir > 0 ? "+inf" : "-inf";
    for (const auto& cl : *classes) {
      const bool definite = sign_definite_decay(im, cl.parity_bit);
      if (definite && (!b || cl.value == *b)) {
        std::ostringstream os;
        os << "Im d stays on one side of " << format_number(cl.value) << " on " << (cl.parity_bit ? "odd" : "even") << " n -> " << side;
        return os.str();
      }
      if (b && cl.value != *b) {
        std::ostringstream os;
        os << "Im d -> " << format_number(cl.value) << " != b on " << (cl.parity_bit ? "odd" : "even") << " n -> " << side;
        return os.str();
      }
    }
    if (!b)
      for (const auto& x : *classes)
        for (const auto& y : *classes)
          if (x.value != y.value) return "Im d takes two distinct limits toward " + std::string(side);
  }
  return std::nullopt;
}

}  // namespace detail

/// nu = 1: no boundary eigenvalue with real part a outside [-2, 2] when
/// Re d -> 0 and Im d != b infinitely often.
inline CriterionResult check_real_window(const CriteriaContext& c, double a, std::optional<double> b = {}) {
  const std::string id = "real_window";
  const auto t = Target::real_part(a, b);
  if (c.nu() != 1) return detail::inconclusive(id, t, "defined for nu = 1 only");
  if (std::abs(a) <= 2.0) return detail::inconclusive(id, t, "a lies inside the essential spectrum [-2, 2]");
  if (!detail::all_classes_zero(detail::far_classes(c.re_model(), std::nullopt, 0, std::nullopt)))
    return detail::inconclusive(id, t, "no certificate that Re d -> 0");
  const auto inf = detail::infinitely_often_differs(c, b);
  if (!inf) return detail::inconclusive(id, t, "no certificate that Im d != b at infinitely many n");
  return detail::absent(id, t, "Re d -> 0 so the essential spectrum is [-2, 2] and |a| > 2; " + *inf);
}

/// nu = 1: d -> 0, (i) one of Im d(n), Im d(n+1) vanishes for every n,
/// (ii) Im d != 0 infinitely often, and sum |k| |Re d(k)| < inf.
inline CriterionResult check_summability(const CriteriaContext& c) {
  const std::string id = "summability";
  const auto t = Target::all();
  if (c.nu() != 1) return detail::inconclusive(id, t, "defined for nu = 1 only");
  const auto& re = c.re_model();
  const auto& im = c.im_model();
  if (!detail::all_classes_zero(detail::far_classes(re, std::nullopt, 0, std::nullopt)) ||
      !detail::all_classes_zero(detail::far_classes(im, std::nullopt, 0, std::nullopt)))
    return detail::inconclusive(id, t, "no certificate that d -> 0");
  for (const auto& d : re.decays)
    if (!d.geometric && d.rate <= 2.0)
      return detail::inconclusive(id, t, "sum |k| |Re d(k)| diverges for a power decay with exponent " + format_number(d.rate) + " <= 2");

  // (i) beyond the scan some parity class carries no imaginary part at all
  if (im.finite_radius > c.scan_radius())
    return detail::inconclusive(id, t, "finite imaginary support exceeds the scan radius");
  std::optional<int> quiet;
  for (int p = 0; p < 2 && !quiet; ++p) {
    bool silent = true;
    for (const auto& d : im.decays)
      if (d.active_on(p)) silent = false;
    if (silent) quiet = p;
  }
  if (!quiet) return detail::inconclusive(id, t, "condition (i) not certified beyond the scan: both parities carry Im d");
  for (std::int64_t n = -c.scan_radius() - 1; n <= c.scan_radius(); ++n)
    if (c.im_at(n) != 0.0 && c.im_at(n + 1) != 0.0)
      return detail::inconclusive(id, t, "condition (i) fails at n = " + std::to_string(n) + " (pair_condition applies instead)");
  // (ii)
  if (!detail::sign_definite_decay(im, 1 - *quiet))
    return detail::inconclusive(id, t, "condition (ii) not certified: Im d may vanish from some n on");
  std::string why = "d -> 0; Im d = 0 on ";
  why += *quiet ? "odd" : "even";
  why += " |n| > " + std::to_string(c.scan_radius()) + " and on one site of every scanned pair; Im d sign-definite on ";
  why += *quiet ? "even" : "odd";
  why += " sites; Re d summable against |k| (finite, geometric or power > 2)";
  return detail::absent(id, t, why);
}

/// Runs every applicable criterion and combines the conclusions.
inline CriteriaReport evaluate_all(const PotentialSpec& potential, std::size_t nu, const CriteriaParams& params = {}) {
  CriteriaContext c(potential, nu, params.scan_radius);
  CriteriaReport rep;
  rep.nu = nu;
  rep.scan_radius = c.scan_radius();

  std::vector<double> bs = params.b_list;
  bs.push_back(0.0);
  std::vector<double> candidates;
  if (nu == 1) candidates = {c.im_at(0), c.im_at(1)};
  bs.insert(bs.end(), candidates.begin(), candidates.end());
  std::sort(bs.begin(), bs.end());
  bs.erase(std::unique(bs.begin(), bs.end()), bs.end());
  rep.b_values = bs;
  rep.a_values = params.a_list;

  auto& e = rep.entries;
  bool non_real = false;
  for (std::size_t j = 0; j < nu; ++j)
    for (int dir : {1, -1}) {
      e.push_back(check_direction_decay(c, j, dir));
      non_real = non_real || e.back().absent();
    }
  e.push_back(check_full_decay(c));
  non_real = non_real || e.back().absent();

  auto b_excluded = [&](double b) {
    bool ex = b != 0.0 && non_real;
    e.push_back(check_level_set_empty(c, b));
    ex = ex || e.back().absent();
    for (std::size_t j = 0; j < nu; ++j)
      for (auto side : {HalfspaceSide::sup_finite, HalfspaceSide::inf_finite}) {
        e.push_back(check_halfspace_support(c, b, j, side));
        ex = ex || e.back().absent();
      }
    if (nu == 1) {
      e.push_back(check_pair_condition(c, b));
      ex = ex || e.back().absent();
    }
    return ex;
  };
  std::vector<double> excluded;
  for (double b : bs)
    if (b_excluded(b)) excluded.push_back(b);

  bool all = false;
  std::string reason;
  auto is_excluded = [&](double b) { return std::find(excluded.begin(), excluded.end(), b) != excluded.end(); };
  if (nu == 1) {
    e.push_back(check_alternating(c));
    if (e.back().absent()) all = true, reason = "alternating";
    e.push_back(check_summability(c));
    if (!all && e.back().absent()) all = true, reason = "summability";
    for (double a : params.a_list) {
      e.push_back(check_real_window(c, a));
      if (e.back().absent()) rep.summary.excluded_real_parts.push_back(a);
      for (double b : params.b_list) e.push_back(check_real_window(c, a, b));
    }
    if (!all && is_excluded(candidates[0]) && is_excluded(candidates[1])) {
      all = true;
      reason = "every boundary eigenvalue has imaginary part Im d(0) or Im d(1), and both are excluded";
    }
  }
  if (!all && non_real && is_excluded(0.0)) all = true, reason = "non-real and real boundary eigenvalues both excluded";

  std::stable_sort(e.begin(), e.end(), [](const auto& x, const auto& y) { return x.id < y.id; });
  rep.summary.no_boundary_eigenvalues = all;
  rep.summary.non_real_excluded = non_real || all;
  rep.summary.excluded_imag_parts = all ? bs : excluded;
  rep.summary.reason = reason;
  const auto& im = c.im_model();
  rep.summary.hermitian = !im.has_persistent() && im.decays.empty() && im.finite_radius < 0;
  return rep;
}

inline bool CriteriaReport::excludes(const Target& t) const {
  if (summary.no_boundary_eigenvalues) return true;
  switch (t.kind) {
    case Target::Kind::all: return false;
    case Target::Kind::non_real: return summary.non_real_excluded;
    case Target::Kind::imag_part:
      if (*t.b != 0.0 && summary.non_real_excluded) return true;
      return std::find(summary.excluded_imag_parts.begin(), summary.excluded_imag_parts.end(), *t.b) !=
             summary.excluded_imag_parts.end();
    case Target::Kind::real_part:
      if (std::find(summary.excluded_real_parts.begin(), summary.excluded_real_parts.end(), *t.a) !=
          summary.excluded_real_parts.end())
        return true;
      for (const auto& r : entries)
        if (r.absent() && r.id == "real_window" && r.target.a == t.a && r.target.b && t.b && *r.target.b == *t.b) return true;
      if (t.b) return excludes(Target::imag_part(*t.b));
      return false;
  }
  return false;
}

}  // namespace specrange
