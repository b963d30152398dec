#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "specrange/error.hpp"
#include "specrange/lattice.hpp"

namespace specrange {

using cplx = std::complex<double>;

/// Restricts a decaying term to sites whose first coordinate has the given parity.
enum class Parity { all, even, odd };

inline bool parity_matches(Parity p, std::int64_t k0) {
  switch (p) {
    case Parity::all: return true;
    case Parity::even: return (k0 & 1) == 0;
    case Parity::odd: return (k0 & 1) != 0;
  }
  return false;
}

/// Explicit values on finitely many sites, identically zero elsewhere.
struct TablePotential {
  std::map<Site, cplx> entries;
};

struct ConstantPotential {
  cplx value;
};

/// d(k) = amplitude / (1 + |k|_1^exponent).
struct DecayPowerPotential {
  cplx amplitude;
  double exponent = 2.0;
  Parity parity = Parity::all;
};

/// d(k) = amplitude * ratio^{|k|_1}, |ratio| < 1.
struct DecayGeometricPotential {
  cplx amplitude;
  double ratio = 0.5;
  Parity parity = Parity::all;
};

/// Purely imaginary 2-periodic pattern in the first coordinate:
/// Im d(k) = b1 for even k_1, b2 for odd k_1.
struct Alternating1DPotential {
  double b1 = 0.0;
  double b2 = 0.0;
};

/// Uniform values drawn from a counter-based generator keyed on (seed, site),
/// inside `box`; zero outside it.
struct SeededRandomPotential {
  std::uint64_t seed = 0;
  LatticeBox box;
  double re_lo = 0.0, re_hi = 0.0;
  double im_lo = 0.0, im_hi = 0.0;
};

enum class StepSide { below, above };

/// d(k) = value on the half-space k_axis <= threshold (below) or
/// k_axis >= threshold (above), zero elsewhere.
struct StepPotential {
  cplx value;
  std::size_t axis = 0;
  std::int64_t threshold = 0;
  StepSide side = StepSide::below;
};

class PotentialSpec;

struct SumPotential {
  std::vector<PotentialSpec> terms;
};

/// |d(k)| == 0 whenever |k|_1 > radius.
struct VanishesOutside {
  std::int64_t radius = 0;
};

/// |d(k)| <= g(|k|_1) with g(t) = amplitude / (1 + t^rate) (power) or
/// amplitude * rate^t (geometric).
struct MonotoneBound {
  enum class Shape { power, geometric };
  double amplitude = 0.0;
  Shape shape = Shape::power;
  double rate = 1.0;

  double operator()(double t) const {
    return shape == Shape::power ? amplitude / (1.0 + std::pow(t, rate)) : amplitude * std::pow(rate, t);
  }
};

using DecayMetadata = std::variant<VanishesOutside, MonotoneBound>;

using PotentialKind = std::variant<TablePotential, ConstantPotential, DecayPowerPotential, DecayGeometricPotential,
                                   Alternating1DPotential, SeededRandomPotential, StepPotential, SumPotential>;

/// Description of a bounded complex potential d : Z^nu -> C.
class PotentialSpec {
 public:
  PotentialSpec() : kind_(ConstantPotential{cplx{}}) {}
  PotentialSpec(PotentialKind kind, std::optional<DecayMetadata> decay = std::nullopt)
      : kind_(std::move(kind)), decay_(std::move(decay)) {
    check_parameters();
  }

  const PotentialKind& kind() const { return kind_; }
  const std::optional<DecayMetadata>& decay() const { return decay_; }

  template <class T>
  const T* as() const {
    return std::get_if<T>(&kind_);
  }

  cplx operator()(std::span<const std::int64_t> k) const;
  cplx operator()(std::int64_t n) const { return (*this)(std::span<const std::int64_t>(&n, 1)); }

 private:
  void check_parameters() const;

  PotentialKind kind_;
  std::optional<DecayMetadata> decay_;
};

inline PotentialSpec sum(std::vector<PotentialSpec> terms) { return PotentialSpec(SumPotential{std::move(terms)}); }

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline double unit_from_bits(std::uint64_t h) { return static_cast<double>(h >> 11) * 0x1.0p-53; }

/// Two uniforms in [0,1) determined by (seed, site) alone.
inline std::pair<double, double> site_uniforms(std::uint64_t seed, std::span<const std::int64_t> k) {
  std::uint64_t h = splitmix64(seed);
  for (auto c : k) h = splitmix64(h ^ static_cast<std::uint64_t>(c));
  return {unit_from_bits(h), unit_from_bits(splitmix64(h))};
}

}  // namespace detail

inline cplx PotentialSpec::operator()(std::span<const std::int64_t> k) const {
  return std::visit(
      [&](const auto& p) -> cplx {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, TablePotential>) {
          auto it = p.entries.find(Site(k.begin(), k.end()));
          return it == p.entries.end() ? cplx{} : it->second;
        } else if constexpr (std::is_same_v<T, ConstantPotential>) {
          return p.value;
        } else if constexpr (std::is_same_v<T, DecayPowerPotential>) {
          if (!parity_matches(p.parity, k[0])) return {};
          return p.amplitude / (1.0 + std::pow(static_cast<double>(l1_norm(k)), p.exponent));
        } else if constexpr (std::is_same_v<T, DecayGeometricPotential>) {
          if (!parity_matches(p.parity, k[0])) return {};
          return p.amplitude * std::pow(p.ratio, static_cast<double>(l1_norm(k)));
        } else if constexpr (std::is_same_v<T, Alternating1DPotential>) {
          return {0.0, (k[0] & 1) == 0 ? p.b1 : p.b2};
        } else if constexpr (std::is_same_v<T, SeededRandomPotential>) {
          if (!p.box.contains(k)) return {};
          auto [u, v] = detail::site_uniforms(p.seed, k);
          return {p.re_lo + u * (p.re_hi - p.re_lo), p.im_lo + v * (p.im_hi - p.im_lo)};
        } else if constexpr (std::is_same_v<T, StepPotential>) {
          const auto c = k[p.axis];
          const bool on = p.side == StepSide::below ? c <= p.threshold : c >= p.threshold;
          return on ? p.value : cplx{};
        } else {
          cplx s{};
          for (const auto& t : p.terms) s += t(k);
          return s;
        }
      },
      kind_);
}

inline void PotentialSpec::check_parameters() const {
  auto bad = [](const std::string& msg) { detail::fail(ErrorKind::invalid_input, "core_model", "PotentialSpec", msg); };
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, TablePotential>) {
          std::size_t nu = 0;
          for (const auto& [site, v] : p.entries) {
            if (site.empty()) bad("table site with no coordinates");
            if (nu != 0 && site.size() != nu) bad("table sites have inconsistent dimension");
            nu = site.size();
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) bad("table value is not finite");
          }
        } else if constexpr (std::is_same_v<T, DecayPowerPotential>) {
          if (!(p.exponent > 0.0)) bad("decay_power exponent must be > 0");
        } else if constexpr (std::is_same_v<T, DecayGeometricPotential>) {
          if (!(std::abs(p.ratio) < 1.0)) bad("decay_geometric ratio must satisfy |r| < 1");
        } else if constexpr (std::is_same_v<T, SeededRandomPotential>) {
          if (p.box.nu() == 0) bad("seeded_random needs a box");
          if (p.re_lo > p.re_hi || p.im_lo > p.im_hi) bad("seeded_random range has lo > hi");
        }
      },
      kind_);
}

/// Flattens nested sums into the list of leaf terms.
inline void flatten_terms(const PotentialSpec& spec, std::vector<const PotentialSpec*>& out) {
  if (const auto* s = spec.as<SumPotential>()) {
    for (const auto& t : s->terms) flatten_terms(t, out);
  } else {
    out.push_back(&spec);
  }
}

inline std::vector<const PotentialSpec*> flatten_terms(const PotentialSpec& spec) {
  std::vector<const PotentialSpec*> out;
  flatten_terms(spec, out);
  return out;
}

/// Dimension the spec is bound to, if any term fixes it.
inline std::optional<std::size_t> intrinsic_dimension(const PotentialSpec& spec) {
  std::optional<std::size_t> nu;
  for (const auto* t : flatten_terms(spec)) {
    std::optional<std::size_t> here;
    if (const auto* tab = t->as<TablePotential>(); tab && !tab->entries.empty()) here = tab->entries.begin()->first.size();
    if (const auto* r = t->as<SeededRandomPotential>()) here = r->box.nu();
    if (t->as<Alternating1DPotential>()) here = 1;
    if (here) {
      if (nu && *nu != *here)
        detail::fail(ErrorKind::invalid_input, "core_model", "PotentialSpec", "terms disagree on dimension");
      nu = here;
    }
  }
  return nu;
}

/// Checks that the spec can be evaluated on Z^nu.
inline void check_dimension(const PotentialSpec& spec, std::size_t nu) {
  if (auto d = intrinsic_dimension(spec); d && *d != nu)
    detail::fail(ErrorKind::invalid_input, "core_model", "PotentialSpec",
                 "potential is defined on Z^" + std::to_string(*d) + " but the box has nu=" + std::to_string(nu));
  for (const auto* t : flatten_terms(spec))
    if (const auto* s = t->as<StepPotential>(); s && s->axis >= nu)
      detail::fail(ErrorKind::invalid_input, "core_model", "PotentialSpec", "step axis exceeds box dimension");
}

/// sup_k |d(k)|, or an upper bound for it when terms are summed.
inline double sup_abs(const PotentialSpec& spec) {
  double s = 0.0;
  for (const auto* t : flatten_terms(spec)) {
    std::visit(
        [&](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, TablePotential>) {
            for (const auto& [k, v] : p.entries) s = std::max(s, std::abs(v));
          } else if constexpr (std::is_same_v<T, ConstantPotential>) {
            s += std::abs(p.value);
          } else if constexpr (std::is_same_v<T, DecayPowerPotential> || std::is_same_v<T, DecayGeometricPotential>) {
            s += std::abs(p.amplitude);
          } else if constexpr (std::is_same_v<T, Alternating1DPotential>) {
            s += std::max(std::abs(p.b1), std::abs(p.b2));
          } else if constexpr (std::is_same_v<T, SeededRandomPotential>) {
            s += std::hypot(std::max(std::abs(p.re_lo), std::abs(p.re_hi)), std::max(std::abs(p.im_lo), std::abs(p.im_hi)));
          } else if constexpr (std::is_same_v<T, StepPotential>) {
            s += std::abs(p.value);
          }
        },
        t->kind());
  }
  return s;
}

// ---------------------------------------------------------------------------
// Decay metadata

/// Certificate implied by the kind alone: finite support, a monotone
/// envelope, or nothing when the spec has persistent (non-decaying) terms.
inline std::optional<DecayMetadata> derived_decay(const PotentialSpec& spec) {
  std::int64_t finite_radius = 0;
  double finite_sup = 0.0;
  double min_power = std::numeric_limits<double>::infinity();
  double max_ratio = 0.0;
  std::vector<std::pair<double, double>> powers, geometrics;  // (|amplitude|, rate)
  for (const auto* t : flatten_terms(spec)) {
    bool persistent = false;
    std::visit(
        [&](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, TablePotential>) {
            for (const auto& [k, v] : p.entries) {
              if (v == cplx{}) continue;
              finite_radius = std::max(finite_radius, l1_norm(k));
              finite_sup = std::max(finite_sup, std::abs(v));
            }
          } else if constexpr (std::is_same_v<T, SeededRandomPotential>) {
            std::int64_t r = 0;
            for (const auto& iv : p.box.ranges()) r += std::max(std::abs(iv.lo), std::abs(iv.hi));
            finite_radius = std::max(finite_radius, r);
            finite_sup = std::max(finite_sup, sup_abs(PotentialSpec(p)));
          } else if constexpr (std::is_same_v<T, ConstantPotential>) {
            persistent = p.value != cplx{};
          } else if constexpr (std::is_same_v<T, Alternating1DPotential>) {
            persistent = p.b1 != 0.0 || p.b2 != 0.0;
          } else if constexpr (std::is_same_v<T, StepPotential>) {
            persistent = p.value != cplx{};
          } else if constexpr (std::is_same_v<T, DecayPowerPotential>) {
            if (p.amplitude != cplx{}) {
              powers.emplace_back(std::abs(p.amplitude), p.exponent);
              min_power = std::min(min_power, p.exponent);
            }
          } else if constexpr (std::is_same_v<T, DecayGeometricPotential>) {
            if (p.amplitude != cplx{}) {
              if (p.ratio == 0.0) {
                finite_sup = std::max(finite_sup, std::abs(p.amplitude));
              } else {
                geometrics.emplace_back(std::abs(p.amplitude), std::abs(p.ratio));
                max_ratio = std::max(max_ratio, std::abs(p.ratio));
              }
            }
          }
        },
        t->kind());
    if (persistent) return std::nullopt;
  }
  if (powers.empty() && geometrics.empty()) return VanishesOutside{finite_radius};

  // Amplitude C so that every term is dominated by the chosen envelope shape.
  if (!powers.empty()) {
    MonotoneBound g{0.0, MonotoneBound::Shape::power, min_power};
    for (auto [a, p] : powers) g.amplitude += a;  // t^p >= t^pmin for t >= 1, equal at 0
    for (auto [a, r] : geometrics) {
      double c = 0.0;  // sup_t (1 + t^pmin) r^t, attained at small t
      for (int t = 0; t < 4096; ++t) c = std::max(c, (1.0 + std::pow(t, min_power)) * std::pow(r, t));
      g.amplitude += a * c;
    }
    if (finite_sup > 0.0) g.amplitude += finite_sup * (1.0 + std::pow(static_cast<double>(finite_radius), min_power));
    return g;
  }
  MonotoneBound g{0.0, MonotoneBound::Shape::geometric, max_ratio};
  for (auto [a, r] : geometrics) g.amplitude += a;
  if (finite_sup > 0.0) g.amplitude += finite_sup * std::pow(max_ratio, -static_cast<double>(finite_radius));
  return g;
}

/// Rejects declared decay metadata that the kind does not imply.
inline void validate_decay(const PotentialSpec& spec) {
  if (!spec.decay()) return;
  auto bad = [](const std::string& msg) {
    detail::fail(ErrorKind::invalid_input, "core_model", "PotentialSpec", "decay metadata inconsistent with kind: " + msg);
  };
  const auto derived = derived_decay(spec);
  if (!derived) bad("potential has non-decaying terms");
  if (const auto* v = std::get_if<VanishesOutside>(&*spec.decay())) {
    const auto* dv = std::get_if<VanishesOutside>(&*derived);
    if (!dv) bad("declared finite support but the kind decays without vanishing");
    if (dv->radius > v->radius) bad("support extends to radius " + std::to_string(dv->radius));
    return;
  }
  const auto& g = std::get<MonotoneBound>(*spec.decay());
  if (std::holds_alternative<VanishesOutside>(*derived)) return;  // any positive envelope works past the support
  const auto& dg = std::get<MonotoneBound>(*derived);
  if (g.shape == MonotoneBound::Shape::geometric && dg.shape == MonotoneBound::Shape::power)
    bad("geometric envelope cannot dominate power-law decay");
  if (g.shape == dg.shape) {
    if (g.shape == MonotoneBound::Shape::power && g.rate > dg.rate) bad("declared power decays faster than the kind");
    if (g.shape == MonotoneBound::Shape::geometric && g.rate < dg.rate) bad("declared ratio decays faster than the kind");
  }
  for (int t = 0; t <= 10000; ++t)
    if (g(t) < dg(t) * (1.0 - 1e-12)) bad("envelope below the kind's bound at |k|_1 = " + std::to_string(t));
}

// ---------------------------------------------------------------------------
// Bounds R-, R+, I-, I+

struct PotentialBounds {
  double re_min = 0.0, re_max = 0.0;
  double im_min = 0.0, im_max = 0.0;
};

namespace detail {

struct RealRange {
  double lo = 0.0, hi = 0.0;
  void include(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
};

/// Smallest |k|_1 over sites outside the box.
inline double min_offbox_l1(const LatticeBox& box) {
  if (!box.contains_origin()) return 0.0;
  std::int64_t m = std::numeric_limits<std::int64_t>::max();
  for (const auto& iv : box.ranges()) m = std::min({m, iv.hi + 1, 1 - iv.lo});
  return static_cast<double>(m);
}

/// Enclosure of the values of one term (real or imaginary part) at sites
/// outside the box. Every returned range contains 0 or the persistent value.
inline std::pair<RealRange, RealRange> offbox_term_range(const PotentialSpec& term, const LatticeBox& box) {
  RealRange re, im;
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, TablePotential>) {
          for (const auto& [k, v] : p.entries) {
            if (box.contains(k)) continue;
            re.include(v.real());
            im.include(v.imag());
          }
        } else if constexpr (std::is_same_v<T, ConstantPotential>) {
          re = {p.value.real(), p.value.real()};
          im = {p.value.imag(), p.value.imag()};
        } else if constexpr (std::is_same_v<T, DecayPowerPotential> || std::is_same_v<T, DecayGeometricPotential>) {
          const double t = min_offbox_l1(box);
          double env;
          bool alternating_sign = false;
          if constexpr (std::is_same_v<T, DecayPowerPotential>) {
            env = 1.0 / (1.0 + std::pow(t, p.exponent));
          } else {
            env = std::pow(std::abs(p.ratio), t);
            alternating_sign = p.ratio < 0.0;
          }
          const cplx a = p.amplitude * env;
          for (auto [r, v] : {std::pair{&re, a.real()}, std::pair{&im, a.imag()}}) {
            r->include(v);
            if (alternating_sign) r->include(-v);
          }
        } else if constexpr (std::is_same_v<T, Alternating1DPotential>) {
          im = {std::min(p.b1, p.b2), std::max(p.b1, p.b2)};
        } else if constexpr (std::is_same_v<T, SeededRandomPotential>) {
          bool inside = true;
          for (std::size_t j = 0; j < p.box.nu() && j < box.nu(); ++j)
            inside = inside && box.range(j).lo <= p.box.range(j).lo && p.box.range(j).hi <= box.range(j).hi;
          if (!inside) {
            re.include(p.re_lo), re.include(p.re_hi);
            im.include(p.im_lo), im.include(p.im_hi);
          }
        } else if constexpr (std::is_same_v<T, StepPotential>) {
          re.include(p.value.real());
          im.include(p.value.imag());
        }
      },
      term.kind());
  return {re, im};
}

}  // namespace detail

/// Componentwise inf/sup of Re d and Im d over Z^nu: exact over the box,
/// completed by a conservative enclosure of the values the kind takes
/// outside it (so 0 is included whenever d vanishes at infinity).
inline PotentialBounds potential_bounds(const PotentialSpec& potential, const LatticeBox& box) {
  check_dimension(potential, box.nu());
  PotentialBounds b{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
                    std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for_each_site(box, [&](const Site& k) {
    const cplx v = potential(k);
    b.re_min = std::min(b.re_min, v.real());
    b.re_max = std::max(b.re_max, v.real());
    b.im_min = std::min(b.im_min, v.imag());
    b.im_max = std::max(b.im_max, v.imag());
  });
  detail::RealRange re, im;
  bool first = true;
  for (const auto* t : flatten_terms(potential)) {
    auto [tr, ti] = detail::offbox_term_range(*t, box);
    if (first) {
      re = tr, im = ti, first = false;
    } else {
      re = {re.lo + tr.lo, re.hi + tr.hi};
      im = {im.lo + ti.lo, im.hi + ti.hi};
    }
  }
  b.re_min = std::min(b.re_min, re.lo);
  b.re_max = std::max(b.re_max, re.hi);
  b.im_min = std::min(b.im_min, im.lo);
  b.im_max = std::max(b.im_max, im.hi);
  return b;
}

/// Copy of the spec with every seeded_random term re-keyed to `seed`.
inline PotentialSpec with_seed(const PotentialSpec& spec, std::uint64_t seed) {
  if (const auto* s = spec.as<SumPotential>()) {
    SumPotential out;
    for (const auto& t : s->terms) out.terms.push_back(with_seed(t, seed));
    return PotentialSpec(std::move(out), spec.decay());
  }
  if (const auto* r = spec.as<SeededRandomPotential>()) {
    auto copy = *r;
    copy.seed = seed;
    return PotentialSpec(copy, spec.decay());
  }
  return spec;
}

}  // namespace specrange
