#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "specrange/lattice.hpp"
#include "specrange/potential.hpp"

namespace specrange {

using json = nlohmann::json;

enum class Analysis { spectrum, numrange, classify, criteria };

inline const char* to_string(Analysis a) {
  switch (a) {
    case Analysis::spectrum: return "spectrum";
    case Analysis::numrange: return "numrange";
    case Analysis::classify: return "classify";
    case Analysis::criteria: return "criteria";
  }
  return "?";
}

struct ScenarioParams {
  std::optional<std::size_t> n_angles;
  std::optional<double> tol_boundary;
  std::optional<double> tol_cert;
  std::optional<double> tol_support;
  std::vector<double> b_list;
  std::vector<double> a_list;
  std::optional<std::int64_t> scan_radius;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> max_dim;
  /// run fails with a certification error unless a certified boundary
  /// eigenvalue lies within 1e-6 of this value.
  std::optional<cplx> require_certified_eigenvalue;
};

struct Scenario {
  std::string name;
  LatticeBox box;
  PotentialSpec potential;
  std::vector<Analysis> analysis;
  ScenarioParams params;

  bool wants(Analysis a) const { return std::find(analysis.begin(), analysis.end(), a) != analysis.end(); }
};

namespace detail {

[[noreturn]] inline void schema_error(const std::string& path, const std::string& msg) {
  fail(ErrorKind::invalid_input, "cli_report", "parse_scenario", (path.empty() ? std::string("/") : path) + ": " + msg);
}

inline std::string child(const std::string& path, const std::string& key) {
  std::string k;
  for (char c : key) k += c == '~' ? "~0" : c == '/' ? "~1" : std::string(1, c);
  return path + "/" + k;
}
inline std::string child(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

inline void expect_object(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) schema_error(path, "expected an object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) schema_error(child(path, key), "unknown field");
  }
}

inline const json& field(const json& j, const std::string& path, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) schema_error(child(path, key), "missing required field");
  return *it;
}

inline double as_double(const json& j, const std::string& path) {
  if (!j.is_number()) schema_error(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) schema_error(path, "number is not finite");
  return v;
}

inline std::int64_t as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) schema_error(path, "expected an integer");
  if (j.is_number_unsigned() && j.get<std::uint64_t>() > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
    schema_error(path, "integer out of range");
  return j.get<std::int64_t>();
}

inline std::uint64_t as_uint(const json& j, const std::string& path) {
  if (!j.is_number_unsigned()) schema_error(path, "expected a non-negative integer");
  return j.get<std::uint64_t>();
}

inline std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) schema_error(path, "expected a string");
  return j.get<std::string>();
}

/// Complex numbers are [re, im]; a bare number is read as real.
inline cplx as_complex(const json& j, const std::string& path) {
  if (j.is_number()) return as_double(j, path);
  if (!j.is_array() || j.size() != 2) schema_error(path, "expected [re, im]");
  return {as_double(j[0], child(path, 0)), as_double(j[1], child(path, 1))};
}

inline json complex_json(cplx v) { return json::array({v.real(), v.imag()}); }

inline std::pair<double, double> as_range(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) schema_error(path, "expected [lo, hi]");
  return {as_double(j[0], child(path, 0)), as_double(j[1], child(path, 1))};
}

inline LatticeBox as_box(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) schema_error(path, "expected a non-empty list of [lo, hi]");
  std::vector<Interval> ranges;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto p = child(path, i);
    if (!j[i].is_array() || j[i].size() != 2) schema_error(p, "expected [lo, hi]");
    const Interval iv{as_int(j[i][0], child(p, 0)), as_int(j[i][1], child(p, 1))};
    if (iv.lo > iv.hi) schema_error(p, "lo > hi");
    ranges.push_back(iv);
  }
  return LatticeBox(std::move(ranges));
}

inline json box_json(const LatticeBox& box) {
  json r = json::array();
  for (const auto& iv : box.ranges()) r.push_back(json::array({iv.lo, iv.hi}));
  return r;
}

inline Parity as_parity(const json& j, const std::string& path) {
  const auto s = as_string(j, path);
  if (s == "all") return Parity::all;
  if (s == "even") return Parity::even;
  if (s == "odd") return Parity::odd;
  schema_error(path, "parity must be all, even or odd");
}

inline const char* parity_name(Parity p) { return p == Parity::all ? "all" : p == Parity::even ? "even" : "odd"; }

inline DecayMetadata as_decay(const json& j, const std::string& path) {
  expect_object(j, path, {"vanishes_outside_radius", "monotone_bound"});
  if (j.size() != 1) schema_error(path, "give exactly one of vanishes_outside_radius, monotone_bound");
  if (j.contains("vanishes_outside_radius")) {
    const auto p = child(path, "vanishes_outside_radius");
    const auto r = as_int(j["vanishes_outside_radius"], p);
    if (r < 0) schema_error(p, "radius must be >= 0");
    return VanishesOutside{r};
  }
  const auto p = child(path, "monotone_bound");
  const auto& m = j["monotone_bound"];
  expect_object(m, p, {"amplitude", "power", "ratio"});
  MonotoneBound g;
  g.amplitude = as_double(field(m, p, "amplitude"), child(p, "amplitude"));
  if (m.contains("power") == m.contains("ratio")) schema_error(p, "give exactly one of power, ratio");
  if (m.contains("power")) {
    g.shape = MonotoneBound::Shape::power;
    g.rate = as_double(m["power"], child(p, "power"));
    if (!(g.rate > 0.0)) schema_error(child(p, "power"), "power must be > 0");
  } else {
    g.shape = MonotoneBound::Shape::geometric;
    g.rate = as_double(m["ratio"], child(p, "ratio"));
    if (!(g.rate > 0.0 && g.rate < 1.0)) schema_error(child(p, "ratio"), "ratio must lie in (0, 1)");
  }
  if (!(g.amplitude >= 0.0)) schema_error(child(p, "amplitude"), "amplitude must be >= 0");
  return g;
}

inline json decay_json(const DecayMetadata& d) {
  if (const auto* v = std::get_if<VanishesOutside>(&d)) return {{"vanishes_outside_radius", v->radius}};
  const auto& g = std::get<MonotoneBound>(d);
  json m{{"amplitude", g.amplitude}};
  m[g.shape == MonotoneBound::Shape::power ? "power" : "ratio"] = g.rate;
  return {{"monotone_bound", m}};
}

inline PotentialSpec as_potential(const json& j, const std::string& path) {
  expect_object(j, path, {"kind", "params", "decay"});
  const auto kind = as_string(field(j, path, "kind"), child(path, "kind"));
  const auto pp = child(path, "params");
  const json empty = json::object();
  const json& p = j.contains("params") ? j["params"] : empty;
  std::optional<DecayMetadata> decay;
  if (j.contains("decay")) decay = as_decay(j["decay"], child(path, "decay"));

  auto num = [&](const char* key) { return as_double(field(p, pp, key), child(pp, key)); };
  auto cnum = [&](const char* key) { return as_complex(field(p, pp, key), child(pp, key)); };
  auto parity = [&]() { return p.contains("parity") ? as_parity(p["parity"], child(pp, "parity")) : Parity::all; };

  PotentialKind k;
  if (kind == "table") {
    expect_object(p, pp, {"entries"});
    const auto ep = child(pp, "entries");
    const auto& es = field(p, pp, "entries");
    if (!es.is_array()) schema_error(ep, "expected a list");
    TablePotential t;
    for (std::size_t i = 0; i < es.size(); ++i) {
      const auto ip = child(ep, i);
      expect_object(es[i], ip, {"site", "value"});
      const auto& sj = field(es[i], ip, "site");
      if (!sj.is_array() || sj.empty()) schema_error(child(ip, "site"), "expected a non-empty integer list");
      Site site;
      for (std::size_t c = 0; c < sj.size(); ++c) site.push_back(as_int(sj[c], child(child(ip, "site"), c)));
      if (!t.entries.emplace(site, as_complex(field(es[i], ip, "value"), child(ip, "value"))).second)
        schema_error(ip, "duplicate site");
    }
    k = t;
  } else if (kind == "constant") {
    expect_object(p, pp, {"value"});
    k = ConstantPotential{cnum("value")};
  } else if (kind == "decay_power") {
    expect_object(p, pp, {"amplitude", "exponent", "parity"});
    k = DecayPowerPotential{cnum("amplitude"), num("exponent"), parity()};
  } else if (kind == "decay_geometric") {
    expect_object(p, pp, {"amplitude", "ratio", "parity"});
    k = DecayGeometricPotential{cnum("amplitude"), num("ratio"), parity()};
  } else if (kind == "alternating_1d") {
    expect_object(p, pp, {"b1", "b2"});
    k = Alternating1DPotential{num("b1"), num("b2")};
  } else if (kind == "seeded_random") {
    expect_object(p, pp, {"seed", "ranges", "re_range", "im_range"});
    SeededRandomPotential r;
    r.seed = as_uint(field(p, pp, "seed"), child(pp, "seed"));
    r.box = as_box(field(p, pp, "ranges"), child(pp, "ranges"));
    std::tie(r.re_lo, r.re_hi) = as_range(field(p, pp, "re_range"), child(pp, "re_range"));
    std::tie(r.im_lo, r.im_hi) = as_range(field(p, pp, "im_range"), child(pp, "im_range"));
    k = r;
  } else if (kind == "step") {
    expect_object(p, pp, {"value", "axis", "threshold", "side"});
    StepPotential s;
    s.value = cnum("value");
    const auto axis = as_int(field(p, pp, "axis"), child(pp, "axis"));
    if (axis < 0) schema_error(child(pp, "axis"), "axis must be >= 0");
    s.axis = static_cast<std::size_t>(axis);
    s.threshold = as_int(field(p, pp, "threshold"), child(pp, "threshold"));
    const auto side = as_string(field(p, pp, "side"), child(pp, "side"));
    if (side != "below" && side != "above") schema_error(child(pp, "side"), "side must be below or above");
    s.side = side == "below" ? StepSide::below : StepSide::above;
    k = s;
  } else if (kind == "sum") {
    expect_object(p, pp, {"terms"});
    const auto tp = child(pp, "terms");
    const auto& ts = field(p, pp, "terms");
    if (!ts.is_array() || ts.empty()) schema_error(tp, "expected a non-empty list");
    SumPotential s;
    for (std::size_t i = 0; i < ts.size(); ++i) s.terms.push_back(as_potential(ts[i], child(tp, i)));
    k = s;
  } else {
    schema_error(child(path, "kind"), "unknown potential kind '" + kind + "'");
  }
  try {
    PotentialSpec spec(std::move(k), decay);
    validate_decay(spec);
    return spec;
  } catch (const Error& e) {
    schema_error(path, e.what());
  }
}

}  // namespace detail

inline json potential_json(const PotentialSpec& spec) {
  using namespace detail;
  json out;
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, TablePotential>) {
          json es = json::array();
          for (const auto& [site, v] : p.entries) es.push_back({{"site", site}, {"value", complex_json(v)}});
          out = {{"kind", "table"}, {"params", {{"entries", es}}}};
        } else if constexpr (std::is_same_v<T, ConstantPotential>) {
          out = {{"kind", "constant"}, {"params", {{"value", complex_json(p.value)}}}};
        } else if constexpr (std::is_same_v<T, DecayPowerPotential>) {
          out = {{"kind", "decay_power"},
                 {"params", {{"amplitude", complex_json(p.amplitude)}, {"exponent", p.exponent}, {"parity", parity_name(p.parity)}}}};
        } else if constexpr (std::is_same_v<T, DecayGeometricPotential>) {
          out = {{"kind", "decay_geometric"},
                 {"params", {{"amplitude", complex_json(p.amplitude)}, {"ratio", p.ratio}, {"parity", parity_name(p.parity)}}}};
        } else if constexpr (std::is_same_v<T, Alternating1DPotential>) {
          out = {{"kind", "alternating_1d"}, {"params", {{"b1", p.b1}, {"b2", p.b2}}}};
        } else if constexpr (std::is_same_v<T, SeededRandomPotential>) {
          out = {{"kind", "seeded_random"},
                 {"params",
                  {{"seed", p.seed},
                   {"ranges", box_json(p.box)},
                   {"re_range", json::array({p.re_lo, p.re_hi})},
                   {"im_range", json::array({p.im_lo, p.im_hi})}}}};
        } else if constexpr (std::is_same_v<T, StepPotential>) {
          out = {{"kind", "step"},
                 {"params",
                  {{"value", complex_json(p.value)},
                   {"axis", p.axis},
                   {"threshold", p.threshold},
                   {"side", p.side == StepSide::below ? "below" : "above"}}}};
        } else {
          json ts = json::array();
          for (const auto& t : p.terms) ts.push_back(potential_json(t));
          out = {{"kind", "sum"}, {"params", {{"terms", ts}}}};
        }
      },
      spec.kind());
  if (spec.decay()) out["decay"] = decay_json(*spec.decay());
  return out;
}

inline Scenario parse_scenario(const json& j) {
  using namespace detail;
  expect_object(j, "", {"name", "nu", "ranges", "potential", "analysis", "params"});
  Scenario s;
  s.name = as_string(field(j, "", "name"), "/name");
  if (s.name.empty() || s.name.find_first_of("/\\") != std::string::npos || s.name == "." || s.name == "..")
    schema_error("/name", "name must be a non-empty file stem");
  const auto nu = as_int(field(j, "", "nu"), "/nu");
  if (nu < 1) schema_error("/nu", "nu must be >= 1");
  s.box = as_box(field(j, "", "ranges"), "/ranges");
  if (s.box.nu() != static_cast<std::size_t>(nu)) schema_error("/ranges", "expected " + std::to_string(nu) + " ranges");
  s.potential = as_potential(field(j, "", "potential"), "/potential");
  try {
    check_dimension(s.potential, s.box.nu());
  } catch (const Error& e) {
    schema_error("/potential", e.what());
  }

  const auto& an = field(j, "", "analysis");
  if (!an.is_array()) schema_error("/analysis", "expected a list");
  for (std::size_t i = 0; i < an.size(); ++i) {
    const auto name = as_string(an[i], child("/analysis", i));
    std::optional<Analysis> a;
    for (auto c : {Analysis::spectrum, Analysis::numrange, Analysis::classify, Analysis::criteria})
      if (name == to_string(c)) a = c;
    if (!a) schema_error(child("/analysis", i), "unknown analysis '" + name + "'");
    if (s.wants(*a)) schema_error(child("/analysis", i), "duplicate analysis");
    s.analysis.push_back(*a);
  }

  if (j.contains("params")) {
    const auto& p = j["params"];
    expect_object(p, "/params",
                  {"n_angles", "tol_boundary", "tol_cert", "tol_support", "b_list", "a_list", "scan_radius", "seed",
                   "max_dim", "require_certified_eigenvalue"});
    auto& q = s.params;
    auto positive = [&](const char* key) {
      const auto path = child("/params", key);
      const double v = as_double(p[key], path);
      if (!(v > 0.0)) schema_error(path, "must be > 0");
      return v;
    };
    auto list = [&](const char* key) {
      const auto path = child("/params", key);
      if (!p[key].is_array()) schema_error(path, "expected a list of numbers");
      std::vector<double> v;
      for (std::size_t i = 0; i < p[key].size(); ++i) v.push_back(as_double(p[key][i], child(path, i)));
      return v;
    };
    if (p.contains("n_angles")) {
      const auto n = as_int(p["n_angles"], "/params/n_angles");
      if (n < 3) schema_error("/params/n_angles", "must be >= 3");
      q.n_angles = static_cast<std::size_t>(n);
    }
    if (p.contains("tol_boundary")) q.tol_boundary = positive("tol_boundary");
    if (p.contains("tol_cert")) q.tol_cert = positive("tol_cert");
    if (p.contains("tol_support")) q.tol_support = positive("tol_support");
    if (p.contains("b_list")) q.b_list = list("b_list");
    if (p.contains("a_list")) q.a_list = list("a_list");
    if (p.contains("scan_radius")) {
      const auto r = as_int(p["scan_radius"], "/params/scan_radius");
      if (r < 1) schema_error("/params/scan_radius", "must be >= 1");
      q.scan_radius = r;
    }
    if (p.contains("seed")) q.seed = as_uint(p["seed"], "/params/seed");
    if (p.contains("max_dim")) {
      const auto m = as_int(p["max_dim"], "/params/max_dim");
      if (m < 1) schema_error("/params/max_dim", "must be >= 1");
      q.max_dim = static_cast<std::size_t>(m);
    }
    if (p.contains("require_certified_eigenvalue"))
      q.require_certified_eigenvalue = as_complex(p["require_certified_eigenvalue"], "/params/require_certified_eigenvalue");
  }
  return s;
}

inline Scenario parse_scenario_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    detail::fail(ErrorKind::invalid_input, "cli_report", "parse_scenario", std::string("malformed JSON: ") + e.what());
  }
  return parse_scenario(j);
}

inline json scenario_json(const Scenario& s) {
  json j;
  j["name"] = s.name;
  j["nu"] = s.box.nu();
  j["ranges"] = detail::box_json(s.box);
  j["potential"] = potential_json(s.potential);
  json an = json::array();
  for (auto a : s.analysis) an.push_back(to_string(a));
  j["analysis"] = an;
  json p = json::object();
  const auto& q = s.params;
  if (q.n_angles) p["n_angles"] = *q.n_angles;
  if (q.tol_boundary) p["tol_boundary"] = *q.tol_boundary;
  if (q.tol_cert) p["tol_cert"] = *q.tol_cert;
  if (q.tol_support) p["tol_support"] = *q.tol_support;
  if (!q.b_list.empty()) p["b_list"] = q.b_list;
  if (!q.a_list.empty()) p["a_list"] = q.a_list;
  if (q.scan_radius) p["scan_radius"] = *q.scan_radius;
  if (q.seed) p["seed"] = *q.seed;
  if (q.max_dim) p["max_dim"] = *q.max_dim;
  if (q.require_certified_eigenvalue) p["require_certified_eigenvalue"] = detail::complex_json(*q.require_certified_eigenvalue);
  if (!p.empty()) j["params"] = p;
  return j;
}

}  // namespace specrange
