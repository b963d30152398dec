#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "specrange/classifier.hpp"
#include "specrange/construct.hpp"
#include "specrange/criteria.hpp"
#include "specrange/scenario.hpp"

namespace specrange {

/// Settings that the command line may lay over a scenario's own params.
struct RunOverrides {
  std::optional<double> tol_boundary;
  std::optional<double> tol_cert;
  std::optional<std::size_t> n_angles;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> max_dim;
};

/// Tolerance for matching require_certified_eigenvalue.
inline constexpr double require_match_tol = 1e-6;

struct RunResult {
  json report;
  std::string hull_csv;
  std::string spectrum_csv;
  /// Set when a requested certification failed; the report is still complete.
  std::optional<std::string> certification_failure;
};

inline std::optional<std::size_t> env_max_dim() {
  if (const char* s = std::getenv("SPECRANGE_MAX_DIM")) {
    char* end = nullptr;
    const auto v = std::strtoull(s, &end, 10);
    if (end != s && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    detail::fail(ErrorKind::invalid_input, "cli_report", "run", "SPECRANGE_MAX_DIM must be a positive integer");
  }
  return std::nullopt;
}

/// Scenario params with command-line overrides applied; the potential is re-seeded if asked.
inline Scenario effective_scenario(Scenario s, const RunOverrides& o) {
  auto& p = s.params;
  if (o.tol_boundary) p.tol_boundary = o.tol_boundary;
  if (o.tol_cert) p.tol_cert = o.tol_cert;
  if (o.n_angles) p.n_angles = o.n_angles;
  if (o.seed) p.seed = o.seed;
  if (o.max_dim) p.max_dim = o.max_dim;
  if (p.seed) s.potential = with_seed(s.potential, *p.seed);
  return s;
}

inline std::size_t resolved_max_dim(const Scenario& s, const RunOverrides& o) {
  if (o.max_dim) return *o.max_dim;
  if (auto e = env_max_dim()) return *e;
  return s.params.max_dim.value_or(default_max_dim);
}

inline json criteria_json(const CriteriaReport& r) {
  json entries = json::array();
  for (const auto& e : r.entries) {
    json x{{"id", e.id}, {"target", to_string(e.target)}, {"verdict", to_string(e.verdict)}, {"witness", e.witness}};
    if (e.witness_site) x["witness_site"] = *e.witness_site;
    entries.push_back(std::move(x));
  }
  return {{"nu", r.nu},
          {"scan_radius", r.scan_radius},
          {"b_values", r.b_values},
          {"a_values", r.a_values},
          {"entries", entries},
          {"summary",
           {{"no_boundary_eigenvalues", r.summary.no_boundary_eigenvalues},
            {"non_real_excluded", r.summary.non_real_excluded},
            {"excluded_imag_parts", r.summary.excluded_imag_parts},
            {"excluded_real_parts", r.summary.excluded_real_parts},
            {"hermitian", r.summary.hermitian},
            {"reason", r.summary.reason}}}};
}

inline CriteriaReport run_criteria(const Scenario& s) {
  CriteriaParams cp{s.params.b_list, s.params.a_list, s.params.scan_radius};
  return evaluate_all(s.potential, s.box.nu(), cp);
}

namespace detail {

inline std::string csv_number(double x) { return format_number(x); }

}  // namespace detail

/// Runs the requested analyses on an already-parsed scenario (overrides applied by the caller or here).
inline RunResult run(const Scenario& input, const RunOverrides& overrides = {}) {
  const Scenario s = effective_scenario(input, overrides);
  const auto max_dim = resolved_max_dim(s, overrides);
  RunResult out;
  json& rep = out.report;
  rep["name"] = s.name;
  rep["scenario"] = scenario_json(s);
  out.hull_csv = "theta,support,witness_re,witness_im\n";
  out.spectrum_csv = "index,re,im,residual,is_boundary,boundary_distance,certified\n";

  const bool want_spectrum = s.wants(Analysis::spectrum) || s.wants(Analysis::classify);
  const bool want_hull = s.wants(Analysis::numrange) || s.wants(Analysis::classify);

  ClassifierOptions copts;
  if (s.params.tol_boundary) copts.tol_boundary = *s.params.tol_boundary;
  if (s.params.tol_cert) copts.tol_cert = *s.params.tol_cert;
  if (s.params.tol_support) copts.tol_support = *s.params.tol_support;
  HullOptions hopts;
  if (s.params.n_angles) hopts.n_angles = *s.params.n_angles;

  if (want_spectrum || want_hull) {
    const auto op = assemble(s.box, s.potential, max_dim);
    rep["dim"] = op.dim();
    rep["frobenius_norm"] = op.frobenius_norm();
    std::optional<NumericalRangeHull> hull;
    if (want_hull) {
      hull = compute_hull(op, hopts);
      json poly = json::array();
      for (auto v : hull->polygon) poly.push_back(detail::complex_json(v));
      rep["numrange"] = {{"n_angles", hopts.n_angles},
                         {"tol_hull", hull->tol_hull},
                         {"polygon", poly},
                         {"sandwich_gap", sandwich_gap(*hull)}};
      for (const auto& smp : hull->samples)
        out.hull_csv += detail::csv_number(smp.theta) + "," + detail::csv_number(smp.support) + "," +
                        detail::csv_number(smp.witness.real()) + "," + detail::csv_number(smp.witness.imag()) + "\n";
    }
    json spec = json::array();
    json certified = json::array();
    std::vector<cplx> certified_values;
    if (s.wants(Analysis::classify)) {
      const auto classes = classify(op, *hull, copts);
      for (std::size_t i = 0; i < classes.size(); ++i) {
        const auto& c = classes[i];
        const auto hv = hildebrandt_certificate(op, c, copts);
        const auto sv = split_certificate(op, c, copts);
        const bool cert = hv == HildebrandtVerdict::certified_normal && sv == SplitVerdict::certified;
        json x{{"value", detail::complex_json(c.pair.value)},
               {"residual", c.pair.residual},
               {"boundary_distance", c.boundary_distance},
               {"is_boundary", c.is_boundary},
               {"normality_residual", c.normality_residual},
               {"split_residual_re", c.split_residual_re},
               {"split_residual_im", c.split_residual_im},
               {"hildebrandt", to_string(hv)},
               {"split", to_string(sv)},
               {"certified", cert},
               {"support_size", c.support_indices.size()}};
        if (!c.support_set.empty()) {
          json ext = json::array();
          for (std::size_t j = 0; j < s.box.nu(); ++j) {
            auto [lo, hi] = support_extent(c, j);
            ext.push_back(json::array({lo, hi}));
          }
          x["support_extent"] = ext;
          x["box_limited"] = box_limited(c, s.box);
        }
        spec.push_back(std::move(x));
        if (cert) {
          certified.push_back(detail::complex_json(c.pair.value));
          certified_values.push_back(c.pair.value);
        }
        out.spectrum_csv += std::to_string(i) + "," + detail::csv_number(c.pair.value.real()) + "," +
                            detail::csv_number(c.pair.value.imag()) + "," + detail::csv_number(c.pair.residual) + "," +
                            (c.is_boundary ? "1" : "0") + "," + detail::csv_number(c.boundary_distance) + "," +
                            (cert ? "1" : "0") + "\n";
      }
      rep["certified_boundary_eigenvalues"] = certified;
      rep["classifier"] = {{"tol_boundary", copts.tol_boundary * (1.0 + op.frobenius_norm())},
                           {"tol_cert", copts.tol_cert * (1.0 + op.frobenius_norm())},
                           {"tol_support", copts.tol_support}};
    } else if (want_spectrum) {
      const auto pairs = eig_general(op);
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        spec.push_back({{"value", detail::complex_json(pairs[i].value)}, {"residual", pairs[i].residual}});
        out.spectrum_csv += std::to_string(i) + "," + detail::csv_number(pairs[i].value.real()) + "," +
                            detail::csv_number(pairs[i].value.imag()) + "," + detail::csv_number(pairs[i].residual) +
                            ",,,\n";
      }
    }
    if (want_spectrum) rep["spectrum"] = spec;

    if (const auto& want = s.params.require_certified_eigenvalue) {
      bool found = false;
      for (auto v : certified_values) found = found || std::abs(v - *want) <= require_match_tol;
      rep["requirement"] = {{"certified_eigenvalue", detail::complex_json(*want)}, {"met", found}};
      if (!found) {
        std::ostringstream msg;
        msg << "no certified boundary eigenvalue within " << require_match_tol << " of " << want->real() << "+"
            << want->imag() << "i";
        out.certification_failure = msg.str();
      }
    }
  } else if (s.params.require_certified_eigenvalue) {
    detail::fail(ErrorKind::invalid_input, "cli_report", "run", "require_certified_eigenvalue needs the classify analysis");
  }

  if (s.wants(Analysis::criteria)) rep["criteria"] = criteria_json(run_criteria(s));
  return out;
}

/// Writes `content` to `path` through a temporary file in the same directory.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) detail::fail(ErrorKind::invalid_input, "cli_report", "write", "cannot open " + tmp.string());
    f << content;
    if (!f.flush()) detail::fail(ErrorKind::invalid_input, "cli_report", "write", "cannot write " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) detail::fail(ErrorKind::invalid_input, "cli_report", "write", "cannot rename onto " + path.string());
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline void write_run_outputs(const RunResult& r, const std::string& name, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_atomic(dir / (name + ".report.json"), dump(r.report));
  write_atomic(dir / (name + ".hull.csv"), r.hull_csv);
  write_atomic(dir / (name + ".spectrum.csv"), r.spectrum_csv);
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) detail::fail(ErrorKind::invalid_input, "cli_report", "read", "cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// construct

struct ConstructRequest {
  double a = 0.0;
  double b = 0.0;
  std::vector<std::int64_t> zeros;
  std::int64_t n = 101;
  std::size_t n_angles = 720;
};

inline std::string counterexample_name(double a, double b) {
  return "counterexample_a" + format_number(a) + "_b" + format_number(b);
}

/// Window of the designed eigenfunction: ten sites past the outer zeros.
inline std::pair<std::int64_t, std::int64_t> default_window(const std::vector<std::int64_t>& zeros) {
  if (zeros.empty()) return {-10, 10};
  const auto [lo, hi] = std::minmax_element(zeros.begin(), zeros.end());
  return {*lo - 10, *hi + 10};
}

/// Builds and certifies the counterexample, and returns the scenario that replays it.
inline Scenario construct_scenario(const ConstructRequest& req) {
  auto [wlo, whi] = default_window(req.zeros);
  const auto box = LatticeBox::centred_line(req.n);
  wlo = std::max(wlo, box.range(0).lo + 1);
  whi = std::min(whi, box.range(0).hi - 1);
  CounterexampleOptions opts;
  opts.hull.n_angles = req.n_angles;
  const auto cx = build_counterexample(req.a, req.b, req.zeros, wlo, whi, req.n, opts);
  Scenario s;
  s.name = counterexample_name(req.a, req.b);
  s.box = cx.box;
  s.potential = cx.potential;
  s.analysis = {Analysis::spectrum, Analysis::numrange, Analysis::classify};
  s.params.n_angles = req.n_angles;
  s.params.require_certified_eigenvalue = cx.classes[cx.certified_index].pair.value;
  return s;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepRequest {
  std::string pointer;  // JSON pointer into the scenario document
  double from = 0.0;
  double to = 0.0;
  std::size_t steps = 0;
};

inline double sweep_point(const SweepRequest& r, std::size_t i) {
  if (r.steps <= 1) return r.from;
  return r.from + (r.to - r.from) * static_cast<double>(i) / static_cast<double>(r.steps - 1);
}

/// One row per grid point: the spectrum, boundary and certification flags,
/// and the criteria verdict when the scenario asks for criteria.
inline std::string sweep(const json& scenario_doc, const SweepRequest& r, const RunOverrides& overrides = {}) {
  json::json_pointer ptr;
  try {
    ptr = json::json_pointer(r.pointer);
  } catch (const json::exception& e) {
    detail::fail(ErrorKind::invalid_input, "cli_report", "sweep", "bad JSON pointer '" + r.pointer + "': " + e.what());
  }
  if (!scenario_doc.contains(ptr) || !scenario_doc.at(ptr).is_number())
    detail::fail(ErrorKind::invalid_input, "cli_report", "sweep", "pointer '" + r.pointer + "' does not name a number in the scenario");
  parse_scenario(scenario_doc);  // the base document must be valid

  std::string csv = "point,param,n_eigenvalues,eigenvalues,boundary_flags,n_boundary,n_certified,criteria_no_boundary,error\n";
  for (std::size_t i = 0; i < r.steps; ++i) {
    const double x = sweep_point(r, i);
    std::string row = std::to_string(i) + "," + format_number(x) + ",";
    try {
      json doc = scenario_doc;
      doc[ptr] = x;
      const auto res = run(parse_scenario(doc), overrides);
      const auto& rep = res.report;
      std::string values, flags;
      std::size_t n = 0, nb = 0, nc = 0;
      if (rep.contains("spectrum")) {
        for (const auto& e : rep["spectrum"]) {
          if (n++) values += ";", flags += ";";
          values += format_number(e["value"][0].get<double>()) + ":" + format_number(e["value"][1].get<double>());
          if (e.contains("is_boundary")) {
            const bool bd = e["is_boundary"].get<bool>();
            flags += bd ? "1" : "0";
            nb += bd;
            nc += e["certified"].get<bool>();
          }
        }
      }
      std::string crit;
      if (rep.contains("criteria")) crit = rep["criteria"]["summary"]["no_boundary_eigenvalues"].get<bool>() ? "1" : "0";
      row += std::to_string(n) + "," + values + "," + flags + "," + std::to_string(nb) + "," + std::to_string(nc) + "," +
             crit + ",";
      if (res.certification_failure) row += "certification: " + *res.certification_failure;
    } catch (const std::exception& e) {
      std::string msg = e.what();
      for (auto& c : msg)
        if (c == ',' || c == '\n' || c == '"') c = ' ';
      row += ",,,,,," + msg;
    }
    csv += row + "\n";
  }
  return csv;
}

}  // namespace specrange
