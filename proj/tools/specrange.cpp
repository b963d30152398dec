// Command-line front end: run, construct, sweep, criteria.

#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "specrange/specrange.hpp"

namespace fs = std::filesystem;
using namespace specrange;

namespace {

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::invalid_input: return 2;
    case ErrorKind::numerical: return 3;
    case ErrorKind::certification: return 4;
  }
  return 1;
}

std::vector<std::int64_t> parse_zeros(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size())
      detail::fail(ErrorKind::invalid_input, "cli_report", "construct", "bad zero site '" + item + "'");
    out.push_back(v);
  }
  return out;
}

int finish_run(const RunResult& r, const std::string& name, const fs::path& out) {
  write_run_outputs(r, name, out);
  std::cout << "wrote " << (out / (name + ".report.json")).string() << "\n";
  if (r.certification_failure) {
    std::cerr << "error: cli_report::run: " << *r.certification_failure << "\n";
    return 4;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boundary eigenvalues of discrete Schroedinger operators with complex potentials"};
  app.require_subcommand(1);

  RunOverrides ov;
  std::string out_dir = ".";
  app.add_option("--tol-boundary", ov.tol_boundary, "boundary tolerance, relative to 1 + ||A||_F")->check(CLI::PositiveNumber);
  app.add_option("--tol-cert", ov.tol_cert, "certificate tolerance, relative to 1 + ||A||_F")->check(CLI::PositiveNumber);
  app.add_option("--angles", ov.n_angles, "support-function angles")->check(CLI::Range(3, 1 << 20));
  app.add_option("--seed", ov.seed, "seed for every seeded_random term");
  app.add_option("--max-dim", ov.max_dim, "dimension cap (default 4096 or SPECRANGE_MAX_DIM)")->check(CLI::PositiveNumber);
  app.add_option("--out", out_dir, "output directory");

  std::string file;
  auto* run_cmd = app.add_subcommand("run", "analyse a scenario file");
  run_cmd->add_option("file", file, "scenario JSON")->required();
  run_cmd->fallthrough();

  ConstructRequest req;
  std::string zeros;
  auto* construct_cmd = app.add_subcommand("construct", "build and certify a boundary eigenvalue a + ib");
  construct_cmd->add_option("--a", req.a, "real part, |a| > 2")->required();
  construct_cmd->add_option("--b", req.b, "imaginary part, b > 0")->required();
  construct_cmd->add_option("--zeros", zeros, "comma-separated zero sites of the eigenfunction")->required();
  construct_cmd->add_option("--n", req.n, "number of sites")->required()->check(CLI::PositiveNumber);
  construct_cmd->fallthrough();

  SweepRequest sw;
  auto* sweep_cmd = app.add_subcommand("sweep", "vary one scalar of a scenario over a grid");
  sweep_cmd->add_option("file", file, "scenario JSON")->required();
  sweep_cmd->add_option("--param", sw.pointer, "JSON pointer to a number, e.g. /potential/params/b2")->required();
  sweep_cmd->add_option("--from", sw.from)->required();
  sweep_cmd->add_option("--to", sw.to)->required();
  sweep_cmd->add_option("--steps", sw.steps, "grid points (0 writes the header only)")->required();
  sweep_cmd->fallthrough();

  auto* criteria_cmd = app.add_subcommand("criteria", "evaluate the absence criteria only");
  criteria_cmd->add_option("file", file, "scenario JSON")->required();
  criteria_cmd->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const fs::path out(out_dir);
  try {
    if (*run_cmd) {
      const auto s = parse_scenario_text(read_file(file));
      return finish_run(run(s, ov), s.name, out);
    }
    if (*construct_cmd) {
      Scenario s;
      try {
        req.zeros = parse_zeros(zeros);
        if (ov.n_angles) req.n_angles = *ov.n_angles;
        s = construct_scenario(req);
      } catch (const Error& e) {
        // every failure to build the requested eigenvalue is a failed certification
        std::cerr << "error: " << e.what() << "\n";
        return 4;
      }
      fs::create_directories(out);
      write_atomic(out / (s.name + ".json"), dump(scenario_json(s)));
      std::cout << "wrote " << (out / (s.name + ".json")).string() << "\n";
      return finish_run(run(s, ov), s.name, out);
    }
    if (*sweep_cmd) {
      json doc;
      try {
        doc = json::parse(read_file(file));
      } catch (const json::parse_error& e) {
        detail::fail(ErrorKind::invalid_input, "cli_report", "parse_scenario", std::string("malformed JSON: ") + e.what());
      }
      const auto name = parse_scenario(doc).name;
      const auto csv = sweep(doc, sw, ov);
      fs::create_directories(out);
      write_atomic(out / (name + ".sweep.csv"), csv);
      std::cout << "wrote " << (out / (name + ".sweep.csv")).string() << "\n";
      return 0;
    }
    if (*criteria_cmd) {
      auto s = effective_scenario(parse_scenario_text(read_file(file)), ov);
      const auto rep = run_criteria(s);
      fs::create_directories(out);
      json j{{"name", s.name}, {"criteria", criteria_json(rep)}};
      write_atomic(out / (s.name + ".criteria.json"), dump(j));
      std::cout << s.name << ": " << (rep.summary.no_boundary_eigenvalues ? "no boundary eigenvalues" : "inconclusive for some targets")
                << (rep.summary.reason.empty() ? "" : " (" + rep.summary.reason + ")") << "\n";
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: cli_report::main: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
