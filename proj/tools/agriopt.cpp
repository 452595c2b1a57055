// agriopt: solve, sweep and serve the crop-allocation and livestock models.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "agriopt/io.hpp"
#include "agriopt/runs.hpp"
#include "agriopt/service.hpp"
#include "agriopt/sweep.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace agriopt;

namespace {

constexpr int kExitUsage = 1;

int exit_code(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return 0;
    case SolveStatus::infeasible: return 2;
    case SolveStatus::unbounded: return 3;
    case SolveStatus::iteration_limit: return 4;
  }
  return kExitUsage;
}

struct SolverFlags {
  std::optional<std::string> pivot_rule;
  std::optional<std::size_t> max_iterations;
  std::optional<double> feasibility_tol;
  std::optional<double> optimality_tol;

  void add(CLI::App* app) {
    app->add_option("--pivot-rule", pivot_rule, "largest-coefficient or bland");
    app->add_option("--max-iterations", max_iterations, "Simplex pivot limit");
    app->add_option("--feasibility-tol", feasibility_tol);
    app->add_option("--optimality-tol", optimality_tol);
  }
  json to_json() const {
    json j = json::object();
    if (pivot_rule) j["pivot_rule"] = *pivot_rule;
    if (max_iterations) j["max_iterations"] = *max_iterations;
    if (feasibility_tol) j["feasibility_tol"] = *feasibility_tol;
    if (optimality_tol) j["optimality_tol"] = *optimality_tol;
    return j;
  }
};

fs::path default_out() {
  if (const char* env = std::getenv("AGRIOPT_OUT"); env && *env) return env;
  return "out";
}

int finish(const json& manifest, const std::optional<std::string>& out_flag, std::size_t parallelism) {
  RunOutcome out = execute_manifest(manifest, parallelism);
  const fs::path dir = out_flag ? fs::path(*out_flag) : default_out();
  for (const auto& w : out.warnings) std::cerr << "warning: " << w << "\n";
  for (const auto& [name, body] : out.files) write_file(dir / name, body);
  write_file(dir / "manifest.json", out.manifest.dump(2) + "\n");
  for (const auto& line : out.summary) std::cout << line << "\n";
  std::cout << "wrote " << out.files.size() + 1 << " files to " << dir.string() << "\n";
  return exit_code(out.status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Crop allocation, watershed nutrient and livestock goal-programming models"};
  app.require_subcommand(1);

  // solve
  auto* solve = app.add_subcommand("solve", "Solve one instance");
  std::string solve_kind, solve_data;
  std::optional<std::string> solve_out, request_file, scenario;
  double water = 0.0, p_red = 0.0, n_red = 0.0;
  bool v2 = false;
  std::optional<double> elasticity;
  std::optional<std::size_t> fw_iters;
  SolverFlags solve_flags;
  solve->add_option("kind", solve_kind, "lkw, nleb or esca")->required()->check(CLI::IsMember({"lkw", "nleb", "esca"}));
  solve->add_option("--data", solve_data, "Bundle directory")->required();
  solve->add_option("--out", solve_out, "Output directory (default $AGRIOPT_OUT or ./out)");
  solve->add_option("--water-reduction", water, "Fractional cut of the water cap");
  solve->add_option("--p-reduction", p_red, "Fractional cut of P exports (nleb)");
  solve->add_option("--n-reduction", n_red, "Fractional cut of N exports (nleb)");
  solve->add_flag("--v2", v2, "Price-responsive model (nleb)");
  solve->add_option("--elasticity", elasticity, "One supply elasticity for every crop (nleb --v2)");
  solve->add_option("--fw-max-iterations", fw_iters, "Frank-Wolfe iteration limit (nleb --v2)");
  solve->add_option("--request", request_file, "Solve request JSON (esca)");
  solve->add_option("--scenario", scenario, "Named weight vector from the bundle (esca)");
  solve_flags.add(solve);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Solve a grid of reduction scenarios");
  std::string sweep_kind, sweep_data;
  std::optional<std::string> sweep_out, water_spec, p_spec, n_spec;
  double sweep_water = 0.0;
  std::size_t parallel = default_parallelism();
  SolverFlags sweep_flags;
  sweep->add_option("kind", sweep_kind, "lkw or nleb")->required()->check(CLI::IsMember({"lkw", "nleb"}));
  sweep->add_option("--data", sweep_data, "Bundle directory")->required();
  sweep->add_option("--out", sweep_out, "Output directory");
  sweep->add_option("--water", water_spec, "Water reduction axis start:stop:step (lkw)");
  sweep->add_option("--p", p_spec, "P reduction axis start:stop:step (nleb)");
  sweep->add_option("--n", n_spec, "N reduction axis start:stop:step (nleb)");
  sweep->add_option("--water-reduction", sweep_water, "Fixed water cut for an nleb sweep");
  sweep->add_option("--parallel", parallel, "Concurrent solves")->check(CLI::PositiveNumber);
  sweep_flags.add(sweep);

  // gp
  auto* gp = app.add_subcommand("gp", "Run named ESCA weight scenarios");
  std::string gp_data;
  std::optional<std::string> gp_out;
  std::vector<std::string> gp_scenarios;
  SolverFlags gp_flags;
  gp->add_option("--data", gp_data, "ESCA bundle directory")->required();
  gp->add_option("--out", gp_out, "Output directory");
  gp->add_option("--scenarios", gp_scenarios, "Comma-separated scenario names (default: all)")->delimiter(',');
  gp_flags.add(gp);

  // replay
  auto* replay = app.add_subcommand("replay", "Re-run a command from its manifest.json");
  std::string manifest_file;
  std::optional<std::string> replay_out;
  std::size_t replay_parallel = default_parallelism();
  replay->add_option("manifest", manifest_file, "manifest.json of an earlier run")->required();
  replay->add_option("--out", replay_out, "Output directory");
  replay->add_option("--parallel", replay_parallel, "Concurrent solves")->check(CLI::PositiveNumber);

  // serve
  auto* serve = app.add_subcommand("serve", "HTTP re-solve service for an ESCA bundle (no authentication)");
  std::string serve_data, host = "127.0.0.1";
  int port = 8080;
  serve->add_option("--data", serve_data, "ESCA bundle directory")->required();
  serve->add_option("--port", port, "TCP port, 0 for any free port");
  serve->add_option("--host", host, "Bind address");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*solve) {
      json params = json::object();
      if (solve_kind == "lkw") {
        params["water_reduction"] = water;
      } else if (solve_kind == "nleb") {
        params["p_reduction"] = p_red;
        params["n_reduction"] = n_red;
        params["water_reduction"] = water;
        params["v2"] = v2;
        if (elasticity) params["elasticity"] = *elasticity;
        if (fw_iters) params["fw_max_iterations"] = *fw_iters;
      } else {
        json request = json::object();
        if (request_file) request = json::parse(read_file(*request_file));
        if (scenario) request["scenario"] = *scenario;
        params["request"] = request;
      }
      json m{{"command", "solve"}, {"kind", solve_kind}, {"data_dir", solve_data},
             {"parameters", params}, {"solver", solve_flags.to_json()}};
      return finish(m, solve_out, 1);
    }
    if (*sweep) {
      json params = json::object();
      if (sweep_kind == "lkw") {
        if (!water_spec) throw RequestError("sweep lkw needs --water start:stop:step");
        params["water"] = {{"spec", *water_spec}};
      } else {
        if (!p_spec || !n_spec) throw RequestError("sweep nleb needs --p and --n start:stop:step");
        params["p"] = {{"spec", *p_spec}};
        params["n"] = {{"spec", *n_spec}};
        params["water_reduction"] = sweep_water;
      }
      json m{{"command", "sweep"}, {"kind", sweep_kind}, {"data_dir", sweep_data},
             {"parameters", params}, {"solver", sweep_flags.to_json()}};
      return finish(m, sweep_out, parallel);
    }
    if (*gp) {
      json params = json::object();
      if (!gp_scenarios.empty()) params["scenarios"] = gp_scenarios;
      json m{{"command", "gp"}, {"kind", "esca"}, {"data_dir", gp_data},
             {"parameters", params}, {"solver", gp_flags.to_json()}};
      return finish(m, gp_out, 1);
    }
    if (*replay) {
      return finish(json::parse(read_file(manifest_file)), replay_out, replay_parallel);
    }
    if (*serve) {
      EscaService service(load_bundle(ModelKind::esca, serve_data));
      const bool ok = run_server(service, host, port, [&](int bound) {
        std::cout << "serving " << fs::path(serve_data).string() << " on http://" << host << ":" << bound
                  << " (bundle " << service.bundle().content_hash.substr(0, 12) << ")" << std::endl;
      });
      if (!ok) {
        std::cerr << "error: cannot bind " << host << ":" << port << "\n";
        return kExitUsage;
      }
      return 0;
    }
  } catch (const DatasetError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
