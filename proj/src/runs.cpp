#include "agriopt/runs.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "agriopt/csv.hpp"
#include "agriopt/lkw.hpp"
#include "agriopt/nleb.hpp"
#include "agriopt/sweep.hpp"

namespace agriopt {

using nlohmann::json;

json bundle_summary(const DatasetBundle& b) {
  json j;
  j["kind"] = std::string(to_string(b.kind));
  j["content_hash"] = b.content_hash;
  j["file_hashes"] = b.file_hashes;
  j["files"] = b.files;
  json warnings = json::array();
  for (const auto& d : b.report.diagnostics) warnings.push_back(d.to_string());
  j["warnings"] = std::move(warnings);
  if (b.kind == ModelKind::esca) {
    const auto& inst = b.esca();
    j["instance"] = to_json(inst);
    json labels = json::array();
    for (std::size_t i = 0; i < kEscaWeightCount; ++i)
      labels.push_back({{"label", std::string(kEscaWeightLabels[i])},
                        {"description", std::string(kEscaWeightDescriptions[i])},
                        {"min", 0.0},
                        {"max", 1.0}});
    j["weight_labels"] = std::move(labels);
    json rows = json::array();
    for (const auto& r : esca_report_rows()) rows.push_back({{"key", r.key}, {"label", r.label}, {"unit", r.unit}});
    j["report_rows"] = std::move(rows);
    j["units"] = {{"currency", inst.currency},
                  {"budget", inst.currency + "/yr"},
                  {"typical_sale", inst.currency + "/yr"},
                  {"available_area", "ha"},
                  {"max_emission_p", "kg/yr"},
                  {"max_emission_c", "kg/yr"},
                  {"organic_fert_target", "kg/yr"},
                  {"max_chemical", "kg/yr"},
                  {"chemical_required", "kg/yr"},
                  {"water_available", "m3/yr"},
                  {"production_target", "kg/yr"},
                  {"max_heads", "heads"}};
  }
  return j;
}

namespace {

double request_number(const json& v, const std::string& what) {
  if (!v.is_number()) throw RequestError(what + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw RequestError(what + " must be finite");
  return x;
}

std::size_t animal_index(const std::string& name, const std::string& key) {
  for (std::size_t k = 0; k < 3; ++k)
    if (kAnimalNames[k] == name) return k;
  throw RequestError("unknown animal type in target '" + key + "'");
}

}  // namespace

EscaInstance apply_esca_request(const EscaInstance& base, const json& request) {
  if (!request.is_object()) throw RequestError("request must be a JSON object");
  static const std::set<std::string> known{"id", "model", "scenario", "weights", "targets"};
  for (const auto& [key, v] : request.items())
    if (!known.count(key)) throw RequestError("unknown request field '" + key + "'");
  if (request.contains("model") && request["model"] != "esca") throw RequestError("only model 'esca' can be solved here");

  EscaInstance inst = base;
  if (request.contains("scenario") && !request["scenario"].is_null()) {
    if (!request["scenario"].is_string()) throw RequestError("scenario must be a string");
    try {
      inst.weights = find_scenario(base, request["scenario"].get<std::string>()).weights;
    } catch (const std::out_of_range& e) {
      throw RequestError(e.what());
    }
  }
  if (request.contains("weights")) {
    const json& w = request["weights"];
    if (!w.is_object()) throw RequestError("weights must be an object");
    for (const auto& [label, v] : w.items()) {
      auto idx = esca_weight_index(label);
      if (!idx) throw RequestError("unknown weight label '" + label + "'");
      const double x = request_number(v, "weight " + label);
      if (x < 0.0 || x > 1.0) throw RequestError("weight " + label + " = " + format_sig(x) + " is outside [0, 1]");
      inst.weights[*idx] = x;
    }
  }
  if (request.contains("targets")) {
    const json& t = request["targets"];
    if (!t.is_object()) throw RequestError("targets must be an object");
    auto& dst = inst.targets;
    const std::map<std::string, double*> scalar{{"budget", &dst.budget},
                                                {"available_area", &dst.available_area},
                                                {"max_emission_p", &dst.max_emission_p},
                                                {"max_emission_c", &dst.max_emission_c},
                                                {"organic_fert_target", &dst.organic_fert_target},
                                                {"max_chemical", &dst.max_chemical},
                                                {"chemical_required", &dst.chemical_required},
                                                {"water_available", &dst.water_available}};
    for (const auto& [key, v] : t.items()) {
      if (key.rfind("max_heads.", 0) == 0) {
        const auto k = animal_index(key.substr(10), key);
        if (v.is_null()) {
          inst.max_heads[k].reset();
          continue;
        }
        const double x = request_number(v, "target " + key);
        if (x < 0.0) throw RequestError("target " + key + " must be >= 0");
        inst.max_heads[k] = x;
        continue;
      }
      const double x = request_number(v, "target " + key);
      if (x < 0.0) throw RequestError("target " + key + " must be >= 0");
      if (auto it = scalar.find(key); it != scalar.end()) {
        *it->second = x;
      } else if (key.rfind("typical_sale.", 0) == 0) {
        dst.typical_sale[animal_index(key.substr(13), key)] = x;
      } else if (key.rfind("production_target.", 0) == 0) {
        dst.production_target[animal_index(key.substr(18), key)] = x;
      } else {
        throw RequestError("unknown target '" + key + "'");
      }
    }
  }
  if (auto v = validate_esca(inst); !v.empty()) throw RequestError(v.front());
  return inst;
}

json esca_result_json(const std::string& scenario, const WeightVector& weights, const SolveResult& r) {
  json j;
  j["scenario"] = scenario.empty() ? json(nullptr) : json(scenario);
  j["status"] = std::string(to_string(r.status));
  j["weights"] = esca_weights_to_map(weights);
  if (r.optimal()) {
    j["objective"] = r.objective;
    j["heads"] = {{"beef", r.x[0]}, {"dairy", r.x[1]}, {"poultry", r.x[2]}};
    json rows = json::array();
    const auto values = esca_report_values(r);
    const auto& spec = esca_report_rows();
    for (std::size_t i = 0; i < spec.size(); ++i)
      rows.push_back({{"key", spec[i].key}, {"label", spec[i].label}, {"unit", spec[i].unit}, {"value", values[i]}});
    j["report"] = std::move(rows);
    json goals = json::array();
    for (const auto& g : r.goals)
      goals.push_back({{"label", g.label},
                       {"achieved", g.achieved},
                       {"target", g.target},
                       {"d_plus", g.d_plus},
                       {"d_minus", g.d_minus}});
    j["goals"] = std::move(goals);
  } else {
    j["objective"] = nullptr;
    j["heads"] = nullptr;
    j["report"] = json::array();
    j["goals"] = json::array();
  }
  j["binding"] = r.binding_labels();
  j["infeasible_rows"] = r.infeasible_rows;
  j["solve_result"] = to_json(r);
  return j;
}

namespace {

int severity_rank(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return 0;
    case SolveStatus::iteration_limit: return 1;
    case SolveStatus::unbounded: return 2;
    case SolveStatus::infeasible: return 3;
  }
  return 3;
}

SolveStatus worst(SolveStatus a, SolveStatus b) { return severity_rank(a) >= severity_rank(b) ? a : b; }

double param_number(const json& params, const char* key, double fallback) {
  if (!params.contains(key) || params[key].is_null()) return fallback;
  if (!params[key].is_number()) throw RequestError(std::string("parameter ") + key + " must be a number");
  return params[key].get<double>();
}

// Resolves {"spec": "a:b:s"} or {"values": [...]} into an axis and writes the
// resolved values back.
Axis resolve_axis(const std::string& name, json& entry, RunOutcome& out) {
  if (entry.is_string()) entry = json{{"spec", entry}};
  if (!entry.is_object()) throw RequestError("axis " + name + " must be a spec string or an object");
  Axis axis{name, {}};
  if (entry.contains("values")) {
    for (const auto& v : entry["values"]) axis.values.push_back(request_number(v, "axis " + name + " value"));
    if (axis.values.empty()) throw RequestError("axis " + name + " is empty");
  } else if (entry.contains("spec")) {
    std::string warning;
    try {
      axis = parse_axis(name, entry["spec"].get<std::string>(), &warning);
    } catch (const std::invalid_argument& e) {
      throw RequestError(e.what());
    }
    if (!warning.empty()) out.warnings.push_back(warning);
    json values = json::array();
    for (double v : axis.values) values.push_back(v);
    entry["values"] = std::move(values);
  } else {
    throw RequestError("axis " + name + " needs a spec or values");
  }
  return axis;
}

void check_range(const Axis& a, double hi) {
  for (double v : a.values)
    if (v < 0.0 || v > hi + 1e-12)
      throw RequestError("axis " + a.name + " value " + format_sig(v) + " is outside [0, " + format_sig(hi) + "]");
}

std::string fmt_pct(double v) { return format_sig(100.0 * v, 4) + "%"; }

void solve_summary(const SolveResult& r, const std::string& currency, RunOutcome& out) {
  out.summary.push_back("status: " + std::string(to_string(r.status)));
  if (r.optimal()) {
    out.summary.push_back("objective: " + format_sig(r.objective) + " " + currency);
    const auto b = r.binding_labels();
    std::string line = "binding rows:";
    for (std::size_t i = 0; i < b.size() && i < 12; ++i) line += " " + b[i];
    if (b.size() > 12) line += " ... (" + std::to_string(b.size()) + " total)";
    out.summary.push_back(line);
  } else if (!r.infeasible_rows.empty()) {
    std::string line = "violated rows:";
    for (const auto& l : r.infeasible_rows) line += " " + l;
    out.summary.push_back(line);
  }
}

RunOutcome run_solve(const DatasetBundle& b, json& params, const SimplexConfig& cfg) {
  RunOutcome out;
  switch (b.kind) {
    case ModelKind::lkw: {
      const double r = param_number(params, "water_reduction", 0.0);
      if (r < 0.0 || r > kLkwMaxWaterReduction + 1e-12) throw RequestError("water_reduction must lie in [0, 0.8]");
      params["water_reduction"] = r;
      const auto res = solve_lp(build_lkw_lp(b.lkw(), r), cfg);
      out.status = res.status;
      out.files["result.json"] = to_json(res).dump(2) + "\n";
      out.files["result.csv"] = solve_result_csv(res);
      solve_summary(res, b.lkw().currency, out);
      const double base = lkw_baseline_profit(b.lkw());
      out.summary.push_back("baseline objective: " + format_sig(base));
      if (res.optimal() && base != 0.0)
        out.summary.push_back("delta utility: " + fmt_pct((res.objective - base) / std::abs(base)));
      break;
    }
    case ModelKind::nleb: {
      NlebReductions red{param_number(params, "p_reduction", 0.0), param_number(params, "n_reduction", 0.0),
                         param_number(params, "water_reduction", 0.0)};
      for (double v : {red.p, red.n, red.water})
        if (v < 0.0 || v > kNlebMaxReduction + 1e-12) throw RequestError("NLEB reductions must lie in [0, 0.5]");
      params["p_reduction"] = red.p;
      params["n_reduction"] = red.n;
      params["water_reduction"] = red.water;
      const bool v2 = params.value("v2", false);
      params["v2"] = v2;
      const double base = nleb_baseline_profit(b.nleb());
      if (!v2) {
        const auto res = solve_lp(build_nleb_lp(b.nleb(), red), cfg);
        out.status = res.status;
        out.files["result.json"] = to_json(res).dump(2) + "\n";
        out.files["result.csv"] = solve_result_csv(res);
        solve_summary(res, b.nleb().currency, out);
        out.summary.push_back("baseline objective: " + format_sig(base));
        if (res.optimal() && base != 0.0)
          out.summary.push_back("delta utility: " + fmt_pct((res.objective - base) / std::abs(base)));
      } else {
        ElasticityParams e;
        if (params.contains("elasticity") && !params["elasticity"].is_null()) {
          e = default_elasticity(b.nleb(), param_number(params, "elasticity", 0.0));
        } else if (b.elasticity) {
          e = *b.elasticity;
          params["elasticity"] = nullptr;
        } else {
          throw RequestError("the price-responsive model needs elasticity.csv or an elasticity value");
        }
        if (auto v = validate_elasticity(b.nleb(), e); !v.empty()) throw RequestError(v.front());
        FrankWolfeConfig fw;
        fw.lp = cfg;
        fw.max_iterations = static_cast<std::size_t>(param_number(params, "fw_max_iterations", 500));
        fw.relative_gap_tol = param_number(params, "fw_gap_tol", 1e-4);
        params["fw_max_iterations"] = fw.max_iterations;
        params["fw_gap_tol"] = fw.relative_gap_tol;
        const auto res = solve_nleb_v2(b.nleb(), e, red, fw);
        out.status = res.solution.status;
        out.files["result.json"] = to_json(res).dump(2) + "\n";
        out.files["result.csv"] = solve_result_csv(res.solution);
        solve_summary(res.solution, b.nleb().currency, out);
        out.summary.push_back("Frank-Wolfe gap: " + format_sig(res.gap) + " after " +
                              std::to_string(res.solution.iterations) + " iterations");
      }
      break;
    }
    case ModelKind::esca: {
      json request = params.contains("request") ? params["request"] : json::object();
      const EscaInstance inst = apply_esca_request(b.esca(), request);
      params["request"] = request;
      const auto res = solve_esca(inst, cfg);
      out.status = res.status;
      const std::string scenario = request.value("scenario", std::string());
      out.files["result.json"] = esca_result_json(scenario, inst.weights, res).dump(2) + "\n";
      out.files["table.csv"] = esca_table_csv({{scenario.empty() ? "result" : scenario, inst.weights, res}});
      solve_summary(res, inst.currency, out);
      if (res.optimal())
        out.summary.push_back("heads: beef " + format_sig(res.x[0]) + ", dairy " + format_sig(res.x[1]) +
                              ", poultry " + format_sig(res.x[2]));
      break;
    }
  }
  return out;
}

RunOutcome run_sweep_cmd(const DatasetBundle& b, json& params, const SimplexConfig& cfg, std::size_t parallelism,
                         const json& manifest) {
  RunOutcome out;
  SweepGrid grid;
  switch (b.kind) {
    case ModelKind::lkw: {
      if (!params.contains("water")) throw RequestError("an LKW sweep needs a water axis");
      const Axis water = resolve_axis("water_reduction", params["water"], out);
      check_range(water, kLkwMaxWaterReduction);
      if (!std::is_sorted(water.values.begin(), water.values.end()))
        throw RequestError("water axis must be ascending");
      grid = sweep_lkw(b.lkw(), water.values, cfg, parallelism);
      break;
    }
    case ModelKind::nleb: {
      if (!params.contains("p") || !params.contains("n")) throw RequestError("an NLEB sweep needs p and n axes");
      const Axis p = resolve_axis("p_reduction", params["p"], out);
      const Axis n = resolve_axis("n_reduction", params["n"], out);
      check_range(p, kNlebMaxReduction);
      check_range(n, kNlebMaxReduction);
      const double w = param_number(params, "water_reduction", 0.0);
      if (w < 0.0 || w > kNlebMaxReduction + 1e-12) throw RequestError("water_reduction must lie in [0, 0.5]");
      params["water_reduction"] = w;
      grid = sweep_nleb(b.nleb(), p.values, n.values, w, cfg, parallelism);
      break;
    }
    case ModelKind::esca:
      throw RequestError("sweeps are available for lkw and nleb only");
  }
  json m = manifest;
  m["parameters"] = params;
  grid.manifest = m;

  std::size_t feasible = 0;
  for (const auto& c : grid.cells) feasible += c.feasible();
  out.summary.push_back(std::to_string(grid.cells.size()) + " cells, " + std::to_string(feasible) + " feasible");
  out.summary.push_back("baseline objective: " + format_sig(grid.baseline_objective));
  out.files["grid.json"] = to_json(grid).dump(2) + "\n";
  out.files["grid.csv"] = grid_csv(grid);
  if (grid.axes.size() == 1) {
    const std::vector<double> base = b.kind == ModelKind::lkw ? lkw_baseline_areas(b.lkw()) : std::vector<double>{};
    out.files["areas.csv"] = areas_csv(grid, base);
    std::optional<double> last_gain;
    for (const auto& c : grid.cells)
      if (c.delta_utility && *c.delta_utility >= 0.0) last_gain = c.coords[0];
    out.summary.push_back(last_gain ? "largest reduction keeping baseline profit: " + format_sig(*last_gain)
                                    : "no reduction keeps baseline profit");
  } else {
    const auto pts = breakeven_contour(grid);
    out.files["surface.csv"] = surface_csv(grid);
    out.files["contour.csv"] = contour_csv(grid, pts);
    out.files["contour.json"] = to_json(pts).dump(2) + "\n";
    if (pts.empty()) {
      out.summary.push_back("break-even contour: no crossing inside the grid");
    } else {
      double max_x = pts.front().x, max_y = pts.front().y;
      for (const auto& p : pts) {
        max_x = std::max(max_x, p.x);
        max_y = std::max(max_y, p.y);
      }
      out.summary.push_back("break-even contour: " + std::to_string(pts.size()) + " points, max " + grid.axes[0].name +
                            " " + format_sig(max_x) + ", max " + grid.axes[1].name + " " + format_sig(max_y));
    }
  }
  out.status = SolveStatus::optimal;
  return out;
}

RunOutcome run_gp(const DatasetBundle& b, json& params, const SimplexConfig& cfg) {
  if (b.kind != ModelKind::esca) throw RequestError("gp runs on esca bundles only");
  const auto& inst = b.esca();
  std::vector<std::string> names;
  if (params.contains("scenarios")) {
    for (const auto& s : params["scenarios"]) names.push_back(s.get<std::string>());
  } else {
    for (const auto& s : inst.scenarios) names.push_back(s.name);
  }
  if (names.empty()) throw RequestError("no scenarios to run");
  std::vector<NamedWeights> chosen;
  for (const auto& n : names) {
    try {
      chosen.push_back(find_scenario(inst, n));
    } catch (const std::out_of_range& e) {
      throw RequestError(e.what());
    }
  }
  params["scenarios"] = names;
  RunOutcome out;
  const auto results = run_weight_scenarios(inst, chosen, cfg);
  json arr = json::array();
  for (const auto& r : results) {
    arr.push_back(esca_result_json(r.name, r.weights, r.result));
    out.status = worst(out.status, r.result.status);
    std::string line = "scenario " + r.name + ": " + std::string(to_string(r.result.status));
    if (r.result.optimal())
      line += ", Z = " + format_sig(r.result.objective) + ", heads " + format_sig(r.result.x[0]) + " / " +
              format_sig(r.result.x[1]) + " / " + format_sig(r.result.x[2]);
    out.summary.push_back(line);
  }
  out.files["scenarios.json"] = json{{"scenarios", arr}}.dump(2) + "\n";
  out.files["table.csv"] = esca_table_csv(results);
  return out;
}

}  // namespace

RunOutcome execute_manifest(const json& manifest_in, std::size_t parallelism) {
  if (!manifest_in.is_object()) throw RequestError("manifest must be a JSON object");
  for (const char* key : {"command", "kind", "data_dir"})
    if (!manifest_in.contains(key) || !manifest_in[key].is_string())
      throw RequestError(std::string("manifest field '") + key + "' is missing");
  const std::string command = manifest_in["command"].get<std::string>();
  ModelKind kind;
  try {
    kind = parse_model_kind(manifest_in["kind"].get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw RequestError(e.what());
  }
  const std::filesystem::path dir = manifest_in["data_dir"].get<std::string>();
  const DatasetBundle b = load_bundle(kind, dir);
  if (manifest_in.contains("content_hash") && manifest_in["content_hash"] != b.content_hash)
    throw ManifestMismatch("bundle hash mismatch: manifest has " + manifest_in["content_hash"].dump() +
                           ", files hash to \"" + b.content_hash + "\"");

  SimplexConfig cfg;
  try {
    cfg = simplex_config_from_json(manifest_in.value("solver", json::object()));
  } catch (const std::exception& e) {
    throw RequestError(std::string("bad solver settings: ") + e.what());
  }
  if (auto v = validate_config(cfg); !v.empty()) throw RequestError(v.front());

  json m;
  m["tool"] = "agriopt";
  m["command"] = command;
  m["kind"] = std::string(to_string(kind));
  m["data_dir"] = std::filesystem::absolute(dir).lexically_normal().string();
  m["content_hash"] = b.content_hash;
  m["file_hashes"] = b.file_hashes;
  m["solver"] = to_json(cfg);
  json params = manifest_in.value("parameters", json::object());
  if (!params.is_object()) throw RequestError("parameters must be an object");

  RunOutcome out;
  if (command == "solve") {
    out = run_solve(b, params, cfg);
  } else if (command == "sweep") {
    m["parameters"] = params;
    out = run_sweep_cmd(b, params, cfg, parallelism, m);
  } else if (command == "gp") {
    out = run_gp(b, params, cfg);
  } else {
    throw RequestError("unknown command '" + command + "'");
  }
  m["parameters"] = params;
  out.manifest = m;
  for (const auto& d : b.report.diagnostics) out.warnings.push_back(d.to_string());
  return out;
}

}  // namespace agriopt
