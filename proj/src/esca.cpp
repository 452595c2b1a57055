#include "agriopt/esca.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace agriopt {

namespace {

constexpr int kNone = -1;

struct GoalLayout {
  int w_plus;
  int w_minus;
  Relation relation;
};

// Weight slots for each goal, in kEscaGoalLabels order.
constexpr std::array<GoalLayout, 11> kLayout{{
    {kNone, 0, Relation::greater_equal},
    {kNone, 1, Relation::greater_equal},
    {kNone, 2, Relation::greater_equal},
    {3, kNone, Relation::less_equal},
    {4, kNone, Relation::less_equal},
    {5, kNone, Relation::less_equal},
    {6, 7, Relation::equal},
    {14, kNone, Relation::less_equal},
    {8, 9, Relation::equal},
    {10, 11, Relation::equal},
    {12, 13, Relation::equal},
}};

double weight_at(const WeightVector& w, int slot) { return slot == kNone ? 0.0 : w[static_cast<std::size_t>(slot)]; }

std::size_t goal_index(std::string_view label) {
  for (std::size_t i = 0; i < kEscaGoalLabels.size(); ++i)
    if (kEscaGoalLabels[i] == label) return i;
  throw std::logic_error("unknown goal");
}

}  // namespace

std::optional<std::size_t> esca_weight_index(std::string_view label) {
  for (std::size_t i = 0; i < kEscaWeightLabels.size(); ++i)
    if (kEscaWeightLabels[i] == label) return i;
  return std::nullopt;
}

WeightVector esca_weights_from_map(const std::map<std::string, double>& values, bool require_all,
                                   const WeightVector& base) {
  WeightVector w = base;
  for (const auto& [label, v] : values) {
    auto idx = esca_weight_index(label);
    if (!idx) throw std::invalid_argument("unknown weight label '" + label + "'");
    w[*idx] = v;
  }
  if (require_all)
    for (auto label : kEscaWeightLabels)
      if (!values.count(std::string(label))) throw std::invalid_argument("missing weight '" + std::string(label) + "'");
  return w;
}

std::map<std::string, double> esca_weights_to_map(const WeightVector& w) {
  std::map<std::string, double> out;
  for (std::size_t i = 0; i < w.size(); ++i) out[std::string(kEscaWeightLabels[i])] = w[i];
  return out;
}

std::vector<std::string> validate_esca(const EscaInstance& inst) {
  auto out = validate_livestock(inst.coeffs);
  const auto& t = inst.targets;
  auto check = [&](const std::string& name, double v) {
    if (!std::isfinite(v) || v < 0.0) out.push_back("target " + name + " must be finite and >= 0");
  };
  for (std::size_t k = 0; k < 3; ++k) {
    check("typical_sale." + std::string(kAnimalNames[k]), t.typical_sale[k]);
    check("production_target." + std::string(kAnimalNames[k]), t.production_target[k]);
    if (inst.max_heads[k] && (!std::isfinite(*inst.max_heads[k]) || *inst.max_heads[k] < 0.0))
      out.push_back("max_heads." + std::string(kAnimalNames[k]) + " must be finite and >= 0");
  }
  check("budget", t.budget);
  check("available_area", t.available_area);
  check("max_emission_p", t.max_emission_p);
  check("max_emission_c", t.max_emission_c);
  check("organic_fert_target", t.organic_fert_target);
  check("max_chemical", t.max_chemical);
  check("chemical_required", t.chemical_required);
  check("water_available", t.water_available);

  auto check_weights = [&](const std::string& who, const WeightVector& w) {
    for (std::size_t i = 0; i < w.size(); ++i)
      if (!std::isfinite(w[i]) || w[i] < 0.0)
        out.push_back(who + ": weight " + std::string(kEscaWeightLabels[i]) + " must be finite and >= 0");
  };
  check_weights("active weights", inst.weights);
  std::set<std::string> names;
  for (const auto& s : inst.scenarios) {
    if (s.name.empty()) out.push_back("scenario with an empty name");
    if (!names.insert(s.name).second) out.push_back("duplicate scenario " + s.name);
    check_weights("scenario " + s.name, s.weights);
  }
  if (!inst.default_scenario.empty() && !names.count(inst.default_scenario))
    out.push_back("default scenario " + inst.default_scenario + " is not defined");
  return out;
}

GoalProgram esca_goal_program(const EscaInstance& inst) {
  if (auto v = validate_esca(inst); !v.empty()) throw std::invalid_argument("invalid ESCA instance: " + v.front());
  const auto& c = inst.coeffs.animals;
  const auto& t = inst.targets;
  GoalProgram gp;
  for (std::size_t k = 0; k < 3; ++k) {
    gp.variable_labels.emplace_back(kAnimalNames[k]);
    gp.upper_bounds.push_back(inst.max_heads[k]);
  }

  auto per_animal = [&](auto field) {
    return std::vector<double>{field(c[0]), field(c[1]), field(c[2])};
  };
  std::array<std::vector<double>, 11> coef;
  std::array<double, 11> target{};
  for (std::size_t k = 0; k < 3; ++k) {
    coef[k] = {0.0, 0.0, 0.0};
    coef[k][k] = c[k].sale;
    target[k] = t.typical_sale[k];
    coef[8 + k] = {0.0, 0.0, 0.0};
    coef[8 + k][k] = c[k].yield * c[k].growth_rate;
    target[8 + k] = t.production_target[k];
  }
  coef[3] = per_animal([](const AnimalCoefficients& a) { return a.cost; });
  target[3] = t.budget;
  coef[4] = per_animal([](const AnimalCoefficients& a) { return a.p_emission; });
  target[4] = t.max_emission_p;
  coef[5] = per_animal([](const AnimalCoefficients& a) { return a.c_emission; });
  target[5] = t.max_emission_c;
  coef[6] = per_animal([](const AnimalCoefficients& a) { return a.organic_fert; });
  target[6] = t.organic_fert_target;
  coef[7] = per_animal([](const AnimalCoefficients& a) { return a.water; });
  target[7] = t.water_available;

  for (std::size_t g = 0; g < kEscaGoalLabels.size(); ++g) {
    GoalSpec spec;
    spec.label = std::string(kEscaGoalLabels[g]);
    spec.coefficients = coef[g];
    spec.relation = kLayout[g].relation;
    spec.target = target[g];
    spec.w_plus = weight_at(inst.weights, kLayout[g].w_plus);
    spec.w_minus = weight_at(inst.weights, kLayout[g].w_minus);
    gp.goals.push_back(std::move(spec));
  }

  gp.hard_constraints.push_back({per_animal([](const AnimalCoefficients& a) { return a.area_per_head; }),
                                 Relation::less_equal, t.available_area, "area"});
  // The chemical requirement does not depend on the herd: the row is empty
  // and only its right-hand side decides feasibility.
  gp.hard_constraints.push_back(
      {{0.0, 0.0, 0.0}, Relation::less_equal, t.max_chemical - t.chemical_required, "chemical"});
  return gp;
}

GpReduction build_esca_gp(const EscaInstance& inst) { return reduce_goal_program(esca_goal_program(inst)); }

SolveResult solve_esca(const EscaInstance& inst, const SimplexConfig& cfg) {
  return solve_goal_program(esca_goal_program(inst), cfg);
}

const NamedWeights& find_scenario(const EscaInstance& inst, const std::string& name) {
  for (const auto& s : inst.scenarios)
    if (s.name == name) return s;
  std::string known;
  for (const auto& s : inst.scenarios) known += (known.empty() ? "" : ", ") + s.name;
  throw std::out_of_range("unknown scenario '" + name + "' (known: " + (known.empty() ? "none" : known) + ")");
}

std::vector<ScenarioResult> run_weight_scenarios(const EscaInstance& inst, const std::vector<NamedWeights>& scenarios,
                                                 const SimplexConfig& cfg) {
  std::vector<ScenarioResult> out;
  EscaInstance copy = inst;
  for (const auto& s : scenarios) {
    copy.weights = s.weights;
    out.push_back({s.name, s.weights, solve_esca(copy, cfg)});
  }
  return out;
}

double weighted_deviation(const SolveResult& r, const WeightVector& w) {
  if (r.goals.size() != kEscaGoalLabels.size()) throw std::invalid_argument("not an ESCA result");
  double total = 0.0;
  for (std::size_t g = 0; g < r.goals.size(); ++g)
    total += weight_at(w, kLayout[g].w_plus) * r.goals[g].d_plus + weight_at(w, kLayout[g].w_minus) * r.goals[g].d_minus;
  return total;
}

const std::vector<ReportRow>& esca_report_rows() {
  static const std::vector<ReportRow> rows{
      {"beef_heads", "Beef", "heads"},
      {"dairy_heads", "Dairy", "heads"},
      {"poultry_heads", "Poultry", "heads"},
      {"sales_beef_minus", "Beef sales shortfall", "currency/yr"},
      {"sales_dairy_minus", "Dairy sales shortfall", "currency/yr"},
      {"sales_poultry_minus", "Poultry sales shortfall", "currency/yr"},
      {"cost_plus", "Cost over budget", "currency/yr"},
      {"p_emission_plus", "P emissions over cap", "kg/yr"},
      {"c_emission_plus", "C emissions over cap", "kg/yr"},
      {"organic_fert_plus", "Organic fertilizer over target", "kg/yr"},
      {"organic_fert_minus", "Organic fertilizer under target", "kg/yr"},
      {"prod_beef_plus", "Beef production over target", "kg/yr"},
      {"prod_beef_minus", "Beef production under target", "kg/yr"},
      {"prod_dairy_plus", "Dairy production over target", "kg/yr"},
      {"prod_dairy_minus", "Dairy production under target", "kg/yr"},
      {"prod_poultry_plus", "Poultry production over target", "kg/yr"},
      {"prod_poultry_minus", "Poultry production under target", "kg/yr"},
      {"water_plus", "Water use over availability", "m3/yr"},
  };
  return rows;
}

std::vector<double> esca_report_values(const SolveResult& r) {
  if (r.goals.size() != kEscaGoalLabels.size() || r.x.size() != 3) throw std::invalid_argument("not a solved ESCA result");
  std::vector<double> out(r.x.begin(), r.x.end());
  auto dev = [&](std::string_view goal, bool plus) {
    const auto& g = r.goals[goal_index(goal)];
    return plus ? g.d_plus : g.d_minus;
  };
  out.push_back(dev("sales_beef", false));
  out.push_back(dev("sales_dairy", false));
  out.push_back(dev("sales_poultry", false));
  out.push_back(dev("cost", true));
  out.push_back(dev("p_emission", true));
  out.push_back(dev("c_emission", true));
  out.push_back(dev("organic_fert", true));
  out.push_back(dev("organic_fert", false));
  for (auto g : {"prod_beef", "prod_dairy", "prod_poultry"}) {
    out.push_back(dev(g, true));
    out.push_back(dev(g, false));
  }
  out.push_back(dev("water", true));
  return out;
}

}  // namespace agriopt
