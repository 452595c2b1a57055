#pragma once

// Livestock herd sizing as a weighted goal program over beef, dairy and
// poultry head counts.

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "agriopt/goal_programming.hpp"
#include "agriopt/model.hpp"
#include "agriopt/simplex.hpp"

namespace agriopt {

inline constexpr std::size_t kEscaWeightCount = 15;

/// Deviation weight labels, in their canonical order.
inline constexpr std::array<std::string_view, kEscaWeightCount> kEscaWeightLabels{
    "sales_beef_minus",   "sales_dairy_minus", "sales_poultry_minus", "cost_plus",
    "p_emission_plus",    "c_emission_plus",   "organic_fert_plus",   "organic_fert_minus",
    "prod_beef_plus",     "prod_beef_minus",   "prod_dairy_plus",     "prod_dairy_minus",
    "prod_poultry_plus",  "prod_poultry_minus", "water_plus"};

inline constexpr std::array<std::string_view, kEscaWeightCount> kEscaWeightDescriptions{
    "Beef sales below target",      "Dairy sales below target",      "Poultry sales below target",
    "Cost above budget",            "P emissions above cap",         "C emissions above cap",
    "Organic fertilizer above target", "Organic fertilizer below target",
    "Beef production above target", "Beef production below target", "Dairy production above target",
    "Dairy production below target", "Poultry production above target", "Poultry production below target",
    "Water use above availability"};

using WeightVector = std::array<double, kEscaWeightCount>;

std::optional<std::size_t> esca_weight_index(std::string_view label);

/// Builds a weight vector from label -> value pairs on top of `base`.
/// Unknown labels throw; with `require_all` every label must be present.
WeightVector esca_weights_from_map(const std::map<std::string, double>& values, bool require_all,
                                   const WeightVector& base = {});
std::map<std::string, double> esca_weights_to_map(const WeightVector& w);

struct NamedWeights {
  std::string name;
  WeightVector weights{};

  bool operator==(const NamedWeights&) const = default;
};

struct EscaTargets {
  std::array<double, 3> typical_sale{};  // currency/yr per animal type
  double budget = 0.0;                   // currency/yr
  double available_area = 0.0;           // ha
  double max_emission_p = 0.0;           // kg/yr
  double max_emission_c = 0.0;           // kg/yr
  double organic_fert_target = 0.0;      // kg/yr
  double max_chemical = 0.0;             // kg/yr
  double chemical_required = 0.0;        // kg/yr, exogenous cultivation demand
  double water_available = 0.0;          // m3/yr
  std::array<double, 3> production_target{};  // kg/yr

  bool operator==(const EscaTargets&) const = default;
};

struct EscaInstance {
  std::string currency = "EUR";
  LivestockCoefficients coeffs;
  EscaTargets targets;
  std::array<std::optional<double>, 3> max_heads{};
  WeightVector weights{};            // the active weight vector
  std::vector<NamedWeights> scenarios;
  std::string default_scenario;

  bool operator==(const EscaInstance&) const = default;
};

std::vector<std::string> validate_esca(const EscaInstance& inst);

/// Goal labels in row order.
inline constexpr std::array<std::string_view, 11> kEscaGoalLabels{
    "sales_beef", "sales_dairy", "sales_poultry", "cost",      "p_emission",  "c_emission",
    "organic_fert", "water",     "prod_beef",     "prod_dairy", "prod_poultry"};

GoalProgram esca_goal_program(const EscaInstance& inst);
GpReduction build_esca_gp(const EscaInstance& inst);
SolveResult solve_esca(const EscaInstance& inst, const SimplexConfig& cfg = {});

const NamedWeights& find_scenario(const EscaInstance& inst, const std::string& name);

struct ScenarioResult {
  std::string name;
  WeightVector weights{};
  SolveResult result;

  bool operator==(const ScenarioResult&) const = default;
};

/// One solve per scenario, in the order given.
std::vector<ScenarioResult> run_weight_scenarios(const EscaInstance& inst, const std::vector<NamedWeights>& scenarios,
                                                 const SimplexConfig& cfg = {});

/// Weighted deviation total of a solved plan under another weight vector.
double weighted_deviation(const SolveResult& r, const WeightVector& w);

struct ReportRow {
  std::string key;
  std::string label;
  std::string unit;
};

/// 18 rows: three head counts, then the deviations worth reporting.
const std::vector<ReportRow>& esca_report_rows();
std::vector<double> esca_report_values(const SolveResult& r);

}  // namespace agriopt
