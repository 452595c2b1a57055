#pragma once

// Domain types shared by the model builders and the solvers.

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace agriopt {

enum class Sense { maximize, minimize };
enum class Relation { less_equal, equal, greater_equal };

std::string_view to_string(Sense s);
std::string_view to_string(Relation r);
Sense parse_sense(std::string_view s);
Relation parse_relation(std::string_view s);

struct Constraint {
  std::vector<double> coefficients;  // dense, one entry per variable
  Relation relation = Relation::less_equal;
  double rhs = 0.0;
  std::string label;

  bool operator==(const Constraint&) const = default;
};

/// Linear program over continuous variables. Rows are dense; every row
/// carries exactly one coefficient per declared variable.
struct LpProblem {
  Sense sense = Sense::maximize;
  std::vector<double> objective;
  std::vector<Constraint> constraints;
  std::vector<double> lower_bounds;
  std::vector<std::optional<double>> upper_bounds;
  std::vector<std::string> variable_labels;

  std::size_t num_variables() const { return objective.size(); }
  std::size_t num_constraints() const { return constraints.size(); }

  /// Appends a variable; existing rows get a zero coefficient for it.
  std::size_t add_variable(std::string label, double objective_coeff,
                           double lower = 0.0,
                           std::optional<double> upper = std::nullopt);

  Constraint& add_constraint(std::vector<double> coefficients, Relation rel,
                             double rhs, std::string label = {});

  bool operator==(const LpProblem&) const = default;
};

/// Empty iff every structural invariant of the problem holds.
std::vector<std::string> validate_problem(const LpProblem& p);

enum class Fertilizer : std::size_t { N = 0, P2O5 = 1, K2O = 2 };
inline constexpr std::array<std::string_view, 3> kFertilizerNames{"N", "P2O5",
                                                                  "K2O"};

struct CropRecord {
  std::string id;
  std::string name;
  std::optional<double> net_profit;  // currency/ha
  double water_req = 0.0;            // m3/ha
  std::array<double, 3> fertilizer_req{};  // kg/ha, indexed by Fertilizer
  double labour_req = 0.0;                 // hr/ha
  std::optional<double> yield;             // kg/ha
  std::optional<double> price;             // currency/kg
  std::optional<double> prod_cost;         // currency/ha
  double p_export = 0.0;                   // kg/ha
  double n_export = 0.0;                   // kg/ha
  std::optional<double> min_area;          // ha
  std::optional<double> min_observed_area; // ha, lowest area of the last decade
  double baseline_area = 0.0;              // ha

  /// net_profit when given, else price*yield - prod_cost (0 when neither).
  double profit_per_ha() const;
  double total_fertilizer() const;
  double yield_or_zero() const { return yield.value_or(0.0); }

  bool operator==(const CropRecord&) const = default;
};

/// Relative agreement tolerance between net_profit and price*yield - cost.
inline constexpr double kProfitConsistencyTol = 1e-9;

std::vector<std::string> validate_crop(const CropRecord& c);

struct SubWatershed {
  std::string id;
  double total_area = 0.0;
  // Allowed crop ids mapped to their baseline area (ha).
  std::map<std::string, double> baseline_areas;

  bool allows(const std::string& crop_id) const {
    return baseline_areas.count(crop_id) != 0;
  }
  double baseline_total() const;

  bool operator==(const SubWatershed&) const = default;
};

std::vector<std::string> validate_subwatershed(const SubWatershed& s);

/// Regional caps as read from a bundle. Unset caps are resolved from the
/// baseline plan by the model that consumes them.
struct RegionTotals {
  std::string currency;
  std::optional<double> total_area;
  std::optional<double> total_water;
  std::optional<double> total_fertilizer;  // single aggregate cap
  std::array<std::optional<double>, 3> fertilizer_by_kind{};
  std::optional<double> total_labour;
  std::optional<double> p_cap;
  std::optional<double> n_cap;
  double production_min_fraction = 0.5;
  double production_max_fraction = 1.5;
  // Explicit per-crop production window (kg), overriding the fractions.
  std::map<std::string, std::pair<double, double>> production_bounds;

  bool operator==(const RegionTotals&) const = default;
};

std::vector<std::string> validate_totals(const RegionTotals& t);

enum class Animal : std::size_t { beef = 0, dairy = 1, poultry = 2 };
inline constexpr std::array<std::string_view, 3> kAnimalNames{"beef", "dairy",
                                                              "poultry"};

struct AnimalCoefficients {
  double sale = 0.0;           // currency/head
  double cost = 0.0;           // currency/head
  double area_per_head = 0.0;  // ha/head
  double p_emission = 0.0;     // kg/head
  double c_emission = 0.0;     // kg/head
  double organic_fert = 0.0;   // kg/head
  double water = 0.0;          // m3/head
  double yield = 0.0;          // kg/head
  double growth_rate = 1.0;    // 1/years

  bool operator==(const AnimalCoefficients&) const = default;
};

/// 2 cows/ha and 100 hens/ha.
inline constexpr std::array<double, 3> kAreaPerHead{0.5, 0.5, 0.01};

struct LivestockCoefficients {
  std::array<AnimalCoefficients, 3> animals{};

  const AnimalCoefficients& operator[](Animal a) const {
    return animals[static_cast<std::size_t>(a)];
  }
  AnimalCoefficients& operator[](Animal a) {
    return animals[static_cast<std::size_t>(a)];
  }

  bool operator==(const LivestockCoefficients&) const = default;
};

std::vector<std::string> validate_livestock(const LivestockCoefficients& l);

/// One goal row: lhs(x) + d_minus - d_plus = target.
struct GoalSpec {
  std::string label;
  std::vector<double> coefficients;
  Relation relation = Relation::equal;  // as the goal is stated
  double target = 0.0;
  double w_plus = 0.0;
  double w_minus = 0.0;
  std::optional<int> priority;  // 1 = highest level

  bool operator==(const GoalSpec&) const = default;
};

enum class SolveStatus { optimal, infeasible, unbounded, iteration_limit };
std::string_view to_string(SolveStatus s);
SolveStatus parse_status(std::string_view s);

struct ConstraintReport {
  std::string label;
  double activity = 0.0;
  double slack = 0.0;  // >= 0 when satisfied (signed residual for '=')
  double dual = 0.0;   // d(objective)/d(rhs)
  bool binding = false;

  bool operator==(const ConstraintReport&) const = default;
};

struct GoalDeviation {
  std::string label;
  double achieved = 0.0;
  double target = 0.0;
  double d_plus = 0.0;
  double d_minus = 0.0;
  double w_plus = 0.0;
  double w_minus = 0.0;

  bool operator==(const GoalDeviation&) const = default;
};

struct SolveResult {
  SolveStatus status = SolveStatus::infeasible;
  std::vector<std::string> variable_labels;
  std::vector<double> x;
  double objective = 0.0;
  std::vector<ConstraintReport> constraints;
  std::vector<GoalDeviation> goals;
  std::size_t iterations = 0;
  std::vector<double> ray;                  // improving direction if unbounded
  std::vector<std::string> infeasible_rows; // rows left violated by phase 1
  std::vector<std::string> log;

  bool optimal() const { return status == SolveStatus::optimal; }
  std::vector<std::string> binding_labels() const;

  bool operator==(const SolveResult&) const = default;
};

}  // namespace agriopt
