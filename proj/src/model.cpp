#include "agriopt/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace agriopt {

std::string_view to_string(Sense s) {
  return s == Sense::maximize ? "maximize" : "minimize";
}

std::string_view to_string(Relation r) {
  switch (r) {
    case Relation::less_equal: return "<=";
    case Relation::equal: return "=";
    case Relation::greater_equal: return ">=";
  }
  return "?";
}

Sense parse_sense(std::string_view s) {
  if (s == "maximize") return Sense::maximize;
  if (s == "minimize") return Sense::minimize;
  throw std::invalid_argument("unknown sense '" + std::string(s) + "'");
}

Relation parse_relation(std::string_view s) {
  if (s == "<=") return Relation::less_equal;
  if (s == "=") return Relation::equal;
  if (s == ">=") return Relation::greater_equal;
  throw std::invalid_argument("unknown relation '" + std::string(s) + "'");
}

std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::unbounded: return "unbounded";
    case SolveStatus::iteration_limit: return "iteration-limit";
  }
  return "?";
}

SolveStatus parse_status(std::string_view s) {
  if (s == "optimal") return SolveStatus::optimal;
  if (s == "infeasible") return SolveStatus::infeasible;
  if (s == "unbounded") return SolveStatus::unbounded;
  if (s == "iteration-limit") return SolveStatus::iteration_limit;
  throw std::invalid_argument("unknown status '" + std::string(s) + "'");
}

std::size_t LpProblem::add_variable(std::string label, double objective_coeff,
                                    double lower, std::optional<double> upper) {
  objective.push_back(objective_coeff);
  lower_bounds.push_back(lower);
  upper_bounds.push_back(upper);
  variable_labels.push_back(std::move(label));
  for (auto& row : constraints) row.coefficients.push_back(0.0);
  return objective.size() - 1;
}

Constraint& LpProblem::add_constraint(std::vector<double> coefficients,
                                      Relation rel, double rhs,
                                      std::string label) {
  constraints.push_back({std::move(coefficients), rel, rhs, std::move(label)});
  return constraints.back();
}

std::vector<std::string> validate_problem(const LpProblem& p) {
  std::vector<std::string> out;
  const std::size_t n = p.num_variables();
  auto var_name = [&](std::size_t j) {
    std::ostringstream os;
    os << "variable " << j;
    if (j < p.variable_labels.size() && !p.variable_labels[j].empty())
      os << " (" << p.variable_labels[j] << ")";
    return os.str();
  };
  auto row_name = [&](std::size_t i) {
    std::ostringstream os;
    os << "row " << i;
    if (!p.constraints[i].label.empty()) os << " (" << p.constraints[i].label << ")";
    return os.str();
  };

  for (std::size_t j = 0; j < n; ++j)
    if (!std::isfinite(p.objective[j]))
      out.push_back("non-finite objective coefficient " + var_name(j));

  if (p.lower_bounds.size() != n)
    out.push_back("lower bound count " + std::to_string(p.lower_bounds.size()) +
                  " != variable count " + std::to_string(n));
  if (p.upper_bounds.size() != n)
    out.push_back("upper bound count " + std::to_string(p.upper_bounds.size()) +
                  " != variable count " + std::to_string(n));
  if (!p.variable_labels.empty() && p.variable_labels.size() != n)
    out.push_back("label count " + std::to_string(p.variable_labels.size()) +
                  " != variable count " + std::to_string(n));

  for (std::size_t j = 0; j < std::min(n, p.lower_bounds.size()); ++j) {
    const double lo = p.lower_bounds[j];
    if (!std::isfinite(lo)) out.push_back("non-finite lower bound " + var_name(j));
    if (j < p.upper_bounds.size() && p.upper_bounds[j]) {
      const double hi = *p.upper_bounds[j];
      if (!std::isfinite(hi))
        out.push_back("non-finite upper bound " + var_name(j));
      else if (std::isfinite(lo) && lo > hi)
        out.push_back("lower bound exceeds upper bound for " + var_name(j));
    }
  }

  for (std::size_t i = 0; i < p.constraints.size(); ++i) {
    const auto& row = p.constraints[i];
    if (row.coefficients.size() != n) {
      out.push_back(row_name(i) + " has " + std::to_string(row.coefficients.size()) +
                    " coefficients, expected " + std::to_string(n));
    }
    if (!std::isfinite(row.rhs)) out.push_back("non-finite rhs " + row_name(i));
    for (std::size_t j = 0; j < row.coefficients.size(); ++j)
      if (!std::isfinite(row.coefficients[j]))
        out.push_back("non-finite coefficient " + row_name(i) + ", " + var_name(j));
  }
  return out;
}

double CropRecord::profit_per_ha() const {
  if (net_profit) return *net_profit;
  if (price && yield && prod_cost) return *price * *yield - *prod_cost;
  return 0.0;
}

double CropRecord::total_fertilizer() const {
  return fertilizer_req[0] + fertilizer_req[1] + fertilizer_req[2];
}

std::vector<std::string> validate_crop(const CropRecord& c) {
  std::vector<std::string> out;
  auto check = [&](std::string_view field, double v) {
    if (!std::isfinite(v))
      out.push_back("crop " + c.id + ": non-finite " + std::string(field));
    else if (v < 0.0)
      out.push_back("crop " + c.id + ": negative " + std::string(field));
  };
  check("water_req", c.water_req);
  for (std::size_t k = 0; k < 3; ++k)
    check("fert_" + std::string(kFertilizerNames[k]), c.fertilizer_req[k]);
  check("labour_req", c.labour_req);
  check("p_export", c.p_export);
  check("n_export", c.n_export);
  check("baseline_area", c.baseline_area);
  if (c.yield) check("yield", *c.yield);
  if (c.price) check("price", *c.price);
  if (c.prod_cost) check("prod_cost", *c.prod_cost);
  if (c.min_observed_area) check("min_observed_area", *c.min_observed_area);
  if (c.min_area) {
    check("min_area", *c.min_area);
    if (*c.min_area > c.baseline_area)
      out.push_back("crop " + c.id + ": min_area exceeds baseline_area");
  }
  if (c.net_profit && !std::isfinite(*c.net_profit))
    out.push_back("crop " + c.id + ": non-finite net_profit");
  if (c.net_profit && c.price && c.yield && c.prod_cost) {
    const double derived = *c.price * *c.yield - *c.prod_cost;
    const double np = *c.net_profit;
    if (std::abs(np - derived) > kProfitConsistencyTol * std::max(1.0, std::abs(np)))
      out.push_back("crop " + c.id +
                    ": net_profit disagrees with price*yield - prod_cost");
  }
  return out;
}

double SubWatershed::baseline_total() const {
  double s = 0.0;
  for (const auto& [id, a] : baseline_areas) s += a;
  return s;
}

std::vector<std::string> validate_subwatershed(const SubWatershed& s) {
  std::vector<std::string> out;
  if (!(s.total_area >= 0.0) || !std::isfinite(s.total_area))
    out.push_back("sub-watershed " + s.id + ": invalid total_area");
  for (const auto& [id, a] : s.baseline_areas)
    if (!(a >= 0.0) || !std::isfinite(a))
      out.push_back("sub-watershed " + s.id + ": invalid baseline area for " + id);
  if (s.baseline_total() > s.total_area * (1.0 + 1e-12))
    out.push_back("sub-watershed " + s.id + ": baseline areas exceed total_area");
  return out;
}

std::vector<std::string> validate_totals(const RegionTotals& t) {
  std::vector<std::string> out;
  auto check = [&](std::string_view name, const std::optional<double>& v) {
    if (v && (!std::isfinite(*v) || *v < 0.0))
      out.push_back("totals: invalid " + std::string(name));
  };
  check("total_area", t.total_area);
  check("total_water", t.total_water);
  check("total_fertilizer", t.total_fertilizer);
  for (std::size_t k = 0; k < 3; ++k)
    check("fertilizer " + std::string(kFertilizerNames[k]), t.fertilizer_by_kind[k]);
  check("total_labour", t.total_labour);
  check("p_cap", t.p_cap);
  check("n_cap", t.n_cap);
  if (!(t.production_min_fraction >= 0.0) ||
      !(t.production_min_fraction <= t.production_max_fraction))
    out.push_back("totals: production fractions must satisfy 0 <= min <= max");
  for (const auto& [id, b] : t.production_bounds)
    if (!(b.first >= 0.0) || !(b.first <= b.second))
      out.push_back("totals: production bounds for " + id + " must satisfy 0 <= min <= max");
  return out;
}

std::vector<std::string> validate_livestock(const LivestockCoefficients& l) {
  std::vector<std::string> out;
  for (std::size_t t = 0; t < 3; ++t) {
    const auto& a = l.animals[t];
    const std::string who(kAnimalNames[t]);
    const std::array<std::pair<std::string_view, double>, 9> fields{{
        {"sale", a.sale},
        {"cost", a.cost},
        {"area_per_head", a.area_per_head},
        {"p_emission", a.p_emission},
        {"c_emission", a.c_emission},
        {"organic_fert", a.organic_fert},
        {"water", a.water},
        {"yield", a.yield},
        {"growth_rate", a.growth_rate},
    }};
    for (const auto& [name, v] : fields)
      if (!std::isfinite(v) || v < 0.0)
        out.push_back(who + ": invalid " + std::string(name));
    if (a.area_per_head != kAreaPerHead[t])
      out.push_back(who + ": area_per_head must be " + std::to_string(kAreaPerHead[t]));
  }
  if (l[Animal::poultry].organic_fert != 0.0)
    out.push_back("poultry: organic_fert applies to beef and dairy only");
  return out;
}

std::vector<std::string> SolveResult::binding_labels() const {
  std::vector<std::string> out;
  for (const auto& c : constraints)
    if (c.binding) out.push_back(c.label);
  return out;
}

}  // namespace agriopt
