#include "agriopt/goal_programming.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace agriopt {

std::vector<std::string> validate_goal_program(const GoalProgram& gp) {
  std::vector<std::string> out;
  const std::size_t n = gp.variable_labels.size();
  if (!gp.upper_bounds.empty() && gp.upper_bounds.size() != n)
    out.push_back("upper bound count does not match decision variables");
  for (const auto& g : gp.goals) {
    if (g.coefficients.size() != n)
      out.push_back("goal " + g.label + " has wrong coefficient count");
    if (!(g.w_plus >= 0.0) || !std::isfinite(g.w_plus))
      out.push_back("goal " + g.label + ": w_plus must be finite and >= 0");
    if (!(g.w_minus >= 0.0) || !std::isfinite(g.w_minus))
      out.push_back("goal " + g.label + ": w_minus must be finite and >= 0");
    if (!std::isfinite(g.target)) out.push_back("goal " + g.label + ": non-finite target");
    if (g.priority && *g.priority < 1)
      out.push_back("goal " + g.label + ": priority levels start at 1");
  }
  for (const auto& h : gp.hard_constraints)
    if (h.coefficients.size() != n)
      out.push_back("hard constraint " + h.label + " has wrong coefficient count");
  return out;
}

GpReduction reduce_goal_program(const GoalProgram& gp) {
  if (auto v = validate_goal_program(gp); !v.empty())
    throw std::invalid_argument("invalid goal program: " + v.front());
  GpReduction red;
  auto& lp = red.lp;
  lp.sense = Sense::minimize;
  const std::size_t n = gp.variable_labels.size();
  red.num_decision = n;
  for (std::size_t j = 0; j < n; ++j)
    lp.add_variable(gp.variable_labels[j], 0.0, 0.0,
                    gp.upper_bounds.empty() ? std::nullopt : gp.upper_bounds[j]);
  for (const auto& g : gp.goals) {
    red.d_plus.push_back(lp.add_variable("d+:" + g.label, g.w_plus));
    red.d_minus.push_back(lp.add_variable("d-:" + g.label, g.w_minus));
  }
  const std::size_t width = lp.num_variables();
  for (std::size_t i = 0; i < gp.goals.size(); ++i) {
    const auto& g = gp.goals[i];
    std::vector<double> row(width, 0.0);
    std::copy(g.coefficients.begin(), g.coefficients.end(), row.begin());
    row[red.d_plus[i]] = -1.0;
    row[red.d_minus[i]] = 1.0;
    red.goal_row.push_back(lp.num_constraints());
    lp.add_constraint(std::move(row), Relation::equal, g.target, "goal:" + g.label);
  }
  for (const auto& h : gp.hard_constraints) {
    std::vector<double> row(width, 0.0);
    std::copy(h.coefficients.begin(), h.coefficients.end(), row.begin());
    lp.add_constraint(std::move(row), h.relation, h.rhs, h.label);
  }
  return red;
}

std::vector<int> priority_levels(const GoalProgram& gp) {
  std::set<int> levels;
  for (const auto& g : gp.goals) levels.insert(g.priority.value_or(1));
  return {levels.begin(), levels.end()};
}

SolveResult solve_goal_program(const GoalProgram& gp, const SimplexConfig& cfg) {
  GpReduction red = reduce_goal_program(gp);
  const bool lexicographic =
      std::any_of(gp.goals.begin(), gp.goals.end(), [](const GoalSpec& g) { return g.priority.has_value(); });

  SolveResult lp_res;
  std::vector<std::string> notes;
  if (!lexicographic) {
    lp_res = solve_lp(red.lp, cfg);
  } else {
    LpProblem staged = red.lp;
    for (int level : priority_levels(gp)) {
      std::vector<double> obj(staged.num_variables(), 0.0);
      for (std::size_t i = 0; i < gp.goals.size(); ++i) {
        if (gp.goals[i].priority.value_or(1) != level) continue;
        obj[red.d_plus[i]] = gp.goals[i].w_plus;
        obj[red.d_minus[i]] = gp.goals[i].w_minus;
      }
      staged.objective = obj;
      lp_res = solve_lp(staged, cfg);
      notes.push_back("priority level " + std::to_string(level) + ": " +
                      std::string(to_string(lp_res.status)) + ", weighted deviation " +
                      std::to_string(lp_res.objective));
      if (!lp_res.optimal()) break;
      const double cap = lp_res.objective + 1e-9 * (1.0 + std::abs(lp_res.objective));
      staged.add_constraint(obj, Relation::less_equal, cap, "priority:" + std::to_string(level));
    }
  }

  SolveResult res;
  res.status = lp_res.status;
  res.iterations = lp_res.iterations;
  res.log = std::move(notes);
  for (auto& l : lp_res.log) res.log.push_back(std::move(l));
  res.infeasible_rows = lp_res.infeasible_rows;
  res.variable_labels = gp.variable_labels;
  res.constraints.assign(lp_res.constraints.begin(),
                         lp_res.constraints.begin() +
                             static_cast<std::ptrdiff_t>(std::min(lp_res.constraints.size(),
                                                                  red.lp.num_constraints())));
  if (!lp_res.ray.empty()) res.ray.assign(lp_res.ray.begin(), lp_res.ray.begin() + static_cast<std::ptrdiff_t>(red.num_decision));
  if (lp_res.x.size() >= red.lp.num_variables()) {
    res.x.assign(lp_res.x.begin(), lp_res.x.begin() + static_cast<std::ptrdiff_t>(red.num_decision));
    double total = 0.0;
    for (std::size_t i = 0; i < gp.goals.size(); ++i) {
      const auto& g = gp.goals[i];
      GoalDeviation dev;
      dev.label = g.label;
      dev.target = g.target;
      dev.w_plus = g.w_plus;
      dev.w_minus = g.w_minus;
      for (std::size_t j = 0; j < red.num_decision; ++j) dev.achieved += g.coefficients[j] * res.x[j];
      dev.d_plus = lp_res.x[red.d_plus[i]];
      dev.d_minus = lp_res.x[red.d_minus[i]];
      total += g.w_plus * dev.d_plus + g.w_minus * dev.d_minus;
      res.goals.push_back(std::move(dev));
    }
    res.objective = total;
  }
  for (const auto& g : gp.goals)
    if (g.w_plus == 0.0 && g.w_minus == 0.0) res.log.push_back("goal " + g.label + " is unpenalized");
  return res;
}

}  // namespace agriopt
