#pragma once

// Weighted and lexicographic goal programming reduced to linear programs.

#include <optional>
#include <string>
#include <vector>

#include "agriopt/model.hpp"
#include "agriopt/simplex.hpp"

namespace agriopt {

struct GoalProgram {
  std::vector<std::string> variable_labels;
  std::vector<std::optional<double>> upper_bounds;  // empty = unbounded above
  std::vector<GoalSpec> goals;
  std::vector<Constraint> hard_constraints;
};

std::vector<std::string> validate_goal_program(const GoalProgram& gp);

/// The LP behind a goal program: decision variables first, then one
/// (d_plus, d_minus) pair per goal. Each goal row reads
/// lhs + d_minus - d_plus = target.
struct GpReduction {
  LpProblem lp;
  std::size_t num_decision = 0;
  std::vector<std::size_t> d_plus;   // column of each goal's d_plus
  std::vector<std::size_t> d_minus;  // column of each goal's d_minus
  std::vector<std::size_t> goal_row;
};

/// Minimizes sum(w_plus d_plus + w_minus d_minus) over all goals.
GpReduction reduce_goal_program(const GoalProgram& gp);

/// Distinct priority levels in solve order. Goals without a priority sit at
/// level 1 (the top).
std::vector<int> priority_levels(const GoalProgram& gp);

/// Weighted mode when no goal has a priority; otherwise one LP per level,
/// each fixing the weighted deviation sum reached by the levels above.
/// The returned x holds only the decision variables; goals carries one
/// entry per goal; objective is the weighted deviation total.
SolveResult solve_goal_program(const GoalProgram& gp, const SimplexConfig& cfg = {});

}  // namespace agriopt
