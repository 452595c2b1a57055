#pragma once

// Dense two-phase primal simplex (revised form, explicit basis inverse).

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "agriopt/model.hpp"

namespace agriopt {

enum class PivotRule { bland, largest_coefficient };
std::string_view to_string(PivotRule r);
PivotRule parse_pivot_rule(std::string_view s);

struct SimplexConfig {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;  // on reduced costs of the normalized objective
  std::size_t max_iterations = 50'000;
  PivotRule pivot_rule = PivotRule::largest_coefficient;
  std::size_t refactor_interval = 100;
  // A row is reported binding when |slack| <= binding_tol * (1 + |rhs|).
  double binding_tol = 1e-7;

  bool operator==(const SimplexConfig&) const = default;
};

std::vector<std::string> validate_config(const SimplexConfig& cfg);

enum class ColumnKind { structural, slack, surplus, artificial };

/// Internal minimization problem  min cost.x  s.t.  A x = b, x >= 0, b >= 0.
///
/// Structural columns are the original variables shifted by their lower
/// bounds. Finite upper bounds become extra <= rows after the original rows.
/// Each internal row i equals row_scale[i] times the original row, so a
/// negative scale marks a row whose relation was flipped to make b >= 0.
struct StandardForm {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t num_structural = 0;
  std::size_t num_original_rows = 0;
  std::vector<double> a;  // row-major rows x cols
  std::vector<double> b;
  std::vector<double> cost;  // minimization form, unnormalized
  std::vector<ColumnKind> kind;
  std::vector<std::size_t> column_row;     // owning row of a logical column
  std::vector<std::size_t> initial_basis;  // one column per row
  std::vector<double> shift;               // original lower bounds
  std::vector<double> row_scale;
  std::vector<std::string> row_labels;
  double objective_sign = 1.0;  // internal = sign * original objective

  double at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
  std::size_t count(ColumnKind k) const;
  bool needs_phase_one() const { return count(ColumnKind::artificial) > 0; }
};

StandardForm standardize(const LpProblem& p);

/// Solves p; never throws for model-level outcomes (status carries them).
/// Throws std::invalid_argument when validate_problem(p) is non-empty.
SolveResult solve_lp(const LpProblem& p, const SimplexConfig& cfg = {});

/// Row activities, slacks and binding flags of x against p's rows.
std::vector<ConstraintReport> evaluate_constraints(const LpProblem& p,
                                                   std::span<const double> x,
                                                   const SimplexConfig& cfg);

double objective_value(const LpProblem& p, std::span<const double> x);

/// Largest violation of any row or bound by x, scaled by 1/(1+|rhs|).
double max_violation(const LpProblem& p, std::span<const double> x);

}  // namespace agriopt
