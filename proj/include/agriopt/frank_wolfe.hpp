#pragma once

// Conditional-gradient maximization of a concave function over the
// polytope described by an LpProblem's constraints and bounds.

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "agriopt/model.hpp"
#include "agriopt/simplex.hpp"

namespace agriopt {

struct ConcaveObjective {
  std::function<double(std::span<const double>)> value;
  std::function<std::vector<double>(std::span<const double>)> gradient;
  bool concave = true;  // asserted by the caller, not verified
};

/// f(x) = c.x, handy for checking the linear special case.
ConcaveObjective linear_objective(std::vector<double> c);

struct FrankWolfeConfig {
  std::size_t max_iterations = 500;
  double relative_gap_tol = 1e-4;     // stop when gap <= tol * (1 + |f|)
  double line_search_tol = 1e-10;     // golden-section bracket width on [0, 1]
  SimplexConfig lp{};
  std::optional<std::vector<double>> start;  // feasible starting point
};

struct FrankWolfeResult {
  SolveResult solution;  // objective holds f(x)
  double gap = 0.0;      // grad f(x).(s - x) at the returned x
  std::vector<double> trace;  // f at every accepted iterate, start included
};

/// Maximizes obj over the feasible set of `feasible` (its objective row is
/// ignored). status = optimal iff the duality gap met the tolerance.
FrankWolfeResult solve_fw(const ConcaveObjective& obj, const LpProblem& feasible,
                          const FrankWolfeConfig& cfg = {});

/// Independent gap evaluation: max over the polytope of grad.(s - x).
double frank_wolfe_gap(const ConcaveObjective& obj, const LpProblem& feasible,
                       std::span<const double> x, const SimplexConfig& cfg = {});

}  // namespace agriopt
