#pragma once

// Scenario sweeps: axes of constraint-tightening fractions, parallel cell
// dispatch, delta-utility surfaces and break-even contours.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "agriopt/model.hpp"
#include "agriopt/simplex.hpp"

namespace agriopt {

struct Axis {
  std::string name;
  std::vector<double> values;

  bool operator==(const Axis&) const = default;
};

/// Parses "start:stop:step". The stop value is included when (stop - start)
/// is a whole multiple of step; otherwise the axis ends at the largest
/// start + k*step <= stop and `warning` is set.
Axis parse_axis(const std::string& name, const std::string& spec,
                std::string* warning = nullptr);
Axis make_axis(const std::string& name, double start, double stop, double step,
               std::string* warning = nullptr);

struct SweepCell {
  std::vector<std::size_t> index;
  std::vector<double> coords;
  SolveStatus status = SolveStatus::infeasible;
  std::optional<double> objective;      // unset unless optimal
  std::optional<double> delta_utility;  // unset unless optimal
  std::vector<std::string> binding;
  std::vector<double> x;
  std::size_t iterations = 0;

  bool feasible() const { return status == SolveStatus::optimal; }
  bool operator==(const SweepCell&) const = default;
};

struct SweepGrid {
  std::vector<Axis> axes;
  std::vector<std::string> variable_labels;
  std::vector<SweepCell> cells;  // row-major, first axis outermost
  double baseline_objective = 0.0;
  nlohmann::json manifest = nlohmann::json::object();

  std::size_t flat_index(std::span<const std::size_t> idx) const;
  const SweepCell& at(std::size_t i) const { return cells.at(i); }
  const SweepCell& at(std::size_t i, std::size_t j) const;

  bool operator==(const SweepGrid&) const = default;
};

using CellSolver = std::function<SolveResult(std::span<const double> coords)>;
using LpBuilder = std::function<LpProblem(std::span<const double> coords)>;

struct SweepOptions {
  std::size_t parallelism = 1;
  double baseline_objective = 0.0;
};

/// Solves every cell of the axes' cartesian product. Cells are independent;
/// the grid is identical for any parallelism. Per-cell infeasibility is
/// recorded, never thrown.
SweepGrid run_sweep(const std::vector<Axis>& axes, const CellSolver& solve,
                    const SweepOptions& opts);
SweepGrid run_lp_sweep(const std::vector<Axis>& axes, const LpBuilder& build,
                       const SimplexConfig& cfg, const SweepOptions& opts);

/// (objective - baseline) / |baseline| per cell; unset for non-optimal cells.
/// Throws std::invalid_argument for a zero or non-finite baseline.
std::vector<std::optional<double>> delta_utility(const SweepGrid& grid, double baseline);

struct ContourPoint {
  double x = 0.0;  // first-axis value
  double y = 0.0;  // second-axis value
  std::size_t from = 0;  // cell with delta >= 0
  std::size_t to = 0;    // adjacent cell with delta <= 0

  bool operator==(const ContourPoint&) const = default;
};

/// Zero level set of the delta-utility surface of a 2-D grid, linearly
/// interpolated along edges between feasible neighbours. Points are ordered
/// by first-axis value, then by descending second-axis value.
std::vector<ContourPoint> breakeven_contour(const SweepGrid& grid);

/// Default worker count: hardware concurrency, at least 1.
std::size_t default_parallelism();

}  // namespace agriopt
