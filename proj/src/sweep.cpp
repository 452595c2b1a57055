#include "agriopt/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace agriopt {

namespace {

double parse_double(const std::string& s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

}  // namespace

Axis make_axis(const std::string& name, double start, double stop, double step,
               std::string* warning) {
  if (!std::isfinite(start) || !std::isfinite(stop) || !std::isfinite(step))
    throw std::invalid_argument("axis " + name + ": non-finite value");
  if (!(step > 0.0)) throw std::invalid_argument("axis " + name + ": step must be > 0");
  if (start > stop) throw std::invalid_argument("axis " + name + ": start must be <= stop");
  Axis axis{name, {}};
  const double span = (stop - start) / step;
  const double rounded = std::round(span);
  const bool exact = std::abs(span - rounded) <= 1e-9 * std::max(1.0, rounded);
  const auto count = static_cast<std::size_t>(exact ? rounded : std::floor(span)) + 1;
  for (std::size_t k = 0; k < count; ++k) axis.values.push_back(start + static_cast<double>(k) * step);
  if (exact) axis.values.back() = stop;
  if (!exact && warning)
    *warning = "axis " + name + ": stop is not a whole number of steps from start; last point is " +
               std::to_string(axis.values.back());
  return axis;
}

Axis parse_axis(const std::string& name, const std::string& spec, std::string* warning) {
  const auto a = spec.find(':');
  const auto b = a == std::string::npos ? std::string::npos : spec.find(':', a + 1);
  if (a == std::string::npos || b == std::string::npos || spec.find(':', b + 1) != std::string::npos)
    throw std::invalid_argument("axis " + name + ": expected start:stop:step, got '" + spec + "'");
  return make_axis(name, parse_double(spec.substr(0, a)), parse_double(spec.substr(a + 1, b - a - 1)),
                   parse_double(spec.substr(b + 1)), warning);
}

std::size_t SweepGrid::flat_index(std::span<const std::size_t> idx) const {
  if (idx.size() != axes.size()) throw std::out_of_range("grid index rank mismatch");
  std::size_t flat = 0;
  for (std::size_t k = 0; k < axes.size(); ++k) {
    if (idx[k] >= axes[k].values.size()) throw std::out_of_range("grid index out of range");
    flat = flat * axes[k].values.size() + idx[k];
  }
  return flat;
}

const SweepCell& SweepGrid::at(std::size_t i, std::size_t j) const {
  const std::size_t idx[2] = {i, j};
  return cells.at(flat_index(idx));
}

std::size_t default_parallelism() {
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

SweepGrid run_sweep(const std::vector<Axis>& axes, const CellSolver& solve, const SweepOptions& opts) {
  if (axes.empty()) throw std::invalid_argument("sweep needs at least one axis");
  for (const auto& a : axes) {
    if (a.values.empty()) throw std::invalid_argument("axis " + a.name + " is empty");
    for (double v : a.values)
      if (!std::isfinite(v)) throw std::invalid_argument("axis " + a.name + " has a non-finite value");
  }
  if (opts.parallelism == 0) throw std::invalid_argument("parallelism must be positive");

  SweepGrid grid;
  grid.axes = axes;
  grid.baseline_objective = opts.baseline_objective;
  std::size_t total = 1;
  for (const auto& a : axes) total *= a.values.size();
  grid.cells.resize(total);
  for (std::size_t flat = 0; flat < total; ++flat) {
    auto& cell = grid.cells[flat];
    cell.index.assign(axes.size(), 0);
    cell.coords.assign(axes.size(), 0.0);
    std::size_t rem = flat;
    for (std::size_t k = axes.size(); k-- > 0;) {
      cell.index[k] = rem % axes[k].values.size();
      rem /= axes[k].values.size();
      cell.coords[k] = axes[k].values[cell.index[k]];
    }
  }

  std::vector<std::exception_ptr> errors(total);
  std::vector<std::vector<std::string>> labels(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      auto& cell = grid.cells[i];
      try {
        SolveResult r = solve(cell.coords);
        cell.status = r.status;
        cell.iterations = r.iterations;
        if (r.optimal()) {
          cell.objective = r.objective;
          cell.binding = r.binding_labels();
          cell.x = std::move(r.x);
        }
        labels[i] = std::move(r.variable_labels);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::min(opts.parallelism, total);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  for (auto& l : labels)
    if (!l.empty()) {
      grid.variable_labels = std::move(l);
      break;
    }

  if (opts.baseline_objective != 0.0 && std::isfinite(opts.baseline_objective)) {
    const auto d = delta_utility(grid, opts.baseline_objective);
    for (std::size_t i = 0; i < total; ++i) grid.cells[i].delta_utility = d[i];
  }
  return grid;
}

SweepGrid run_lp_sweep(const std::vector<Axis>& axes, const LpBuilder& build, const SimplexConfig& cfg,
                       const SweepOptions& opts) {
  return run_sweep(axes, [&](std::span<const double> c) { return solve_lp(build(c), cfg); }, opts);
}

std::vector<std::optional<double>> delta_utility(const SweepGrid& grid, double baseline) {
  if (baseline == 0.0 || !std::isfinite(baseline))
    throw std::invalid_argument("delta utility needs a finite non-zero baseline");
  std::vector<std::optional<double>> out(grid.cells.size());
  for (std::size_t i = 0; i < grid.cells.size(); ++i) {
    const auto& c = grid.cells[i];
    if (c.feasible() && c.objective) out[i] = (*c.objective - baseline) / std::abs(baseline);
  }
  return out;
}

std::vector<ContourPoint> breakeven_contour(const SweepGrid& grid) {
  if (grid.axes.size() != 2) throw std::invalid_argument("contour needs a 2-D grid");
  const auto& ax = grid.axes[0].values;
  const auto& ay = grid.axes[1].values;
  std::vector<ContourPoint> pts;
  auto delta = [&](std::size_t i, std::size_t j) -> std::optional<double> {
    const auto& c = grid.at(i, j);
    if (!c.feasible()) return std::nullopt;
    return c.delta_utility;
  };
  auto flat = [&](std::size_t i, std::size_t j) { return i * ay.size() + j; };

  for (std::size_t i = 0; i < ax.size(); ++i)
    for (std::size_t j = 0; j < ay.size(); ++j) {
      const auto d = delta(i, j);
      if (d && *d == 0.0) pts.push_back({ax[i], ay[j], flat(i, j), flat(i, j)});
    }

  auto edge = [&](std::size_t i0, std::size_t j0, std::size_t i1, std::size_t j1) {
    const auto a = delta(i0, j0), b = delta(i1, j1);
    if (!a || !b || !(*a * *b < 0.0)) return;
    const double t = *a / (*a - *b);
    ContourPoint p;
    p.x = ax[i0] + t * (ax[i1] - ax[i0]);
    p.y = ay[j0] + t * (ay[j1] - ay[j0]);
    p.from = *a > 0.0 ? flat(i0, j0) : flat(i1, j1);
    p.to = *a > 0.0 ? flat(i1, j1) : flat(i0, j0);
    pts.push_back(p);
  };
  for (std::size_t i = 0; i < ax.size(); ++i)
    for (std::size_t j = 0; j < ay.size(); ++j) {
      if (i + 1 < ax.size()) edge(i, j, i + 1, j);
      if (j + 1 < ay.size()) edge(i, j, i, j + 1);
    }

  std::sort(pts.begin(), pts.end(), [](const ContourPoint& a, const ContourPoint& b) {
    if (a.x != b.x) return a.x < b.x;
    if (a.y != b.y) return a.y > b.y;
    return a.from < b.from;
  });
  return pts;
}

}  // namespace agriopt
