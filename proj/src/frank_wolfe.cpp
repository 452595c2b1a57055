#include "agriopt/frank_wolfe.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace agriopt {

ConcaveObjective linear_objective(std::vector<double> c) {
  ConcaveObjective obj;
  obj.value = [c](std::span<const double> x) {
    double v = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) v += c[j] * x[j];
    return v;
  };
  obj.gradient = [c](std::span<const double>) { return c; };
  return obj;
}

namespace {

LpProblem with_objective(const LpProblem& feasible, std::vector<double> c) {
  LpProblem lp = feasible;
  lp.sense = Sense::maximize;
  lp.objective = std::move(c);
  return lp;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Maximizer of a concave phi on [0, hi] by golden-section search.
double golden_section(const std::function<double(double)>& phi, double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0;
  double a = hi - inv_phi * (hi - lo), b = lo + inv_phi * (hi - lo);
  double fa = phi(a), fb = phi(b);
  while (hi - lo > tol) {
    if (fa < fb) {
      lo = a;
      a = b;
      fa = fb;
      b = lo + inv_phi * (hi - lo);
      fb = phi(b);
    } else {
      hi = b;
      b = a;
      fb = fa;
      a = hi - inv_phi * (hi - lo);
      fa = phi(a);
    }
  }
  return fa >= fb ? a : b;
}

// The iterate as a convex combination of points of the polytope: LP
// vertices plus the starting point. Away steps move weight off the atom
// that looks worst under the current gradient.
struct ActiveSet {
  std::vector<std::vector<double>> atoms;
  std::vector<double> weight;

  std::size_t find_or_add(const std::vector<double>& v) {
    for (std::size_t k = 0; k < atoms.size(); ++k) {
      bool same = true;
      for (std::size_t j = 0; j < v.size() && same; ++j) same = std::abs(atoms[k][j] - v[j]) <= 1e-12 * (1 + std::abs(v[j]));
      if (same) return k;
    }
    atoms.push_back(v);
    weight.push_back(0.0);
    return atoms.size() - 1;
  }
  void drop(std::size_t k) {
    atoms.erase(atoms.begin() + static_cast<std::ptrdiff_t>(k));
    weight.erase(weight.begin() + static_cast<std::ptrdiff_t>(k));
  }
};

}  // namespace

double frank_wolfe_gap(const ConcaveObjective& obj, const LpProblem& feasible,
                       std::span<const double> x, const SimplexConfig& cfg) {
  const auto g = obj.gradient(x);
  const auto sub = solve_lp(with_objective(feasible, g), cfg);
  if (!sub.optimal()) throw std::runtime_error("gap subproblem not optimal");
  return dot(g, sub.x) - dot(g, x);
}

FrankWolfeResult solve_fw(const ConcaveObjective& obj, const LpProblem& feasible,
                          const FrankWolfeConfig& cfg) {
  if (!obj.value || !obj.gradient) throw std::invalid_argument("objective needs value and gradient");
  const std::size_t n = feasible.num_variables();
  FrankWolfeResult out;
  SolveResult& res = out.solution;
  res.variable_labels = feasible.variable_labels;

  std::vector<double> x;
  if (cfg.start) {
    if (cfg.start->size() != n) throw std::invalid_argument("start point has wrong dimension");
    if (max_violation(feasible, *cfg.start) > 1e-7)
      throw std::invalid_argument("start point is infeasible");
    x = *cfg.start;
  } else {
    const auto init = solve_lp(with_objective(feasible, std::vector<double>(n, 0.0)), cfg.lp);
    if (init.status != SolveStatus::optimal) {
      res = init;
      res.log.push_back("no feasible starting point");
      return out;
    }
    x = init.x;
  }

  double fx = obj.value(x);
  out.trace.push_back(fx);
  std::vector<double> dir(n), trial(n);
  res.status = SolveStatus::iteration_limit;
  ActiveSet active;
  active.atoms.push_back(x);
  active.weight.push_back(1.0);

  std::size_t it = 0;
  for (; it < cfg.max_iterations; ++it) {
    const auto g = obj.gradient(x);
    const auto sub = solve_lp(with_objective(feasible, g), cfg.lp);
    if (sub.status == SolveStatus::unbounded) {
      res.status = SolveStatus::unbounded;
      res.ray = sub.ray;
      res.log.push_back("linear subproblem unbounded");
      break;
    }
    if (!sub.optimal()) {
      res.log.push_back("linear subproblem failed: " + std::string(to_string(sub.status)));
      break;
    }
    const double gx = dot(g, x);
    const double gap = std::max(0.0, dot(g, sub.x) - gx);
    out.gap = gap;
    if (gap <= cfg.relative_gap_tol * (1.0 + std::abs(fx))) {
      res.status = SolveStatus::optimal;
      break;
    }

    std::size_t away = 0;
    for (std::size_t k = 1; k < active.atoms.size(); ++k)
      if (dot(g, active.atoms[k]) < dot(g, active.atoms[away])) away = k;
    const double away_gap = gx - dot(g, active.atoms[away]);
    bool fw_step = gap >= away_gap || active.weight[away] >= 1.0;
    auto phi = [&](double gamma) {
      for (std::size_t j = 0; j < n; ++j) trial[j] = x[j] + gamma * dir[j];
      return obj.value(trial);
    };
    double gamma = 0.0, gamma_max = 1.0, fg = fx;
    // An away step off a nearly weightless atom can be too short to register;
    // the plain step is tried next.
    for (int attempt = 0; attempt < 2; ++attempt) {
      gamma_max = 1.0;
      if (fw_step) {
        for (std::size_t j = 0; j < n; ++j) dir[j] = sub.x[j] - x[j];
      } else {
        for (std::size_t j = 0; j < n; ++j) dir[j] = x[j] - active.atoms[away][j];
        gamma_max = active.weight[away] / (1.0 - active.weight[away]);
      }
      gamma = golden_section(phi, gamma_max, cfg.line_search_tol * gamma_max);
      fg = phi(gamma);
      if (const double f1 = phi(gamma_max); f1 >= fg) {
        gamma = gamma_max;
        fg = f1;
      }
      if (fg > fx || fw_step) break;
      fw_step = true;
    }
    if (!(fg > fx)) {
      res.log.push_back("line search made no progress at iteration " + std::to_string(it));
      break;
    }

    if (fw_step) {
      if (gamma >= 1.0) {
        active.atoms = {sub.x};
        active.weight = {1.0};
      } else {
        for (auto& w : active.weight) w *= 1.0 - gamma;
        active.weight[active.find_or_add(sub.x)] += gamma;
      }
    } else {
      for (auto& w : active.weight) w *= 1.0 + gamma;
      active.weight[away] -= gamma;
      if (gamma >= gamma_max || active.weight[away] <= 1e-15) active.drop(away);
    }
    for (std::size_t j = 0; j < n; ++j) x[j] = x[j] + gamma * dir[j];
    fx = obj.value(x);
    out.trace.push_back(fx);
  }

  res.x = x;
  res.objective = fx;
  res.iterations = it;
  res.constraints = evaluate_constraints(feasible, x, cfg.lp);
  std::ostringstream os;
  os.precision(10);
  os << "frank-wolfe: " << it << " iterations, gap " << out.gap << ", f " << fx;
  res.log.push_back(os.str());
  return out;
}

}  // namespace agriopt
