#include "agriopt/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace agriopt {

std::string_view to_string(PivotRule r) {
  return r == PivotRule::bland ? "bland" : "largest-coefficient";
}

PivotRule parse_pivot_rule(std::string_view s) {
  if (s == "bland") return PivotRule::bland;
  if (s == "largest-coefficient" || s == "dantzig") return PivotRule::largest_coefficient;
  throw std::invalid_argument("unknown pivot rule '" + std::string(s) + "'");
}

std::vector<std::string> validate_config(const SimplexConfig& cfg) {
  std::vector<std::string> out;
  if (!(cfg.feasibility_tol > 0.0)) out.push_back("feasibility_tol must be > 0");
  if (!(cfg.optimality_tol > 0.0)) out.push_back("optimality_tol must be > 0");
  if (cfg.max_iterations == 0) out.push_back("max_iterations must be > 0");
  if (cfg.refactor_interval == 0) out.push_back("refactor_interval must be > 0");
  if (!(cfg.binding_tol > 0.0)) out.push_back("binding_tol must be > 0");
  return out;
}

std::size_t StandardForm::count(ColumnKind k) const {
  return static_cast<std::size_t>(std::count(kind.begin(), kind.end(), k));
}

StandardForm standardize(const LpProblem& p) {
  StandardForm sf;
  const std::size_t n = p.num_variables();
  sf.num_structural = n;
  sf.num_original_rows = p.num_constraints();
  sf.shift = p.lower_bounds;
  sf.objective_sign = p.sense == Sense::minimize ? 1.0 : -1.0;

  struct Row {
    std::vector<double> coef;
    Relation rel;
    double rhs;
    std::string label;
  };
  std::vector<Row> rows;
  rows.reserve(p.num_constraints() + n);
  for (const auto& c : p.constraints) {
    double rhs = c.rhs;
    for (std::size_t j = 0; j < n; ++j) rhs -= c.coefficients[j] * sf.shift[j];
    rows.push_back({c.coefficients, c.relation, rhs, c.label});
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!p.upper_bounds[j]) continue;
    std::vector<double> coef(n, 0.0);
    coef[j] = 1.0;
    const std::string name = j < p.variable_labels.size() ? p.variable_labels[j] : std::to_string(j);
    rows.push_back({std::move(coef), Relation::less_equal, *p.upper_bounds[j] - sf.shift[j],
                    "upper:" + name});
  }

  const std::size_t m = rows.size();
  sf.rows = m;
  sf.row_scale.assign(m, 1.0);
  sf.b.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    auto& r = rows[i];
    double big = 0.0;
    for (double v : r.coef) big = std::max(big, std::abs(v));
    double scale = big > 0.0 ? 1.0 / big : 1.0;
    if (r.rhs * scale < 0.0) {
      scale = -scale;
      if (r.rel == Relation::less_equal)
        r.rel = Relation::greater_equal;
      else if (r.rel == Relation::greater_equal)
        r.rel = Relation::less_equal;
    }
    sf.row_scale[i] = scale;
    for (double& v : r.coef) v *= scale;
    sf.b[i] = r.rhs * scale;
    if (sf.b[i] == 0.0) sf.b[i] = 0.0;  // drop negative zero
    sf.row_labels.push_back(r.label);
  }

  // Column layout: structural, then slack/surplus by row, then artificials by row.
  std::size_t n_logical = 0, n_art = 0;
  for (const auto& r : rows) {
    if (r.rel != Relation::equal) ++n_logical;
    if (r.rel != Relation::less_equal) ++n_art;
  }
  sf.cols = n + n_logical + n_art;
  sf.a.assign(m * sf.cols, 0.0);
  sf.kind.assign(sf.cols, ColumnKind::structural);
  sf.cost.assign(sf.cols, 0.0);
  for (std::size_t j = 0; j < n; ++j) sf.cost[j] = sf.objective_sign * p.objective[j];
  sf.initial_basis.assign(m, 0);
  sf.column_row.assign(sf.cols, m);

  std::size_t next_logical = n, next_art = n + n_logical;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& r = rows[i];
    std::copy(r.coef.begin(), r.coef.end(), sf.a.begin() + static_cast<std::ptrdiff_t>(i * sf.cols));
    switch (r.rel) {
      case Relation::less_equal:
        sf.a[i * sf.cols + next_logical] = 1.0;
        sf.kind[next_logical] = ColumnKind::slack;
        sf.column_row[next_logical] = i;
        sf.initial_basis[i] = next_logical++;
        break;
      case Relation::greater_equal:
        sf.a[i * sf.cols + next_logical] = -1.0;
        sf.kind[next_logical] = ColumnKind::surplus;
        sf.column_row[next_logical++] = i;
        [[fallthrough]];
      case Relation::equal:
        sf.a[i * sf.cols + next_art] = 1.0;
        sf.kind[next_art] = ColumnKind::artificial;
        sf.column_row[next_art] = i;
        sf.initial_basis[i] = next_art++;
        break;
    }
  }
  return sf;
}

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
constexpr double kPivotTol = 1e-9;

enum class PhaseOutcome { optimal, unbounded, iteration_limit };

class Engine {
 public:
  Engine(const StandardForm& sf, const SimplexConfig& cfg)
      : sf_(sf), cfg_(cfg), m_(sf.rows), n_(sf.cols), basis_(sf.initial_basis),
        position_(sf.cols, kNone), bland_(cfg.pivot_rule == PivotRule::bland) {
    for (std::size_t i = 0; i < m_; ++i) position_[basis_[i]] = i;
    refactor();
  }

  PhaseOutcome run(const std::vector<double>& cost, const std::vector<char>& allowed) {
    std::vector<double> y(m_), d(n_), alpha(m_);
    while (true) {
      if (iterations_ >= cfg_.max_iterations) return PhaseOutcome::iteration_limit;
      duals(cost, y);
      for (std::size_t j = 0; j < n_; ++j) d[j] = cost[j];
      for (std::size_t i = 0; i < m_; ++i) {
        if (y[i] == 0.0) continue;
        const double* row = &sf_.a[i * n_];
        for (std::size_t j = 0; j < n_; ++j) d[j] -= y[i] * row[j];
      }

      std::size_t entering = kNone;
      double best = -cfg_.optimality_tol;
      for (std::size_t j = 0; j < n_; ++j) {
        if (!allowed[j] || position_[j] != kNone) continue;
        if (d[j] < best) {
          entering = j;
          if (bland_) break;
          best = d[j];
        }
      }
      if (entering == kNone) return PhaseOutcome::optimal;

      column(entering, alpha);
      std::size_t leave = kNone;
      double theta = 0.0;
      for (std::size_t i = 0; i < m_; ++i) {
        if (alpha[i] <= kPivotTol) continue;
        const double ratio = std::max(xb_[i], 0.0) / alpha[i];
        if (leave == kNone || ratio < theta - 1e-12 * (1.0 + theta)) {
          leave = i;
          theta = ratio;
          continue;
        }
        if (ratio <= theta + 1e-12 * (1.0 + theta)) {
          // Tie: Bland needs the lowest basic index; otherwise prefer the
          // larger pivot element, then the lowest index.
          const bool better =
              bland_ ? basis_[i] < basis_[leave]
                     : (alpha[i] > alpha[leave] ||
                        (alpha[i] == alpha[leave] && basis_[i] < basis_[leave]));
          if (better) {
            leave = i;
            theta = std::min(theta, ratio);
          }
        }
      }
      if (leave == kNone) {
        unbounded_column_ = entering;
        unbounded_alpha_ = alpha;
        return PhaseOutcome::unbounded;
      }

      if (theta <= cfg_.feasibility_tol) {
        ++degenerate_;
        if (!bland_ && degenerate_ > 3 * (m_ + n_)) {
          bland_ = true;
          log_.push_back("switched to Bland's rule after " + std::to_string(degenerate_) +
                         " degenerate pivots");
        }
      }
      pivot(leave, entering, alpha, theta);
    }
  }

  // Pivots basic artificials at zero level out of the basis where possible.
  void drive_out_artificials() {
    std::vector<double> alpha(m_);
    for (std::size_t r = 0; r < m_; ++r) {
      if (sf_.kind[basis_[r]] != ColumnKind::artificial) continue;
      std::size_t pick = kNone;
      double best = kPivotTol;
      for (std::size_t j = 0; j < n_; ++j) {
        if (sf_.kind[j] == ColumnKind::artificial || position_[j] != kNone) continue;
        double v = 0.0;
        for (std::size_t k = 0; k < m_; ++k) v += binv_[r * m_ + k] * sf_.a[k * n_ + j];
        if (std::abs(v) > best) {
          best = std::abs(v);
          pick = j;
        }
      }
      if (pick == kNone) continue;  // redundant row; artificial stays at zero
      column(pick, alpha);
      pivot(r, pick, alpha, xb_[r] / alpha[r]);
    }
  }

  void refactor() {
    // Gauss-Jordan inverse of the basis matrix with partial pivoting.
    std::vector<double> work(m_ * m_);
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t k = 0; k < m_; ++k) work[i * m_ + k] = sf_.a[i * n_ + basis_[k]];
    binv_.assign(m_ * m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) binv_[i * m_ + i] = 1.0;
    for (std::size_t col = 0; col < m_; ++col) {
      std::size_t piv = col;
      for (std::size_t i = col + 1; i < m_; ++i)
        if (std::abs(work[i * m_ + col]) > std::abs(work[piv * m_ + col])) piv = i;
      const double pv = work[piv * m_ + col];
      if (std::abs(pv) < 1e-14) throw std::runtime_error("singular basis during refactorization");
      if (piv != col) {
        for (std::size_t k = 0; k < m_; ++k) {
          std::swap(work[piv * m_ + k], work[col * m_ + k]);
          std::swap(binv_[piv * m_ + k], binv_[col * m_ + k]);
        }
      }
      for (std::size_t k = 0; k < m_; ++k) {
        work[col * m_ + k] /= pv;
        binv_[col * m_ + k] /= pv;
      }
      for (std::size_t i = 0; i < m_; ++i) {
        if (i == col) continue;
        const double f = work[i * m_ + col];
        if (f == 0.0) continue;
        for (std::size_t k = 0; k < m_; ++k) {
          work[i * m_ + k] -= f * work[col * m_ + k];
          binv_[i * m_ + k] -= f * binv_[col * m_ + k];
        }
      }
    }
    xb_.assign(m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      double v = 0.0;
      for (std::size_t k = 0; k < m_; ++k) v += binv_[i * m_ + k] * sf_.b[k];
      xb_[i] = v;
    }
    since_refactor_ = 0;
  }

  void duals(const std::vector<double>& cost, std::vector<double>& y) const {
    std::fill(y.begin(), y.end(), 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      const double cb = cost[basis_[i]];
      if (cb == 0.0) continue;
      for (std::size_t k = 0; k < m_; ++k) y[k] += cb * binv_[i * m_ + k];
    }
  }

  std::vector<double> values() const {
    std::vector<double> x(n_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) x[basis_[i]] = xb_[i];
    return x;
  }

  const std::vector<std::size_t>& basis() const { return basis_; }
  const std::vector<double>& xb() const { return xb_; }
  std::size_t iterations() const { return iterations_; }
  std::vector<std::string>& log() { return log_; }
  std::size_t unbounded_column() const { return unbounded_column_; }
  const std::vector<double>& unbounded_alpha() const { return unbounded_alpha_; }

 private:
  void column(std::size_t j, std::vector<double>& alpha) const {
    for (std::size_t i = 0; i < m_; ++i) {
      double v = 0.0;
      for (std::size_t k = 0; k < m_; ++k) v += binv_[i * m_ + k] * sf_.a[k * n_ + j];
      alpha[i] = v;
    }
  }

  void pivot(std::size_t r, std::size_t q, const std::vector<double>& alpha, double theta) {
    for (std::size_t i = 0; i < m_; ++i)
      if (i != r) xb_[i] -= theta * alpha[i];
    xb_[r] = theta;
    const double pr = alpha[r];
    double* prow = &binv_[r * m_];
    for (std::size_t k = 0; k < m_; ++k) prow[k] /= pr;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r || alpha[i] == 0.0) continue;
      const double f = alpha[i];
      double* row = &binv_[i * m_];
      for (std::size_t k = 0; k < m_; ++k) row[k] -= f * prow[k];
    }
    position_[basis_[r]] = kNone;
    basis_[r] = q;
    position_[q] = r;
    ++iterations_;
    if (++since_refactor_ >= cfg_.refactor_interval) refactor();
  }

  const StandardForm& sf_;
  const SimplexConfig& cfg_;
  std::size_t m_, n_;
  std::vector<std::size_t> basis_;
  std::vector<std::size_t> position_;
  std::vector<double> binv_;
  std::vector<double> xb_;
  std::size_t iterations_ = 0;
  std::size_t since_refactor_ = 0;
  std::size_t degenerate_ = 0;
  bool bland_;
  std::size_t unbounded_column_ = kNone;
  std::vector<double> unbounded_alpha_;
  std::vector<std::string> log_;
};

std::vector<double> normalized(std::vector<double> cost, double& scale) {
  double big = 0.0;
  for (double c : cost) big = std::max(big, std::abs(c));
  scale = big > 0.0 ? big : 1.0;
  for (double& c : cost) c /= scale;
  return cost;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

}  // namespace

double objective_value(const LpProblem& p, std::span<const double> x) {
  double z = 0.0;
  for (std::size_t j = 0; j < p.num_variables(); ++j) z += p.objective[j] * x[j];
  return z;
}

std::vector<ConstraintReport> evaluate_constraints(const LpProblem& p,
                                                   std::span<const double> x,
                                                   const SimplexConfig& cfg) {
  std::vector<ConstraintReport> out;
  out.reserve(p.num_constraints());
  for (const auto& c : p.constraints) {
    ConstraintReport r;
    r.label = c.label;
    for (std::size_t j = 0; j < c.coefficients.size(); ++j) r.activity += c.coefficients[j] * x[j];
    r.slack = c.relation == Relation::greater_equal ? r.activity - c.rhs : c.rhs - r.activity;
    r.binding = std::abs(r.slack) <= cfg.binding_tol * (1.0 + std::abs(c.rhs));
    out.push_back(std::move(r));
  }
  return out;
}

double max_violation(const LpProblem& p, std::span<const double> x) {
  double worst = 0.0;
  for (const auto& c : p.constraints) {
    double act = 0.0;
    for (std::size_t j = 0; j < c.coefficients.size(); ++j) act += c.coefficients[j] * x[j];
    double v = 0.0;
    switch (c.relation) {
      case Relation::less_equal: v = act - c.rhs; break;
      case Relation::greater_equal: v = c.rhs - act; break;
      case Relation::equal: v = std::abs(act - c.rhs); break;
    }
    worst = std::max(worst, v / (1.0 + std::abs(c.rhs)));
  }
  for (std::size_t j = 0; j < p.num_variables(); ++j) {
    worst = std::max(worst, (p.lower_bounds[j] - x[j]) / (1.0 + std::abs(p.lower_bounds[j])));
    if (p.upper_bounds[j])
      worst = std::max(worst, (x[j] - *p.upper_bounds[j]) / (1.0 + std::abs(*p.upper_bounds[j])));
  }
  return worst;
}

SolveResult solve_lp(const LpProblem& p, const SimplexConfig& cfg) {
  if (auto v = validate_problem(p); !v.empty())
    throw std::invalid_argument("invalid LP: " + v.front());
  if (auto v = validate_config(cfg); !v.empty())
    throw std::invalid_argument("invalid simplex config: " + v.front());

  const StandardForm sf = standardize(p);
  const std::size_t n = sf.num_structural;
  SolveResult res;
  res.variable_labels = p.variable_labels;

  Engine eng(sf, cfg);
  auto finish = [&](SolveStatus status) {
    eng.refactor();
    const auto full = eng.values();
    res.x.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      double v = full[j];
      if (v < 0.0 && v > -cfg.feasibility_tol) v = 0.0;
      res.x[j] = v + sf.shift[j];
    }
    res.status = status;
    res.objective = objective_value(p, res.x);
    res.constraints = evaluate_constraints(p, res.x, cfg);
    res.iterations = eng.iterations();
    for (auto& line : eng.log()) res.log.push_back(std::move(line));
    return res;
  };

  double bnorm = 0.0;
  for (double v : sf.b) bnorm = std::max(bnorm, std::abs(v));

  if (sf.needs_phase_one()) {
    std::vector<double> cost1(sf.cols, 0.0);
    for (std::size_t j = 0; j < sf.cols; ++j)
      if (sf.kind[j] == ColumnKind::artificial) cost1[j] = 1.0;
    std::vector<char> all(sf.cols, 1);
    const auto out = eng.run(cost1, all);
    if (out == PhaseOutcome::iteration_limit) {
      res.log.push_back("iteration limit reached in phase 1");
      return finish(SolveStatus::iteration_limit);
    }
    eng.refactor();
    double infeas = 0.0;
    for (std::size_t i = 0; i < sf.rows; ++i) {
      const std::size_t col = eng.basis()[i];
      if (sf.kind[col] != ColumnKind::artificial) continue;
      infeas += std::max(eng.xb()[i], 0.0);
    }
    res.log.push_back("phase 1: " + std::to_string(eng.iterations()) +
                      " pivots, infeasibility " + fmt(infeas));
    if (infeas > cfg.feasibility_tol * (1.0 + bnorm)) {
      for (std::size_t i = 0; i < sf.rows; ++i) {
        const std::size_t col = eng.basis()[i];
        if (sf.kind[col] != ColumnKind::artificial) continue;
        if (eng.xb()[i] <= cfg.feasibility_tol * (1.0 + std::abs(sf.b[i]))) continue;
        res.infeasible_rows.push_back(sf.row_labels[sf.column_row[col]]);
      }
      return finish(SolveStatus::infeasible);
    }
    eng.drive_out_artificials();
  } else {
    res.log.push_back("phase 1 skipped: slack basis is feasible");
  }

  double cscale = 1.0;
  const auto cost2 = normalized(sf.cost, cscale);
  std::vector<char> allowed(sf.cols, 1);
  for (std::size_t j = 0; j < sf.cols; ++j)
    if (sf.kind[j] == ColumnKind::artificial) allowed[j] = 0;
  const auto out = eng.run(cost2, allowed);

  if (out == PhaseOutcome::iteration_limit) {
    res.log.push_back("iteration limit reached in phase 2");
    return finish(SolveStatus::iteration_limit);
  }
  if (out == PhaseOutcome::unbounded) {
    const std::size_t q = eng.unbounded_column();
    const auto& alpha = eng.unbounded_alpha();
    std::vector<double> ray(n, 0.0);
    if (q < n) ray[q] = 1.0;
    for (std::size_t i = 0; i < sf.rows; ++i)
      if (eng.basis()[i] < n) ray[eng.basis()[i]] = -alpha[i];
    double big = 0.0;
    for (double v : ray) big = std::max(big, std::abs(v));
    if (big > 0.0)
      for (double& v : ray) v /= big;
    finish(SolveStatus::unbounded);
    res.ray = std::move(ray);
    std::ostringstream os;
    os << "unbounded: certificate ray [";
    for (std::size_t j = 0; j < n; ++j) os << (j ? ", " : "") << fmt(res.ray[j]);
    os << "]";
    res.log.push_back(os.str());
    return res;
  }

  finish(SolveStatus::optimal);

  std::vector<double> y(sf.rows);
  eng.duals(cost2, y);
  for (std::size_t i = 0; i < sf.num_original_rows; ++i)
    res.constraints[i].dual = sf.objective_sign * y[i] * cscale * sf.row_scale[i];

  const double viol = max_violation(p, res.x);
  res.log.push_back("phase 2: optimal after " + std::to_string(res.iterations) +
                    " pivots, max scaled violation " + fmt(viol));
  return res;
}

}  // namespace agriopt
