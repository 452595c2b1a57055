#pragma once

// Brute-force LP oracle for tiny problems with x >= 0 and no upper bounds.
// Enumerates every basic solution (n active constraints out of rows plus
// nonnegativity) and every extreme ray of the recession cone, so status and
// optimum come from geometry alone, not from any pivoting.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "agriopt/model.hpp"

namespace oracle {

struct VertexResult {
  agriopt::SolveStatus status = agriopt::SolveStatus::infeasible;
  double objective = 0.0;
  std::vector<double> x;
  std::size_t vertices = 0;
};

namespace detail {

// One linear constraint g.x (rel) h, with rel in {<=, =, >=}.
struct Half {
  std::vector<double> g;
  agriopt::Relation rel;
  double h;
};

inline std::optional<std::vector<double>> solve_square(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    if (std::abs(a[piv][c]) < 1e-10) return std::nullopt;
    std::swap(a[piv], a[c]);
    std::swap(b[piv], b[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a[r][c] / a[c][c];
      if (f == 0.0) continue;
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return x;
}

inline bool satisfies(const Half& c, const std::vector<double>& x, double tol) {
  double lhs = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) lhs += c.g[j] * x[j];
  const double t = tol * (1.0 + std::abs(c.h));
  switch (c.rel) {
    case agriopt::Relation::less_equal: return lhs <= c.h + t;
    case agriopt::Relation::greater_equal: return lhs >= c.h - t;
    case agriopt::Relation::equal: return std::abs(lhs - c.h) <= t;
  }
  return false;
}

// Calls visit(point) for every point where `dim` linearly independent members
// of `all` hold with equality and every member of `all` is satisfied.
// `forced` rows are always part of the active set.
template <class Visit>
void enumerate_vertices(const std::vector<Half>& all, const std::vector<std::size_t>& forced, std::size_t dim,
                        double tol, Visit&& visit) {
  const std::size_t m = all.size();
  if (forced.size() > dim) return;
  std::vector<std::size_t> free_idx;
  for (std::size_t i = 0; i < m; ++i)
    if (std::find(forced.begin(), forced.end(), i) == forced.end()) free_idx.push_back(i);
  const std::size_t pick = dim - forced.size();
  if (pick > free_idx.size()) return;
  std::vector<bool> mask(free_idx.size(), false);
  std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(pick), true);
  do {
    std::vector<std::vector<double>> a;
    std::vector<double> b;
    for (auto i : forced) { a.push_back(all[i].g); b.push_back(all[i].h); }
    for (std::size_t k = 0; k < free_idx.size(); ++k)
      if (mask[k]) { a.push_back(all[free_idx[k]].g); b.push_back(all[free_idx[k]].h); }
    auto x = solve_square(a, b);
    if (!x) continue;
    bool ok = true;
    for (const auto& c : all)
      if (!satisfies(c, *x, tol)) { ok = false; break; }
    if (ok) visit(*x);
  } while (std::prev_permutation(mask.begin(), mask.end()));
}

}  // namespace detail

/// Requires zero lower bounds and no upper bounds.
inline VertexResult enumerate_lp(const agriopt::LpProblem& p, double tol = 1e-9) {
  using agriopt::Relation;
  const std::size_t n = p.num_variables();
  const double sign = p.sense == agriopt::Sense::maximize ? 1.0 : -1.0;

  std::vector<detail::Half> region;
  for (const auto& c : p.constraints) region.push_back({c.coefficients, c.relation, c.rhs});
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> e(n, 0.0);
    e[j] = 1.0;
    region.push_back({e, Relation::greater_equal, 0.0});
  }
  // Equalities are not forced into the active set: redundant equality rows
  // would otherwise hide vertices. satisfies() enforces them instead.
  const std::vector<std::size_t> eq_rows;

  VertexResult out;
  double best = -std::numeric_limits<double>::infinity();
  detail::enumerate_vertices(region, eq_rows, n, tol, [&](const std::vector<double>& x) {
    ++out.vertices;
    double f = 0.0;
    for (std::size_t j = 0; j < n; ++j) f += p.objective[j] * x[j];
    if (sign * f > best) {
      best = sign * f;
      out.x = x;
      out.objective = f;
    }
  });
  if (out.vertices == 0) return out;  // pointed region: nonempty iff it has a vertex

  // Recession cone cut by sum(d) = 1: its vertices are the extreme rays.
  std::vector<detail::Half> cone;
  for (const auto& c : p.constraints) cone.push_back({c.coefficients, c.relation, 0.0});
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> e(n, 0.0);
    e[j] = 1.0;
    cone.push_back({e, Relation::greater_equal, 0.0});
  }
  cone.push_back({std::vector<double>(n, 1.0), Relation::equal, 1.0});
  const std::vector<std::size_t> cone_eq{cone.size() - 1};
  bool unbounded = false;
  detail::enumerate_vertices(cone, cone_eq, n, tol, [&](const std::vector<double>& d) {
    double f = 0.0;
    for (std::size_t j = 0; j < n; ++j) f += sign * p.objective[j] * d[j];
    if (f > 1e-9) unbounded = true;
  });
  out.status = unbounded ? agriopt::SolveStatus::unbounded : agriopt::SolveStatus::optimal;
  return out;
}

}  // namespace oracle
