#pragma once

// Exhaustive 1-head grid search for the livestock goal program. Goal rows are
// rebuilt here from the raw coefficients rather than taken from the library.
// For each (beef, dairy) pair the objective is convex piecewise linear in the
// poultry count, so the integer minimum over poultry is found by bisection on
// forward differences, which equals scanning every poultry value.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "agriopt/esca.hpp"

namespace oracle {

struct GoalRow {
  std::array<double, 3> a{};
  double target = 0.0;
  double w_plus = 0.0;
  double w_minus = 0.0;
};

inline std::vector<GoalRow> esca_rows(const agriopt::EscaInstance& inst) {
  const auto& w = inst.weights;
  const auto& t = inst.targets;
  auto per = [&](auto field) {
    std::array<double, 3> a{};
    for (std::size_t k = 0; k < 3; ++k) a[k] = field(inst.coeffs.animals[k]);
    return a;
  };
  std::vector<GoalRow> rows;
  for (std::size_t k = 0; k < 3; ++k) {
    GoalRow r;
    r.a[k] = inst.coeffs.animals[k].sale;
    r.target = t.typical_sale[k];
    r.w_minus = w[k];
    rows.push_back(r);
  }
  rows.push_back({per([](const auto& c) { return c.cost; }), t.budget, w[3], 0.0});
  rows.push_back({per([](const auto& c) { return c.p_emission; }), t.max_emission_p, w[4], 0.0});
  rows.push_back({per([](const auto& c) { return c.c_emission; }), t.max_emission_c, w[5], 0.0});
  rows.push_back({per([](const auto& c) { return c.organic_fert; }), t.organic_fert_target, w[6], w[7]});
  rows.push_back({per([](const auto& c) { return c.water; }), t.water_available, w[14], 0.0});
  for (std::size_t k = 0; k < 3; ++k) {
    GoalRow r;
    r.a[k] = inst.coeffs.animals[k].yield * inst.coeffs.animals[k].growth_rate;
    r.target = t.production_target[k];
    r.w_plus = w[8 + 2 * k];
    r.w_minus = w[9 + 2 * k];
    rows.push_back(r);
  }
  return rows;
}

inline double esca_penalty(const std::vector<GoalRow>& rows, const std::array<double, 3>& x) {
  double z = 0.0;
  for (const auto& r : rows) {
    const double lhs = r.a[0] * x[0] + r.a[1] * x[1] + r.a[2] * x[2];
    z += r.w_plus * std::max(0.0, lhs - r.target) + r.w_minus * std::max(0.0, r.target - lhs);
  }
  return z;
}

/// Objective change bound for moving every head count by at most one.
inline double esca_lipschitz_step(const std::vector<GoalRow>& rows) {
  double l = 0.0;
  for (const auto& r : rows)
    l += std::max(r.w_plus, r.w_minus) * (std::abs(r.a[0]) + std::abs(r.a[1]) + std::abs(r.a[2]));
  return l;
}

struct GridResult {
  bool feasible = false;
  double objective = std::numeric_limits<double>::infinity();
  std::array<double, 3> heads{};
};

/// Heads in {0, 1, ..., cap} with cap = max_heads or `default_cap`, subject to
/// the area row. The chemical row involves no decision variable.
inline GridResult esca_grid_search(const agriopt::EscaInstance& inst, std::int64_t default_cap = 300) {
  GridResult out;
  if (inst.targets.chemical_required > inst.targets.max_chemical) return out;
  const auto rows = esca_rows(inst);
  std::array<std::int64_t, 3> cap{};
  std::array<double, 3> aph{};
  for (std::size_t k = 0; k < 3; ++k) {
    cap[k] = inst.max_heads[k] ? static_cast<std::int64_t>(std::floor(*inst.max_heads[k])) : default_cap;
    aph[k] = inst.coeffs.animals[k].area_per_head;
  }
  const double area = inst.targets.available_area;
  std::vector<double> base(rows.size());
  for (std::int64_t b = 0; b <= cap[0]; ++b) {
    for (std::int64_t d = 0; d <= cap[1]; ++d) {
      const double used = aph[0] * b + aph[1] * d;
      if (used > area * (1 + 1e-12)) break;
      std::int64_t pmax = cap[2];
      if (aph[2] > 0) pmax = std::min<std::int64_t>(pmax, static_cast<std::int64_t>(std::floor((area - used) / aph[2] + 1e-9)));
      if (pmax < 0) continue;
      for (std::size_t r = 0; r < rows.size(); ++r) base[r] = rows[r].a[0] * b + rows[r].a[1] * d;
      auto g = [&](std::int64_t p) {
        double z = 0.0;
        for (std::size_t r = 0; r < rows.size(); ++r) {
          const double lhs = base[r] + rows[r].a[2] * double(p);
          z += rows[r].w_plus * std::max(0.0, lhs - rows[r].target) +
               rows[r].w_minus * std::max(0.0, rows[r].target - lhs);
        }
        return z;
      };
      std::int64_t lo = 0, hi = pmax;
      while (lo < hi) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        if (g(mid + 1) < g(mid)) lo = mid + 1;
        else hi = mid;
      }
      const double z = g(lo);
      if (z < out.objective) {
        out.feasible = true;
        out.objective = z;
        out.heads = {double(b), double(d), double(lo)};
      }
    }
  }
  return out;
}

}  // namespace oracle
