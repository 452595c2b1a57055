#pragma once

#include <random>

#include "agriopt/esca.hpp"

namespace testing {

/// Random livestock instance with heads capped at 300. Targets are scaled
/// lhs values of a random reference herd so every goal is in play; the area
/// cap binds in roughly half of the draws.
inline agriopt::EscaInstance random_esca(std::mt19937_64& rng) {
  using agriopt::kAreaPerHead;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto in = [&](double lo, double hi) { return lo + (hi - lo) * u(rng); };

  agriopt::EscaInstance inst;
  auto& b = inst.coeffs.animals[0];
  auto& d = inst.coeffs.animals[1];
  auto& p = inst.coeffs.animals[2];
  b = {in(500, 2000), in(200, 900), kAreaPerHead[0], in(2, 15), in(50, 200), in(2000, 8000), in(200, 800),
       in(200, 600), in(0.3, 1.0)};
  d = {in(800, 2500), in(300, 1200), kAreaPerHead[1], in(5, 20), in(80, 250), in(5000, 12000), in(400, 1200),
       in(3000, 8000), in(0.5, 1.0)};
  p = {in(2, 10), in(1, 6), kAreaPerHead[2], in(0.01, 0.05), in(0.2, 1.0), 0.0, in(0.1, 0.5), in(1, 4),
       in(0.5, 1.0)};

  std::array<double, 3> herd{in(0, 300), in(0, 300), in(0, 300)};
  auto lhs = [&](auto field) {
    double s = 0;
    for (std::size_t k = 0; k < 3; ++k) s += field(inst.coeffs.animals[k]) * herd[k];
    return s;
  };
  auto scale = [&] { return in(0.6, 1.4); };
  auto& t = inst.targets;
  for (std::size_t k = 0; k < 3; ++k) {
    t.typical_sale[k] = inst.coeffs.animals[k].sale * herd[k] * scale();
    t.production_target[k] = inst.coeffs.animals[k].yield * inst.coeffs.animals[k].growth_rate * herd[k] * scale();
    inst.max_heads[k] = 300.0;
  }
  t.budget = lhs([](const auto& a) { return a.cost; }) * scale();
  t.max_emission_p = lhs([](const auto& a) { return a.p_emission; }) * scale();
  t.max_emission_c = lhs([](const auto& a) { return a.c_emission; }) * scale();
  t.organic_fert_target = lhs([](const auto& a) { return a.organic_fert; }) * scale();
  t.water_available = lhs([](const auto& a) { return a.water; }) * scale();
  t.available_area = in(0.3, 1.6) * lhs([](const auto& a) { return a.area_per_head; }) + 1.0;
  t.max_chemical = in(1000, 5000);
  t.chemical_required = t.max_chemical * in(0.0, 1.0);

  for (auto& w : inst.weights) w = u(rng) < 0.2 ? 0.0 : u(rng);
  return inst;
}

}  // namespace testing
