#include "agriopt/lkw.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace agriopt {

LkwInstance make_lkw_instance(std::vector<CropRecord> crops, const RegionTotals& totals) {
  LkwInstance inst;
  if (!totals.currency.empty()) inst.currency = totals.currency;
  double area = 0.0, water = 0.0, fert = 0.0, labour = 0.0;
  for (auto& c : crops) {
    area += c.baseline_area;
    water += c.water_req * c.baseline_area;
    fert += c.total_fertilizer() * c.baseline_area;
    labour += c.labour_req * c.baseline_area;
    if (!c.min_area) c.min_area = kLkwMinAreaShare * c.min_observed_area.value_or(c.baseline_area);
  }
  inst.crops = std::move(crops);
  inst.total_area = totals.total_area.value_or(area);
  inst.total_water = totals.total_water.value_or(water);
  inst.total_fertilizer = totals.total_fertilizer.value_or(fert);
  inst.total_labour = totals.total_labour.value_or(labour);
  return inst;
}

std::vector<std::string> validate_lkw(const LkwInstance& inst, bool full_shape) {
  std::vector<std::string> out;
  if (inst.crops.empty()) out.push_back("no crops");
  for (const auto& c : inst.crops) {
    for (auto& v : validate_crop(c)) out.push_back(std::move(v));
    if (!c.min_area) out.push_back("crop " + c.id + ": min_area unresolved");
  }
  for (auto [name, v] : {std::pair{"total_area", inst.total_area}, {"total_water", inst.total_water},
                         {"total_fertilizer", inst.total_fertilizer}, {"total_labour", inst.total_labour}})
    if (!std::isfinite(v) || v < 0.0) out.push_back(std::string("invalid ") + name);

  if (full_shape) {
    if (inst.crops.size() != kLkwCropCount)
      out.push_back("expected " + std::to_string(kLkwCropCount) + " crops, got " +
                    std::to_string(inst.crops.size()));
    const auto irrigated = static_cast<std::size_t>(std::count_if(
        inst.crops.begin(), inst.crops.end(), [](const CropRecord& c) { return c.water_req > 0.0; }));
    if (irrigated != kLkwIrrigatedCount)
      out.push_back("expected " + std::to_string(kLkwIrrigatedCount) + " irrigated crops, got " +
                    std::to_string(irrigated));
  }

  // The baseline plan must satisfy every cap at zero reduction.
  double area = 0.0, water = 0.0, fert = 0.0, labour = 0.0;
  for (const auto& c : inst.crops) {
    area += c.baseline_area;
    water += c.water_req * c.baseline_area;
    fert += c.total_fertilizer() * c.baseline_area;
    labour += c.labour_req * c.baseline_area;
  }
  auto within = [](double used, double cap) { return used <= cap + 1e-9 * (1.0 + std::abs(cap)); };
  if (!within(area, inst.total_area)) out.push_back("baseline exceeds total_area");
  if (!within(water, inst.total_water)) out.push_back("baseline exceeds total_water");
  if (!within(fert, inst.total_fertilizer)) out.push_back("baseline exceeds total_fertilizer");
  if (!within(labour, inst.total_labour)) out.push_back("baseline exceeds total_labour");
  return out;
}

LpProblem build_lkw_lp(const LkwInstance& inst, double water_reduction) {
  if (!(water_reduction >= 0.0) || water_reduction > kLkwMaxWaterReduction + 1e-12)
    throw std::out_of_range("water_reduction must lie in [0, 0.8]");
  if (auto v = validate_lkw(inst); !v.empty()) throw std::invalid_argument("invalid LKW instance: " + v.front());

  LpProblem lp;
  lp.sense = Sense::maximize;
  for (const auto& c : inst.crops) lp.add_variable(c.id, c.profit_per_ha(), *c.min_area);

  const std::size_t n = inst.crops.size();
  std::vector<double> area(n, 1.0), water(n), fert(n), labour(n);
  for (std::size_t i = 0; i < n; ++i) {
    water[i] = inst.crops[i].water_req;
    fert[i] = inst.crops[i].total_fertilizer();
    labour[i] = inst.crops[i].labour_req;
  }
  lp.add_constraint(std::move(area), Relation::less_equal, inst.total_area, "area");
  lp.add_constraint(std::move(water), Relation::less_equal, (1.0 - water_reduction) * inst.total_water, "water");
  lp.add_constraint(std::move(fert), Relation::less_equal, inst.total_fertilizer, "fertilizer");
  lp.add_constraint(std::move(labour), Relation::less_equal, inst.total_labour, "labour");
  return lp;
}

double lkw_baseline_profit(const LkwInstance& inst) {
  double np = 0.0;
  for (const auto& c : inst.crops) np += c.profit_per_ha() * c.baseline_area;
  return np;
}

std::vector<double> lkw_baseline_areas(const LkwInstance& inst) {
  std::vector<double> x;
  for (const auto& c : inst.crops) x.push_back(c.baseline_area);
  return x;
}

SweepGrid sweep_lkw(const LkwInstance& inst, const std::vector<double>& reductions, const SimplexConfig& cfg,
                    std::size_t parallelism) {
  if (reductions.empty()) throw std::invalid_argument("no water reductions given");
  if (!std::is_sorted(reductions.begin(), reductions.end()))
    throw std::invalid_argument("water reductions must be sorted ascending");
  for (double r : reductions)
    if (!(r >= 0.0) || r > kLkwMaxWaterReduction + 1e-12)
      throw std::out_of_range("water reductions must lie in [0, 0.8]");
  SweepOptions opts;
  opts.parallelism = parallelism;
  opts.baseline_objective = lkw_baseline_profit(inst);
  return run_lp_sweep({Axis{"water_reduction", reductions}},
                      [&](std::span<const double> c) { return build_lkw_lp(inst, c[0]); }, cfg, opts);
}

}  // namespace agriopt
