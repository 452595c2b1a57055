#include "agriopt/nleb.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace agriopt {

namespace {

std::vector<double> crop_baseline_area(const std::vector<CropRecord>& crops,
                                       const std::vector<SubWatershed>& sws) {
  std::vector<double> area(crops.size(), 0.0);
  for (const auto& sw : sws)
    for (std::size_t c = 0; c < crops.size(); ++c) {
      auto it = sw.baseline_areas.find(crops[c].id);
      if (it != sw.baseline_areas.end()) area[c] += it->second;
    }
  return area;
}

void check_reduction(const char* name, double r) {
  if (!(r >= 0.0) || r > kNlebMaxReduction + 1e-12)
    throw std::out_of_range(std::string(name) + " reduction must lie in [0, 0.5]");
}

double crop_cost(const CropRecord& c) {
  if (c.prod_cost) return *c.prod_cost;
  if (c.price && c.yield && c.net_profit) return *c.price * *c.yield - *c.net_profit;
  throw std::invalid_argument("crop " + c.id + " has no production cost");
}

}  // namespace

NlebInstance make_nleb_instance(std::vector<CropRecord> crops, std::vector<SubWatershed> subwatersheds,
                                const RegionTotals& totals) {
  NlebInstance inst;
  if (!totals.currency.empty()) inst.currency = totals.currency;
  const auto area = crop_baseline_area(crops, subwatersheds);
  double water = 0.0, p = 0.0, n = 0.0;
  std::array<double, 3> fert{};
  for (std::size_t c = 0; c < crops.size(); ++c) {
    water += crops[c].water_req * area[c];
    p += crops[c].p_export * area[c];
    n += crops[c].n_export * area[c];
    for (std::size_t k = 0; k < 3; ++k) fert[k] += crops[c].fertilizer_req[k] * area[c];
  }
  inst.total_water = totals.total_water.value_or(water);
  for (std::size_t k = 0; k < 3; ++k) inst.fertilizer_cap[k] = totals.fertilizer_by_kind[k].value_or(fert[k]);
  inst.baseline_p = totals.p_cap.value_or(p);
  inst.baseline_n = totals.n_cap.value_or(n);
  for (std::size_t c = 0; c < crops.size(); ++c) {
    const double prod = crops[c].yield_or_zero() * area[c];
    auto it = totals.production_bounds.find(crops[c].id);
    if (it != totals.production_bounds.end()) {
      inst.production_min.push_back(it->second.first);
      inst.production_max.push_back(it->second.second);
    } else {
      inst.production_min.push_back(totals.production_min_fraction * prod);
      inst.production_max.push_back(totals.production_max_fraction * prod);
    }
  }
  inst.crops = std::move(crops);
  inst.subwatersheds = std::move(subwatersheds);
  return inst;
}

std::vector<std::string> validate_nleb(const NlebInstance& inst, bool full_shape) {
  std::vector<std::string> out;
  if (inst.crops.empty()) out.push_back("no crops");
  if (inst.subwatersheds.empty()) out.push_back("no sub-watersheds");
  std::map<std::string, std::size_t> index;
  for (std::size_t c = 0; c < inst.crops.size(); ++c) {
    for (auto& v : validate_crop(inst.crops[c])) out.push_back(std::move(v));
    if (!index.emplace(inst.crops[c].id, c).second) out.push_back("duplicate crop id " + inst.crops[c].id);
    if (!inst.crops[c].net_profit && !(inst.crops[c].price && inst.crops[c].yield && inst.crops[c].prod_cost))
      out.push_back("crop " + inst.crops[c].id + ": needs net_profit or price, yield and prod_cost");
  }
  for (const auto& sw : inst.subwatersheds) {
    for (auto& v : validate_subwatershed(sw)) out.push_back(std::move(v));
    for (const auto& [id, a] : sw.baseline_areas)
      if (!index.count(id)) out.push_back("sub-watershed " + sw.id + ": crop " + id + " has no crop record");
  }
  if (inst.production_min.size() != inst.crops.size() || inst.production_max.size() != inst.crops.size()) {
    out.push_back("production bounds do not match the crop list");
    return out;
  }
  if (full_shape) {
    if (inst.crops.size() != kNlebCropCount)
      out.push_back("expected " + std::to_string(kNlebCropCount) + " crops, got " + std::to_string(inst.crops.size()));
    if (inst.subwatersheds.size() != kNlebSubwatershedCount)
      out.push_back("expected " + std::to_string(kNlebSubwatershedCount) + " sub-watersheds, got " +
                    std::to_string(inst.subwatersheds.size()));
  }

  auto within = [](double used, double cap) { return used <= cap + 1e-9 * (1.0 + std::abs(cap)); };
  const auto base = nleb_baseline_production(inst);
  for (std::size_t c = 0; c < inst.crops.size(); ++c) {
    const double lo = inst.production_min[c], hi = inst.production_max[c];
    if (!(lo >= 0.0) || !(lo <= hi)) out.push_back("crop " + inst.crops[c].id + ": bad production window");
    if (!within(lo, base[c]) || !within(base[c], hi))
      out.push_back("crop " + inst.crops[c].id + ": baseline production outside its window");
  }
  const auto area = crop_baseline_area(inst.crops, inst.subwatersheds);
  double water = 0.0, p = 0.0, n = 0.0;
  std::array<double, 3> fert{};
  for (std::size_t c = 0; c < inst.crops.size(); ++c) {
    water += inst.crops[c].water_req * area[c];
    p += inst.crops[c].p_export * area[c];
    n += inst.crops[c].n_export * area[c];
    for (std::size_t k = 0; k < 3; ++k) fert[k] += inst.crops[c].fertilizer_req[k] * area[c];
  }
  if (!within(water, inst.total_water)) out.push_back("baseline exceeds total water use");
  for (std::size_t k = 0; k < 3; ++k)
    if (!within(fert[k], inst.fertilizer_cap[k]))
      out.push_back("baseline exceeds fertilizer cap " + std::string(kFertilizerNames[k]));
  if (!within(p, inst.baseline_p)) out.push_back("baseline exceeds P export cap");
  if (!within(n, inst.baseline_n)) out.push_back("baseline exceeds N export cap");
  return out;
}

std::vector<NlebVariable> nleb_variables(const NlebInstance& inst) {
  std::vector<NlebVariable> vars;
  for (std::size_t d = 0; d < inst.subwatersheds.size(); ++d)
    for (std::size_t c = 0; c < inst.crops.size(); ++c)
      if (inst.subwatersheds[d].allows(inst.crops[c].id)) vars.push_back({d, c});
  return vars;
}

LpProblem build_nleb_lp(const NlebInstance& inst, const NlebReductions& r) {
  check_reduction("P", r.p);
  check_reduction("N", r.n);
  check_reduction("water", r.water);
  if (auto v = validate_nleb(inst); !v.empty()) throw std::invalid_argument("invalid NLEB instance: " + v.front());

  const auto vars = nleb_variables(inst);
  const std::size_t nv = vars.size();
  LpProblem lp;
  lp.sense = Sense::maximize;
  for (const auto& v : vars)
    lp.add_variable(inst.subwatersheds[v.subwatershed].id + "/" + inst.crops[v.crop].id,
                    inst.crops[v.crop].profit_per_ha());

  for (std::size_t d = 0; d < inst.subwatersheds.size(); ++d) {
    std::vector<double> row(nv, 0.0);
    for (std::size_t j = 0; j < nv; ++j)
      if (vars[j].subwatershed == d) row[j] = 1.0;
    lp.add_constraint(std::move(row), Relation::less_equal, inst.subwatersheds[d].total_area,
                      "area:" + inst.subwatersheds[d].id);
  }

  auto regional = [&](auto coef, double rhs, std::string label) {
    std::vector<double> row(nv);
    for (std::size_t j = 0; j < nv; ++j) row[j] = coef(inst.crops[vars[j].crop]);
    lp.add_constraint(std::move(row), Relation::less_equal, rhs, std::move(label));
  };
  regional([](const CropRecord& c) { return c.water_req; }, (1.0 - r.water) * inst.total_water, "water");
  for (std::size_t k = 0; k < 3; ++k)
    regional([k](const CropRecord& c) { return c.fertilizer_req[k]; }, inst.fertilizer_cap[k],
             "fertilizer:" + std::string(kFertilizerNames[k]));
  regional([](const CropRecord& c) { return c.p_export; }, (1.0 - r.p) * inst.baseline_p, "p_export");
  regional([](const CropRecord& c) { return c.n_export; }, (1.0 - r.n) * inst.baseline_n, "n_export");

  for (std::size_t c = 0; c < inst.crops.size(); ++c) {
    const double y = inst.crops[c].yield_or_zero();
    if (y == 0.0) continue;
    std::vector<double> row(nv, 0.0);
    bool any = false;
    for (std::size_t j = 0; j < nv; ++j)
      if (vars[j].crop == c) {
        row[j] = y;
        any = true;
      }
    if (!any) continue;
    lp.add_constraint(row, Relation::greater_equal, inst.production_min[c], "production_min:" + inst.crops[c].id);
    lp.add_constraint(std::move(row), Relation::less_equal, inst.production_max[c],
                      "production_max:" + inst.crops[c].id);
  }
  return lp;
}

std::vector<double> nleb_baseline_x(const NlebInstance& inst) {
  std::vector<double> x;
  for (const auto& v : nleb_variables(inst))
    x.push_back(inst.subwatersheds[v.subwatershed].baseline_areas.at(inst.crops[v.crop].id));
  return x;
}

double nleb_baseline_profit(const NlebInstance& inst) {
  const auto vars = nleb_variables(inst);
  const auto x = nleb_baseline_x(inst);
  double np = 0.0;
  for (std::size_t j = 0; j < vars.size(); ++j) np += inst.crops[vars[j].crop].profit_per_ha() * x[j];
  return np;
}

std::vector<double> nleb_production(const NlebInstance& inst, std::span<const double> x) {
  const auto vars = nleb_variables(inst);
  std::vector<double> area(inst.crops.size(), 0.0);
  for (std::size_t j = 0; j < vars.size(); ++j) area[vars[j].crop] += x[j];
  std::vector<double> prod(inst.crops.size());
  for (std::size_t c = 0; c < inst.crops.size(); ++c) prod[c] = inst.crops[c].yield_or_zero() * area[c];
  return prod;
}

std::vector<double> nleb_baseline_production(const NlebInstance& inst) {
  const auto area = crop_baseline_area(inst.crops, inst.subwatersheds);
  std::vector<double> prod(inst.crops.size());
  for (std::size_t c = 0; c < inst.crops.size(); ++c) prod[c] = inst.crops[c].yield_or_zero() * area[c];
  return prod;
}

SweepGrid sweep_nleb(const NlebInstance& inst, const std::vector<double>& p_axis, const std::vector<double>& n_axis,
                     double water_reduction, const SimplexConfig& cfg, std::size_t parallelism) {
  for (double v : p_axis) check_reduction("P", v);
  for (double v : n_axis) check_reduction("N", v);
  check_reduction("water", water_reduction);
  SweepOptions opts;
  opts.parallelism = parallelism;
  opts.baseline_objective = nleb_baseline_profit(inst);
  return run_lp_sweep(
      {Axis{"p_reduction", p_axis}, Axis{"n_reduction", n_axis}},
      [&](std::span<const double> c) { return build_nleb_lp(inst, {c[0], c[1], water_reduction}); }, cfg, opts);
}

ElasticityParams default_elasticity(const NlebInstance& inst, double elasticity) {
  ElasticityParams e;
  e.baseline_quantity = nleb_baseline_production(inst);
  for (const auto& c : inst.crops) e.baseline_price.push_back(c.price.value_or(0.0));
  e.elasticity.assign(inst.crops.size(), elasticity);
  return e;
}

std::vector<std::string> validate_elasticity(const NlebInstance& inst, const ElasticityParams& e) {
  std::vector<std::string> out;
  const std::size_t n = inst.crops.size();
  if (e.baseline_quantity.size() != n || e.baseline_price.size() != n || e.elasticity.size() != n) {
    out.push_back("elasticity parameters do not match the crop list");
    return out;
  }
  for (std::size_t c = 0; c < n; ++c) {
    const auto& id = inst.crops[c].id;
    if (!(e.elasticity[c] > 1.0) || !std::isfinite(e.elasticity[c]))
      out.push_back("crop " + id + ": elasticity must exceed 1");
    if (!(e.baseline_quantity[c] > 0.0) || !std::isfinite(e.baseline_quantity[c]))
      out.push_back("crop " + id + ": baseline quantity must be positive");
    if (!(e.baseline_price[c] > 0.0) || !std::isfinite(e.baseline_price[c]))
      out.push_back("crop " + id + ": baseline price must be positive");
  }
  return out;
}

NlebV2Problem build_nleb_v2(const NlebInstance& inst, const ElasticityParams& e, const NlebReductions& r) {
  if (auto v = validate_elasticity(inst, e); !v.empty())
    throw std::invalid_argument("invalid elasticity parameters: " + v.front());
  NlebV2Problem out;
  out.constraints = build_nleb_lp(inst, r);

  struct Term {
    std::size_t crop;
    double yield;
    double cost;
  };
  std::vector<Term> terms;
  for (const auto& v : nleb_variables(inst)) {
    const auto& c = inst.crops[v.crop];
    terms.push_back({v.crop, c.yield_or_zero(), crop_cost(c)});
  }
  const std::size_t nc = inst.crops.size();
  auto quantities = [terms, nc](std::span<const double> x) {
    std::vector<double> q(nc, 0.0);
    for (std::size_t j = 0; j < terms.size(); ++j) q[terms[j].crop] += terms[j].yield * x[j];
    return q;
  };

  out.objective.value = [terms, e, quantities](std::span<const double> x) {
    const auto q = quantities(x);
    double f = 0.0;
    for (std::size_t c = 0; c < q.size(); ++c) {
      if (q[c] <= 0.0) continue;
      const double expo = 1.0 - 1.0 / e.elasticity[c];
      f += e.baseline_price[c] * e.baseline_quantity[c] * std::pow(q[c] / e.baseline_quantity[c], expo);
    }
    for (std::size_t j = 0; j < terms.size(); ++j) f -= terms[j].cost * x[j];
    return f;
  };
  out.objective.gradient = [terms, e, quantities](std::span<const double> x) {
    const auto q = quantities(x);
    std::vector<double> marginal(q.size());
    for (std::size_t c = 0; c < q.size(); ++c) {
      const double ratio = std::max(q[c] / e.baseline_quantity[c], 1e-12);
      marginal[c] = e.baseline_price[c] * (1.0 - 1.0 / e.elasticity[c]) * std::pow(ratio, -1.0 / e.elasticity[c]);
    }
    std::vector<double> g(terms.size());
    for (std::size_t j = 0; j < terms.size(); ++j)
      g[j] = terms[j].yield * marginal[terms[j].crop] - terms[j].cost;
    return g;
  };
  out.objective.concave = true;
  return out;
}

FrankWolfeResult solve_nleb_v2(const NlebInstance& inst, const ElasticityParams& e, const NlebReductions& r,
                               FrankWolfeConfig cfg) {
  auto prob = build_nleb_v2(inst, e, r);
  if (!cfg.start) {
    auto base = nleb_baseline_x(inst);
    if (max_violation(prob.constraints, base) <= 1e-9) cfg.start = std::move(base);
  }
  return solve_fw(prob.objective, prob.constraints, cfg);
}

}  // namespace agriopt
