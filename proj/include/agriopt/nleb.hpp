#pragma once

// Multi-sub-watershed crop allocation under area, water, fertilizer and
// nutrient-export caps with a regional production window per crop, plus the
// price-responsive variant where supply moves prices.

#include <array>
#include <string>
#include <vector>

#include "agriopt/frank_wolfe.hpp"
#include "agriopt/model.hpp"
#include "agriopt/simplex.hpp"
#include "agriopt/sweep.hpp"

namespace agriopt {

inline constexpr std::size_t kNlebCropCount = 28;
inline constexpr std::size_t kNlebSubwatershedCount = 274;
inline constexpr double kNlebMaxReduction = 0.5;

struct NlebInstance {
  std::string currency = "CAD";
  std::vector<CropRecord> crops;
  std::vector<SubWatershed> subwatersheds;
  double total_water = 0.0;                 // m3 currently used for irrigation
  std::array<double, 3> fertilizer_cap{};   // kg per kind, regional
  double baseline_p = 0.0;                  // kg exported
  double baseline_n = 0.0;
  std::vector<double> production_min;       // kg per crop
  std::vector<double> production_max;

  bool operator==(const NlebInstance&) const = default;
};

/// Unset caps default to the baseline plan's use; production windows default
/// to the totals' fractions of baseline production.
NlebInstance make_nleb_instance(std::vector<CropRecord> crops, std::vector<SubWatershed> subwatersheds,
                                const RegionTotals& totals);

/// `full_shape` additionally demands 28 crops and 274 sub-watersheds.
std::vector<std::string> validate_nleb(const NlebInstance& inst, bool full_shape = false);

struct NlebReductions {
  double p = 0.0;
  double n = 0.0;
  double water = 0.0;
};

/// Decision variable x_{d,c}, one per allowed (sub-watershed, crop) pair in
/// sub-watershed order, then crop order.
struct NlebVariable {
  std::size_t subwatershed;
  std::size_t crop;
};
std::vector<NlebVariable> nleb_variables(const NlebInstance& inst);

LpProblem build_nleb_lp(const NlebInstance& inst, const NlebReductions& r);

std::vector<double> nleb_baseline_x(const NlebInstance& inst);
double nleb_baseline_profit(const NlebInstance& inst);
std::vector<double> nleb_baseline_production(const NlebInstance& inst);
/// Regional production per crop implied by an allocation.
std::vector<double> nleb_production(const NlebInstance& inst, std::span<const double> x);

SweepGrid sweep_nleb(const NlebInstance& inst, const std::vector<double>& p_axis,
                     const std::vector<double>& n_axis, double water_reduction = 0.0,
                     const SimplexConfig& cfg = {}, std::size_t parallelism = 1);

/// Constant-elasticity inverse supply per crop:
/// price(Q) = baseline_price * (Q / baseline_quantity)^(-1/elasticity).
struct ElasticityParams {
  std::vector<double> baseline_quantity;  // kg
  std::vector<double> baseline_price;     // currency/kg
  std::vector<double> elasticity;         // > 1

  bool operator==(const ElasticityParams&) const = default;
};

/// Baseline production and crop prices with one elasticity for every crop.
ElasticityParams default_elasticity(const NlebInstance& inst, double elasticity);
std::vector<std::string> validate_elasticity(const NlebInstance& inst, const ElasticityParams& e);

struct NlebV2Problem {
  ConcaveObjective objective;
  LpProblem constraints;  // same rows as build_nleb_lp
};

/// f(x) = sum_c [ p0_c Q0_c^(1/eta_c) Q_c(x)^(1 - 1/eta_c) - cost_c sum_d x_{d,c} ]
/// with Q_c(x) = y_c sum_d x_{d,c}. Throws for eta_c <= 1.
NlebV2Problem build_nleb_v2(const NlebInstance& inst, const ElasticityParams& e, const NlebReductions& r);

/// Frank-Wolfe solve of the price-responsive model, started from the
/// baseline plan when it is feasible for the given reductions.
FrankWolfeResult solve_nleb_v2(const NlebInstance& inst, const ElasticityParams& e, const NlebReductions& r,
                               FrankWolfeConfig cfg = {});

}  // namespace agriopt
