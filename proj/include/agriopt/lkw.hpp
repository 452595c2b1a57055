#pragma once

// Single-region crop allocation under area, renewable water, fertilizer
// and labour caps, with per-crop minimum areas.

#include <string>
#include <vector>

#include "agriopt/model.hpp"
#include "agriopt/simplex.hpp"
#include "agriopt/sweep.hpp"

namespace agriopt {

inline constexpr std::size_t kLkwCropCount = 18;
inline constexpr std::size_t kLkwIrrigatedCount = 11;
inline constexpr double kLkwMaxWaterReduction = 0.8;
/// Minimum area as a share of the lowest area observed over the last decade.
inline constexpr double kLkwMinAreaShare = 0.5;

struct LkwInstance {
  std::string currency = "EUR";
  std::vector<CropRecord> crops;  // every crop has min_area set
  double total_area = 0.0;        // ha
  double total_water = 0.0;       // m3, renewable water resources
  double total_fertilizer = 0.0;  // kg
  double total_labour = 0.0;      // hr

  bool operator==(const LkwInstance&) const = default;
};

/// Resolves defaults: unset caps come from the baseline plan and unset
/// min_area becomes kLkwMinAreaShare of min_observed_area (or of the
/// baseline area when no history is given).
LkwInstance make_lkw_instance(std::vector<CropRecord> crops, const RegionTotals& totals);

/// Instance invariants. `full_shape` additionally demands 18 crops of which
/// 11 are irrigated.
std::vector<std::string> validate_lkw(const LkwInstance& inst, bool full_shape = false);

LpProblem build_lkw_lp(const LkwInstance& inst, double water_reduction);

double lkw_baseline_profit(const LkwInstance& inst);
std::vector<double> lkw_baseline_areas(const LkwInstance& inst);

SweepGrid sweep_lkw(const LkwInstance& inst, const std::vector<double>& reductions,
                    const SimplexConfig& cfg = {}, std::size_t parallelism = 1);

}  // namespace agriopt
