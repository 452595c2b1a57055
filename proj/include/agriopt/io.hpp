#pragma once

// Dataset bundles on disk, validation diagnostics, and result export.

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "agriopt/esca.hpp"
#include "agriopt/frank_wolfe.hpp"
#include "agriopt/lkw.hpp"
#include "agriopt/model.hpp"
#include "agriopt/nleb.hpp"
#include "agriopt/sweep.hpp"

namespace agriopt {

enum class ModelKind { lkw, nleb, esca };
std::string_view to_string(ModelKind k);
ModelKind parse_model_kind(std::string_view s);

enum class Severity { warning, error };

struct Diagnostic {
  std::string file;
  std::size_t line = 0;    // 1-based; 0 when the problem is not tied to a line
  std::size_t column = 0;  // 1-based CSV column; 0 when not applicable
  Severity severity = Severity::error;
  std::string message;

  std::string to_string() const;  // "file:line:col: error: message"
  bool operator==(const Diagnostic&) const = default;
};

struct ValidationReport {
  std::vector<Diagnostic> diagnostics;

  bool ok() const;
  std::size_t error_count() const;
  std::size_t warning_count() const;
  bool operator==(const ValidationReport&) const = default;
};

class DatasetError : public std::runtime_error {
 public:
  explicit DatasetError(std::vector<Diagnostic> diags);
  const std::vector<Diagnostic>& diagnostics() const { return diags_; }

 private:
  std::vector<Diagnostic> diags_;
};

using ModelInstance = std::variant<LkwInstance, NlebInstance, EscaInstance>;

struct DatasetBundle {
  ModelKind kind = ModelKind::lkw;
  std::filesystem::path directory;
  std::vector<std::string> files;  // names relative to directory, sorted
  ModelInstance instance;
  ValidationReport report;  // warnings only; errors abort loading
  std::string content_hash;
  std::map<std::string, std::string> file_hashes;
  std::optional<ElasticityParams> elasticity;  // nleb with elasticity.csv

  const LkwInstance& lkw() const { return std::get<LkwInstance>(instance); }
  const NlebInstance& nleb() const { return std::get<NlebInstance>(instance); }
  const EscaInstance& esca() const { return std::get<EscaInstance>(instance); }
};

/// Loads and validates a bundle directory:
///   lkw:  crops.csv, totals.json
///   nleb: crops.csv, subwatersheds.csv, totals.json, optional elasticity.csv
///   esca: esca.json
/// Throws DatasetError carrying every error found (warnings included) when
/// any error is present; a missing file is reported with its path.
DatasetBundle load_bundle(ModelKind kind, const std::filesystem::path& directory);

/// `full_shape` demands the 18-crop / 11-irrigated shape for an LKW load.
/// It defaults on for load_bundle; tests may load other shapes.
DatasetBundle load_bundle(ModelKind kind, const std::filesystem::path& directory, bool full_shape);

// Individual parsers, exposed for tests. They append diagnostics instead of
// throwing.
std::vector<CropRecord> parse_crops_csv(const std::string& text, const std::string& file, const std::string& currency,
                                        std::vector<Diagnostic>& diags, std::vector<std::size_t>* row_lines = nullptr);
RegionTotals parse_totals_json(const std::string& text, const std::string& file, std::vector<Diagnostic>& diags);
std::vector<SubWatershed> parse_subwatersheds_csv(const std::string& text, const std::string& file,
                                                  const std::vector<CropRecord>& crops,
                                                  std::vector<Diagnostic>& diags);
EscaInstance parse_esca_json(const std::string& text, const std::string& file, std::vector<Diagnostic>& diags);

std::string read_file(const std::filesystem::path& p);
/// Creates parent directories as needed.
void write_file(const std::filesystem::path& p, const std::string& content);

// JSON forms. Non-finite numbers are written as the strings "inf", "-inf"
// and "nan" so every value survives a round trip.
nlohmann::json to_json(const SolveResult& r);
SolveResult solve_result_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SweepGrid& g);
SweepGrid sweep_grid_from_json(const nlohmann::json& j);
nlohmann::json to_json(const FrankWolfeResult& r);
FrankWolfeResult fw_result_from_json(const nlohmann::json& j);
nlohmann::json to_json(const std::vector<ContourPoint>& pts);
std::vector<ContourPoint> contour_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SimplexConfig& c);
SimplexConfig simplex_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const EscaInstance& inst);
EscaInstance esca_instance_from_json(const nlohmann::json& j);

// Plain-table exports, 6 significant digits.

/// Long format: one row per cell with axis values, status, objective,
/// delta utility and binding rows.
std::string grid_csv(const SweepGrid& g);
/// 2-D delta-utility matrix: first column holds the first axis, header row
/// the second axis; infeasible cells are left empty.
std::string surface_csv(const SweepGrid& g);
std::string contour_csv(const SweepGrid& g, const std::vector<ContourPoint>& pts);
/// Per-variable areas for the baseline and every cell of a 1-D sweep.
std::string areas_csv(const SweepGrid& g, const std::vector<double>& baseline);
/// Variable values and constraint activity of one solve.
std::string solve_result_csv(const SolveResult& r);
/// One row per report row, one column per scenario.
std::string esca_table_csv(const std::vector<ScenarioResult>& results);

}  // namespace agriopt
