#pragma once

// Command execution shared by the CLI and the HTTP service. A run is fully
// described by its manifest: executing the same manifest against the same
// bundle bytes reproduces the same artifacts.

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "agriopt/esca.hpp"
#include "agriopt/io.hpp"

namespace agriopt {

/// A request the caller got wrong (bad weights, unknown labels, bad axes).
class RequestError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a manifest's recorded bundle hash no longer matches the files.
class ManifestMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

nlohmann::json bundle_summary(const DatasetBundle& b);

// ESCA requests: {"id", "scenario", "weights": {label: w}, "targets": {key: v}}.
// Weights must lie in [0, 1]. Target keys are the EscaTargets field names,
// with "typical_sale.<animal>", "production_target.<animal>" and
// "max_heads.<animal>" for the per-animal entries.
EscaInstance apply_esca_request(const EscaInstance& base, const nlohmann::json& request);

/// The one JSON shape used for an ESCA solve by both `gp` and the service.
nlohmann::json esca_result_json(const std::string& scenario, const WeightVector& weights, const SolveResult& r);

struct RunOutcome {
  nlohmann::json manifest;                     // normalized, hashes filled in
  std::map<std::string, std::string> files;    // artifact name -> contents
  SolveStatus status = SolveStatus::optimal;   // worst status for exit codes
  std::vector<std::string> summary;            // human-readable lines
  std::vector<std::string> warnings;
};

/// Manifest fields: command (solve|sweep|gp), kind, data_dir, optional
/// content_hash, parameters, solver. See README for the parameter keys.
/// Parallelism affects speed only, never the artifacts.
RunOutcome execute_manifest(const nlohmann::json& manifest, std::size_t parallelism = 1);

}  // namespace agriopt
