#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "explab/geometry.hpp"

namespace explab {

/// Exit taxonomy: 0 all verdicts hold/equality, 1 a verification failed with
/// its hypotheses satisfied, 2 input/config error, 3 hypothesis unmet
/// anywhere (informational failure class).
enum ScenarioExit : int {
  kExitOk = 0,
  kExitViolation = 1,
  kExitConfigError = 2,
  kExitHypothesisUnmet = 3,
};

/// FNV-1a over the canonical dump of the config.
std::string config_hash(const nlohmann::json& config);

/// Builds a fixture curve ({"kind": line_through_origin|offset_line|circle|
/// two_ray_cone|expander, ...}) or loads {"input": path}.
PolylineCurve curve_from_config(const nlohmann::json& config);

ScalarField field_from_config(const PolylineCurve& curve,
                              const nlohmann::json& config);

/// Runs one scenario object; writes report.json, CSV tables and summary.txt
/// under out_dir.
int run_scenario(const nlohmann::json& config,
                 const std::filesystem::path& out_dir, double tol_scale = 1.0);

/// Accepts a single scenario object or an array (batch). Batch members run
/// in their own subdirectories, optionally on several threads; the returned
/// code is the most severe member code (2 > 1 > 3 > 0).
int run_config(const nlohmann::json& config,
               const std::filesystem::path& out_dir, int threads = 1,
               double tol_scale = 1.0);

/// Parses and runs a config file; unreadable or malformed configs return
/// the config-error exit code instead of throwing.
int run_config_file(const std::filesystem::path& config_path,
                    const std::filesystem::path& out_dir, int threads = 1,
                    double tol_scale = 1.0);

/// Converts a written report.json into per-claim plot series CSVs.
int emit_plots(const std::filesystem::path& report_json,
               const std::filesystem::path& out_dir);

}  // namespace explab
