#pragma once

#include "causalts/pipeline.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace causalts {

// One step of a per-series transform chain.
struct TransformStep {
  enum class Kind { Log, Logit, Deseasonalize };
  Kind kind = Kind::Log;
  double lower = 0.0;  // logit bounds
  double upper = 100.0;
};

struct AnalysisConfig {
  std::filesystem::path input;
  std::string time_column;  // empty: rows are periods 1, 2, ...
  std::vector<std::string> endogenous;
  std::vector<std::string> exogenous;
  std::map<std::string, std::vector<TransformStep>> transforms;
  int season_period = 52;
  int season_harmonics = 2;
  bool standardize = false;
  // Series names for a recursive impulse-response ordering; empty means
  // the estimated instantaneous structure orthogonalizes the shocks.
  std::vector<std::string> irf_ordering;
  std::optional<std::filesystem::path> output_dir;
  bool seed_given = false;
  PipelineConfig pipeline;
};

// Parses the flat YAML configuration. Relative input paths resolve against
// `base_dir`. Unknown keys and ill-typed values raise InputError.
AnalysisConfig parse_config(const std::string& text,
                            const std::filesystem::path& base_dir = {});
AnalysisConfig load_config(const std::filesystem::path& path);

TransformStep parse_transform_step(const std::string& spec);
std::string to_string(const TransformStep& step);

// Output directory precedence: explicit override, then the config, then
// $CAUSALTS_OUT_DIR, then "causalts_out".
std::filesystem::path resolve_output_dir(const AnalysisConfig& config,
                                         const std::optional<std::filesystem::path>& flag);

}  // namespace causalts
