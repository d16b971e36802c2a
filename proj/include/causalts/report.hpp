#pragma once

#include "causalts/config.hpp"
#include "causalts/pipeline.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace causalts {

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const nlohmann::json& j);
nlohmann::json test_to_json(const HypothesisTestResult& r);

// Complete machine-readable report; numbers keep full precision.
nlohmann::json report_json(const PipelineResult& result, const AnalysisConfig& config);

// Long format: impulse,response,horizon,value.
std::string irf_csv(const ImpulseResponse& irf, const std::vector<std::string>& names);

// Human-readable tables, statistics rounded to four decimals.
std::string summary_text(const PipelineResult& result);

// Writes report.json, irf.csv, b0.dot .. bk.dot and summary.txt into
// `out_dir` (created if missing). Returns the files written.
std::vector<std::filesystem::path> emit_report(const PipelineResult& result,
                                               const AnalysisConfig& config,
                                               const std::filesystem::path& out_dir);

// Model pieces needed to recompute impulse responses from a report.
struct ReportModel {
  std::vector<std::string> names;
  VarModel var;
  Eigen::MatrixXd covariance;
  Eigen::MatrixXd B0;
};

ReportModel model_from_report(const nlohmann::json& report);
ReportModel load_report_model(const std::filesystem::path& path);

}  // namespace causalts
