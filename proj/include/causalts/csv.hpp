#pragma once

#include "causalts/config.hpp"
#include "causalts/timeseries.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace causalts {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;  // raw cells, header excluded
};

// Comma-separated text with a header row. Double-quoted fields may contain
// commas and doubled quotes; a leading UTF-8 BOM and CR line endings are
// accepted. Rows with a different field count raise InputError.
CsvTable parse_csv(const std::string& text);
CsvTable read_csv(const std::filesystem::path& path);

struct IngestedData {
  TimeSeriesMatrix endog;
  std::optional<TimeSeriesMatrix> exog;
  Eigen::MatrixXd exog_values() const;  // T x 0 when there are no exogenous series
};

// Extracts the configured columns, validates the time index (strictly
// increasing with a constant step; integers or ISO dates) and applies each
// series' transform chain in the configured order, then optional
// standardization of the endogenous panel.
IngestedData ingest_csv(const CsvTable& table, const AnalysisConfig& config);
IngestedData ingest_csv(const std::filesystem::path& path, const AnalysisConfig& config);

// Writes a header row and full-precision values.
std::string to_csv(const Eigen::MatrixXd& values, const std::vector<std::string>& names,
                   const std::string& time_column = "t", long t0 = 1);

}  // namespace causalts
