#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace causalts {

enum class TransformKind { Log, Logit, Seasonal, Difference, Standardize };

const char* to_string(TransformKind kind);

// One entry of a panel's transform ledger. `column` is -1 for transforms
// applied to every column at once (difference, standardize). `params`
// holds whatever is needed to replay the transform bit-for-bit:
//   Log          -> {}
//   Logit        -> {lower, upper}
//   Seasonal     -> {period, harmonics, beta0, sin_1, cos_1, ..., sin_J, cos_J}
//   Difference   -> {order}
//   Standardize  -> {mean_1, sd_1, ..., mean_n, sd_n}
struct TransformRecord {
  TransformKind kind;
  int column = -1;
  std::vector<double> params;
};

// T x n panel of equally spaced observations. Rows are periods t0, t0+1, ...
class TimeSeriesMatrix {
 public:
  TimeSeriesMatrix() = default;
  TimeSeriesMatrix(Eigen::MatrixXd values, std::vector<std::string> names,
                   long t0 = 1, int period_length = 52);

  const Eigen::MatrixXd& values() const { return values_; }
  const std::vector<std::string>& names() const { return names_; }
  long t0() const { return t0_; }
  int period_length() const { return period_length_; }
  const std::vector<TransformRecord>& transform_log() const { return log_; }

  Eigen::Index rows() const { return values_.rows(); }
  Eigen::Index cols() const { return values_.cols(); }
  Eigen::VectorXd column(Eigen::Index j) const { return values_.col(j); }

  // Index of the named column, or -1.
  int find(const std::string& name) const;

  // Returns a copy with new values and the given record appended to the
  // ledger. Row count may shrink (differencing), t0 shifts accordingly.
  TimeSeriesMatrix with(Eigen::MatrixXd values, TransformRecord record,
                        long t0_shift = 0) const;

  // Subset of columns in the given order; the ledger keeps only records
  // that apply to the selected columns (whole-panel records are dropped
  // because their parameters no longer line up).
  TimeSeriesMatrix select(const std::vector<int>& columns) const;

 private:
  Eigen::MatrixXd values_;
  std::vector<std::string> names_;
  long t0_ = 1;
  int period_length_ = 52;
  std::vector<TransformRecord> log_;
};

}  // namespace causalts
