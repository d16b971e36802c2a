#pragma once

#include "causalts/timeseries.hpp"

#include <Eigen/Dense>

#include <string_view>

namespace causalts {

// Harmonic seasonal term
//   lambda_t = beta0 + sum_j sin_coef[j] sin(2 pi (j+1) t / period)
//                    + cos_coef[j] cos(2 pi (j+1) t / period)
struct SeasonalFit {
  double beta0 = 0.0;
  Eigen::VectorXd sin_coef;
  Eigen::VectorXd cos_coef;
  int period = 52;
  double residual_variance = 0.0;

  int harmonics() const { return static_cast<int>(sin_coef.size()); }
  double evaluate(double t) const;
  // lambda_t for t = t0, ..., t0 + length - 1.
  Eigen::VectorXd reconstruct(Eigen::Index length, long t0 = 1) const;
};

struct SeasonalAdjustment {
  Eigen::VectorXd adjusted;
  SeasonalFit fit;
};

Eigen::VectorXd log_transform(const Eigen::VectorXd& series,
                              std::string_view name = "series");

Eigen::VectorXd logit_transform(const Eigen::VectorXd& series,
                                double lower = 0.0, double upper = 100.0,
                                std::string_view name = "series");

// Least-squares fit of the harmonic seasonal term (QR, not normal
// equations) and its removal. Rows are taken to be periods t0, t0+1, ...
SeasonalAdjustment seasonal_adjust(const Eigen::VectorXd& series, int period,
                                   int harmonics = 2, long t0 = 1);

// Panel-level operations. These record themselves in the transform ledger.
TimeSeriesMatrix difference(const TimeSeriesMatrix& m, int order = 1);
TimeSeriesMatrix standardize(const TimeSeriesMatrix& m);
TimeSeriesMatrix apply_log(const TimeSeriesMatrix& m, int column);
TimeSeriesMatrix apply_logit(const TimeSeriesMatrix& m, int column,
                             double lower = 0.0, double upper = 100.0);
TimeSeriesMatrix apply_seasonal(const TimeSeriesMatrix& m, int column,
                                int harmonics = 2);

// Re-applies a transform ledger to raw values. Uses the stored fit
// parameters, so the result matches the transformed panel bit-for-bit.
Eigen::MatrixXd replay(const std::vector<TransformRecord>& log,
                       const Eigen::MatrixXd& raw, long raw_t0 = 1);

}  // namespace causalts
