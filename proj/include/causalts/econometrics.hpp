#pragma once

#include "causalts/hypothesis.hpp"
#include "causalts/vecm.hpp"

#include <Eigen/Dense>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace causalts {

// ---------------------------------------------------------------------------
// Lag-order selection

struct LagSelectionTable {
  int max_lag = 0;
  // Entry i holds the criterion at lag order i + 1.
  Eigen::VectorXd aic;
  Eigen::VectorXd hq;
  Eigen::VectorXd sc;
  std::map<std::string, int> chosen;  // "aic" | "hq" | "sc" -> lag
};

// Fits VAR(1..max_lag) with intercept and exogenous regressors on the
// common sample (rows max_lag+1..T) and evaluates
//   log det(Sigma) + penalty * (#coefficients) / T_eff
// with penalties 2 (Akaike), 2 log log T_eff (Hannan-Quinn), log T_eff
// (Schwarz).
LagSelectionTable select_lag_order(const Eigen::MatrixXd& endog,
                                   const Eigen::MatrixXd& exog, int max_lag);

// ---------------------------------------------------------------------------
// Unit-root and stationarity tests

// Newey-West automatic truncation floor(4 (T/100)^{2/9}).
int newey_west_lags(Eigen::Index length);

// Bartlett-kernel long-run variance of a (mean zero) series.
double long_run_variance(const Eigen::VectorXd& u, int lags);

// Phillips-Perron Z-tau, regression with constant and no trend. H0: unit root.
HypothesisTestResult phillips_perron(const Eigen::VectorXd& series,
                                     std::optional<int> lags = std::nullopt);

// KPSS level-stationarity test. H0: stationary.
HypothesisTestResult kpss(const Eigen::VectorXd& series,
                          std::optional<int> lags = std::nullopt);

// ---------------------------------------------------------------------------
// Johansen trace test

struct TraceTestResult {
  Eigen::VectorXd eigenvalues;
  // tests[j] is the null r <= j, j = 0..n-1.
  std::vector<HypothesisTestResult> tests;
  bool const_in_space = false;
};

TraceTestResult johansen_trace_test(const Eigen::MatrixXd& endog,
                                    const Eigen::MatrixXd& exog, int k,
                                    bool const_in_space);

// Smallest j whose null r <= j is not rejected at `level`; n when every
// null is rejected.
int select_rank(const TraceTestResult& trace, double level = 0.05);

// ---------------------------------------------------------------------------
// Constant placement by Schwarz loss

struct ConstantPlacement {
  double inside_loss = 0.0;
  double outside_loss = 0.0;
  bool inside = true;
};

// -2 log L + (#parameters) log T_eff.
double schwarz_loss(const VecmModel& model);

// Prefers inside unless outside is smaller by at least 1e-9.
bool prefer_inside(double inside_loss, double outside_loss);

ConstantPlacement schwarz_constant_placement(const Eigen::MatrixXd& endog,
                                             const Eigen::MatrixXd& exog, int k,
                                             int rank);

// ---------------------------------------------------------------------------
// Residual normality

struct JarqueBeraResult {
  std::vector<HypothesisTestResult> per_series;
  HypothesisTestResult multivariate;
};

// Univariate T/6 (skew^2 + (kurt-3)^2/4) ~ chi2(2); multivariate version on
// residuals orthogonalized by the Cholesky factor of their covariance,
// ~ chi2(2n).
JarqueBeraResult jarque_bera(const Eigen::MatrixXd& residuals);

// ---------------------------------------------------------------------------
// Likelihood-ratio restriction tests on a fitted VECM

// H0: row `series` of alpha is zero. LR ~ chi2(r).
HypothesisTestResult weak_exogeneity_test(const VecmModel& model, int series);

// H0: row `series` of beta is zero. With the constant inside the space,
// series == n tests the constant row. LR ~ chi2(r).
HypothesisTestResult exclusion_test(const VecmModel& model, int series);

// H0: the unit vector e_series (with a free constant when the constant is
// inside) lies in span(beta). LR ~ chi2(n - r).
HypothesisTestResult unit_vector_cointegration_test(const VecmModel& model,
                                                    int series);

}  // namespace causalts
