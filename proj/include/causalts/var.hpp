#pragma once

#include <Eigen/Dense>

#include <vector>

namespace causalts {

// x_t = mu + sum_{tau=1..k} M_tau x_{t-tau} + gamma z_t + e_t
struct VarModel {
  Eigen::VectorXd mu;
  std::vector<Eigen::MatrixXd> M;
  Eigen::MatrixXd gamma;      // n x d
  Eigen::MatrixXd residuals;  // (T-k) x n, rows t = k+1..T

  int lags() const { return static_cast<int>(M.size()); }
  Eigen::Index dim() const { return mu.size(); }
  Eigen::Index exog_dim() const { return gamma.cols(); }

  // Maximum-likelihood innovation covariance E'E / (T-k).
  Eigen::MatrixXd residual_covariance() const;
  // nk x nk companion matrix of the lag polynomial.
  Eigen::MatrixXd companion() const;
};

// Regressor block [1, x_{t-1}, ..., x_{t-k}, z_t] for t = first..T-1
// (0-based rows). `exog` may have zero columns.
Eigen::MatrixXd var_design(const Eigen::MatrixXd& endog,
                           const Eigen::MatrixXd& exog, int k, Eigen::Index first);

// Equationwise least squares of Eq. x_t on intercept, k lags and z_t over
// rows k+1..T. `exog` is T x d; pass a matrix with zero columns for d = 0.
VarModel fit_var(const Eigen::MatrixXd& endog, const Eigen::MatrixXd& exog,
                 int k);

// e_t = x_t - mu - gamma z_t - sum M_tau x_{t-tau} for t = k+1..T.
Eigen::MatrixXd residuals_from_var(const VarModel& model,
                                   const Eigen::MatrixXd& endog,
                                   const Eigen::MatrixXd& exog);

}  // namespace causalts
