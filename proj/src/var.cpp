#include "causalts/var.hpp"

#include "causalts/error.hpp"
#include "causalts/linalg.hpp"

#include <string>

namespace causalts {
namespace {

void check_exog(const Eigen::MatrixXd& endog, const Eigen::MatrixXd& exog) {
  if (exog.cols() > 0 && exog.rows() != endog.rows()) {
    throw ContractError("exogenous panel has " + std::to_string(exog.rows()) +
                        " rows, endogenous has " + std::to_string(endog.rows()));
  }
}

}  // namespace

Eigen::MatrixXd VarModel::residual_covariance() const {
  return moment(residuals, residuals);
}

Eigen::MatrixXd VarModel::companion() const {
  const Eigen::Index n = dim();
  const int k = lags();
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n * k, n * k);
  for (int tau = 0; tau < k; ++tau) c.block(0, tau * n, n, n) = M[tau];
  if (k > 1) c.bottomLeftCorner(n * (k - 1), n * (k - 1)).setIdentity();
  return c;
}

Eigen::MatrixXd var_design(const Eigen::MatrixXd& endog,
                           const Eigen::MatrixXd& exog, int k,
                           Eigen::Index first) {
  const Eigen::Index n = endog.cols();
  const Eigen::Index d = exog.cols();
  const Eigen::Index rows = endog.rows() - first;
  Eigen::MatrixXd x(rows, 1 + n * k + d);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Eigen::Index t = first + i;
    x(i, 0) = 1.0;
    for (int tau = 1; tau <= k; ++tau) {
      x.block(i, 1 + (tau - 1) * n, 1, n) = endog.row(t - tau);
    }
    if (d > 0) x.block(i, 1 + n * k, 1, d) = exog.row(t);
  }
  return x;
}

VarModel fit_var(const Eigen::MatrixXd& endog, const Eigen::MatrixXd& exog,
                 int k) {
  if (k < 1) throw ContractError("VAR lag order must be at least 1");
  check_exog(endog, exog);
  const Eigen::Index n = endog.cols();
  const Eigen::Index d = exog.cols();
  const Eigen::Index t = endog.rows();
  if (t <= n * k + d + 1) {
    throw SizeError("VAR(" + std::to_string(k) + ") with " + std::to_string(n) +
                    " series and " + std::to_string(d) +
                    " exogenous regressors needs more than " +
                    std::to_string(n * k + d + 1) + " observations, got " +
                    std::to_string(t));
  }

  std::vector<std::string> labels{"intercept"};
  for (int tau = 1; tau <= k; ++tau) {
    for (Eigen::Index j = 0; j < n; ++j) {
      labels.push_back("lag" + std::to_string(tau) + ":x" + std::to_string(j + 1));
    }
  }
  for (Eigen::Index j = 0; j < d; ++j) labels.push_back("z" + std::to_string(j + 1));

  const Eigen::MatrixXd x = var_design(endog, exog, k, k);
  const Eigen::MatrixXd y = endog.bottomRows(t - k);
  const OlsFit fit = ols(x, y, labels);

  VarModel model;
  const Eigen::MatrixXd coef = fit.coef.transpose();  // n x p
  model.mu = coef.col(0);
  for (int tau = 0; tau < k; ++tau) {
    model.M.push_back(coef.block(0, 1 + tau * n, n, n));
  }
  model.gamma = coef.block(0, 1 + n * k, n, d);
  model.residuals = fit.residuals;
  return model;
}

Eigen::MatrixXd residuals_from_var(const VarModel& model,
                                   const Eigen::MatrixXd& endog,
                                   const Eigen::MatrixXd& exog) {
  check_exog(endog, exog);
  const Eigen::Index n = model.dim();
  const int k = model.lags();
  if (endog.cols() != n || exog.cols() != model.exog_dim()) {
    throw ContractError("data dimensions do not match the VAR model");
  }
  if (endog.rows() <= k) throw SizeError("fewer observations than lags");
  const Eigen::Index rows = endog.rows() - k;
  Eigen::MatrixXd e(rows, n);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Eigen::Index t = k + i;
    Eigen::VectorXd r = endog.row(t).transpose() - model.mu;
    if (model.exog_dim() > 0) r -= model.gamma * exog.row(t).transpose();
    for (int tau = 1; tau <= k; ++tau) {
      r -= model.M[tau - 1] * endog.row(t - tau).transpose();
    }
    e.row(i) = r.transpose();
  }
  return e;
}

}  // namespace causalts
