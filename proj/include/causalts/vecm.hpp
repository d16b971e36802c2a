#pragma once

#include "causalts/var.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace causalts {

// Johansen concentration of
//   dx_t = Pi x_{t-1} + sum Gamma_tau dx_{t-tau} + gamma z_t (+ mu) + e_t
// R0 / R1 are dx_t and x_{t-1} (augmented with 1 when the constant lies in
// the cointegration space) after regressing out lagged differences,
// exogenous regressors and, when outside, the intercept.
struct JohansenMoments {
  Eigen::MatrixXd r0;   // (T-k) x n
  Eigen::MatrixXd r1;   // (T-k) x n or n+1
  Eigen::MatrixXd s00;
  Eigen::MatrixXd s01;
  Eigen::MatrixXd s11;
  Eigen::Index n = 0;
  bool const_in_space = false;

  Eigen::Index samples() const { return r0.rows(); }
};

JohansenMoments johansen_moments(const Eigen::MatrixXd& endog,
                                 const Eigen::MatrixXd& exog, int k,
                                 bool const_in_space);

struct JohansenEigen {
  JohansenMoments moments;
  Eigen::VectorXd eigenvalues;   // n values in [0,1), descending
  Eigen::MatrixXd eigenvectors;  // columns normalized V' S11 V = I
};

JohansenEigen johansen_eigen(const Eigen::MatrixXd& endog,
                             const Eigen::MatrixXd& exog, int k,
                             bool const_in_space);

struct VecmModel {
  Eigen::MatrixXd alpha;                  // n x r
  Eigen::MatrixXd beta;                   // n x r, or (n+1) x r with constant row last
  Eigen::MatrixXd Pi;                     // n x n, alpha * beta(variable rows)'
  std::vector<Eigen::MatrixXd> Gamma;     // k-1 matrices
  std::optional<Eigen::VectorXd> mu;      // absent when the constant is in the space
  Eigen::MatrixXd gamma;                  // n x d
  int rank = 0;
  int k = 1;
  Eigen::VectorXd eigenvalues;
  bool const_in_space = false;
  double log_likelihood = 0.0;
  Eigen::MatrixXd residuals;              // (T-k) x n
  JohansenMoments moments;

  Eigen::Index dim() const { return Pi.rows(); }
  Eigen::Index exog_dim() const { return gamma.cols(); }
  // Variable rows of beta (drops the constant row when inside).
  Eigen::MatrixXd beta_variables() const { return beta.topRows(dim()); }
  // Number of free parameters of the fitted model.
  int parameter_count() const;
};

// Johansen maximum-likelihood reduced-rank regression. beta is normalized so
// its leading r x r block is the identity (falls back to the first
// well-conditioned set of r rows if that block is singular).
VecmModel fit_vecm(const Eigen::MatrixXd& endog, const Eigen::MatrixXd& exog,
                   int k, int rank, bool const_in_space);

// Builds the complete model (alpha, Gamma, mu, gamma, residuals) for a given
// beta by least squares on the concentrated problem. Used by fit_vecm and by
// the restricted-likelihood tests.
VecmModel vecm_from_beta(const Eigen::MatrixXd& endog,
                         const Eigen::MatrixXd& exog, int k,
                         const Eigen::MatrixXd& beta, bool const_in_space);

// M_1 = I + Pi + Gamma_1, M_tau = Gamma_tau - Gamma_{tau-1}, M_k = -Gamma_{k-1};
// for k = 1, M_1 = I + Pi. An in-space constant becomes mu = alpha * beta_const.
VarModel vecm_to_var(const VecmModel& model);

struct VecmCoefficients {
  Eigen::MatrixXd Pi;
  std::vector<Eigen::MatrixXd> Gamma;
};

// Pi = -(I - sum M_tau), Gamma_tau = -sum_{i > tau} M_i.
VecmCoefficients vecm_coefficients_from_var(const VarModel& model);

// Residuals of the VECM evaluated directly on the data (rows t = k+1..T).
Eigen::MatrixXd vecm_residuals(const VecmModel& model,
                               const Eigen::MatrixXd& endog,
                               const Eigen::MatrixXd& exog);

}  // namespace causalts
