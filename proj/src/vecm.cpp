#include "causalts/vecm.hpp"

#include "causalts/error.hpp"
#include "causalts/linalg.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace causalts {
namespace {

struct VecmDesign {
  Eigen::MatrixXd z0;  // dx_t
  Eigen::MatrixXd z1;  // x_{t-1} (, 1)
  Eigen::MatrixXd z2;  // dx_{t-1..t-k+1}, z_t (, 1)
};

VecmDesign vecm_design(const Eigen::MatrixXd& endog, const Eigen::MatrixXd& exog,
                       int k, bool const_in_space) {
  const Eigen::Index n = endog.cols();
  const Eigen::Index d = exog.cols();
  const Eigen::Index t_total = endog.rows();
  if (k < 1) throw ContractError("VECM lag order k must be at least 1");
  if (d > 0 && exog.rows() != t_total) {
    throw ContractError("exogenous panel row count differs from endogenous");
  }
  const Eigen::Index rows = t_total - k;
  const Eigen::Index z1_cols = n + (const_in_space ? 1 : 0);
  const Eigen::Index z2_cols = n * (k - 1) + d + (const_in_space ? 0 : 1);
  if (rows <= z1_cols + z2_cols + 1) {
    throw SizeError("VECM with k=" + std::to_string(k) + " and " +
                    std::to_string(n) + " series needs more observations than " +
                    std::to_string(t_total));
  }

  VecmDesign out;
  out.z0.resize(rows, n);
  out.z1.resize(rows, z1_cols);
  out.z2.resize(rows, z2_cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Eigen::Index t = k + i;
    out.z0.row(i) = endog.row(t) - endog.row(t - 1);
    out.z1.block(i, 0, 1, n) = endog.row(t - 1);
    if (const_in_space) out.z1(i, n) = 1.0;
    for (int tau = 1; tau < k; ++tau) {
      out.z2.block(i, (tau - 1) * n, 1, n) = endog.row(t - tau) - endog.row(t - tau - 1);
    }
    if (d > 0) out.z2.block(i, n * (k - 1), 1, d) = exog.row(t);
    if (!const_in_space) out.z2(i, z2_cols - 1) = 1.0;
  }
  return out;
}

Eigen::MatrixXd normalize_beta(const Eigen::MatrixXd& beta) {
  const Eigen::Index r = beta.cols();
  const Eigen::MatrixXd lead = beta.topRows(r);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(lead);
  const auto& s = svd.singularValues();
  if (s(r - 1) > 1e-10 * s(0)) {
    return beta * lead.inverse();
  }
  // Leading block singular: normalize on the rows a pivoted QR of beta'
  // picks first.
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(beta.transpose());
  Eigen::MatrixXd block(r, r);
  for (Eigen::Index i = 0; i < r; ++i) {
    block.row(i) = beta.row(qr.colsPermutation().indices()(i));
  }
  return beta * block.inverse();
}

}  // namespace

JohansenMoments johansen_moments(const Eigen::MatrixXd& endog,
                                 const Eigen::MatrixXd& exog, int k,
                                 bool const_in_space) {
  const VecmDesign des = vecm_design(endog, exog, k, const_in_space);
  JohansenMoments m;
  m.n = endog.cols();
  m.const_in_space = const_in_space;
  m.r0 = residualize(des.z2, des.z0);
  m.r1 = residualize(des.z2, des.z1);
  m.s00 = moment(m.r0, m.r0);
  m.s01 = moment(m.r0, m.r1);
  m.s11 = moment(m.r1, m.r1);
  return m;
}

JohansenEigen johansen_eigen(const Eigen::MatrixXd& endog,
                             const Eigen::MatrixXd& exog, int k,
                             bool const_in_space) {
  JohansenEigen out;
  out.moments = johansen_moments(endog, exog, k, const_in_space);
  const auto sol =
      reduced_rank_eigen(out.moments.s00, out.moments.s01, out.moments.s11);
  // With the constant restricted the problem has n+1 roots, the last zero.
  out.eigenvalues = sol.eigenvalues.head(out.moments.n);
  out.eigenvectors = sol.eigenvectors;
  return out;
}

int VecmModel::parameter_count() const {
  const auto n = static_cast<int>(dim());
  const auto rows = static_cast<int>(beta.rows());
  int p = n * rank + (rows - rank) * rank;
  p += n * n * static_cast<int>(Gamma.size());
  p += n * static_cast<int>(exog_dim());
  if (mu) p += n;
  return p;
}

VecmModel vecm_from_beta(const Eigen::MatrixXd& endog,
                         const Eigen::MatrixXd& exog, int k,
                         const Eigen::MatrixXd& beta, bool const_in_space) {
  const VecmDesign des = vecm_design(endog, exog, k, const_in_space);
  const Eigen::Index n = endog.cols();
  const Eigen::Index d = exog.cols();
  const Eigen::Index r = beta.cols();
  if (beta.rows() != des.z1.cols()) {
    throw ContractError("beta has " + std::to_string(beta.rows()) +
                        " rows, expected " + std::to_string(des.z1.cols()));
  }

  Eigen::MatrixXd x(des.z0.rows(), r + des.z2.cols());
  x << des.z1 * beta, des.z2;
  const OlsFit fit = ols(x, des.z0);
  const Eigen::MatrixXd coef = fit.coef.transpose();  // n x (r + z2)

  VecmModel m;
  m.k = k;
  m.rank = static_cast<int>(r);
  m.const_in_space = const_in_space;
  m.beta = beta;
  m.alpha = coef.leftCols(r);
  m.Pi = m.alpha * beta.topRows(n).transpose();
  for (int tau = 1; tau < k; ++tau) {
    m.Gamma.push_back(coef.block(0, r + (tau - 1) * n, n, n));
  }
  m.gamma = coef.block(0, r + n * (k - 1), n, d);
  if (!const_in_space) m.mu = coef.col(coef.cols() - 1);
  m.residuals = fit.residuals;
  const double samples = static_cast<double>(fit.residuals.rows());
  m.log_likelihood =
      -0.5 * samples *
      (static_cast<double>(n) * (1.0 + std::log(2.0 * std::numbers::pi)) +
       log_det_spd(moment(fit.residuals, fit.residuals)));
  return m;
}

VecmModel fit_vecm(const Eigen::MatrixXd& endog, const Eigen::MatrixXd& exog,
                   int k, int rank, bool const_in_space) {
  const Eigen::Index n = endog.cols();
  if (rank < 1 || rank > n - 1) {
    throw ContractError(
        "VECM rank must lie in [1, n-1] = [1, " + std::to_string(n - 1) +
        "], got " + std::to_string(rank) +
        ": r = 0 is a VAR in differences and r = n is a stationary VAR in levels");
  }
  JohansenEigen je = johansen_eigen(endog, exog, k, const_in_space);
  const Eigen::MatrixXd beta = normalize_beta(je.eigenvectors.leftCols(rank));
  VecmModel m = vecm_from_beta(endog, exog, k, beta, const_in_space);
  m.eigenvalues = je.eigenvalues;
  m.moments = std::move(je.moments);
  return m;
}

VarModel vecm_to_var(const VecmModel& model) {
  const Eigen::Index n = model.dim();
  const int k = model.k;
  if (static_cast<int>(model.Gamma.size()) != k - 1) {
    throw ContractError("VECM must carry k-1 Gamma matrices");
  }
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
  VarModel var;
  var.M.resize(static_cast<std::size_t>(k));
  if (k == 1) {
    var.M[0] = eye + model.Pi;
  } else {
    var.M[0] = eye + model.Pi + model.Gamma[0];
    for (int tau = 2; tau <= k - 1; ++tau) {
      var.M[tau - 1] = model.Gamma[tau - 1] - model.Gamma[tau - 2];
    }
    var.M[k - 1] = -model.Gamma[k - 2];
  }
  if (model.const_in_space) {
    var.mu = model.alpha * model.beta.row(n).transpose();
  } else {
    var.mu = model.mu.value_or(Eigen::VectorXd::Zero(n));
  }
  var.gamma = model.gamma;
  var.residuals = model.residuals;
  return var;
}

VecmCoefficients vecm_coefficients_from_var(const VarModel& model) {
  const Eigen::Index n = model.dim();
  const int k = model.lags();
  VecmCoefficients out;
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
  for (const auto& m : model.M) sum += m;
  out.Pi = -(Eigen::MatrixXd::Identity(n, n) - sum);
  for (int tau = 1; tau <= k - 1; ++tau) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
    for (int i = tau + 1; i <= k; ++i) g += model.M[i - 1];
    out.Gamma.push_back(-g);
  }
  return out;
}

Eigen::MatrixXd vecm_residuals(const VecmModel& model,
                               const Eigen::MatrixXd& endog,
                               const Eigen::MatrixXd& exog) {
  const VecmDesign des = vecm_design(endog, exog, model.k, model.const_in_space);
  const Eigen::Index n = model.dim();
  Eigen::MatrixXd e = des.z0 - des.z1 * model.beta * model.alpha.transpose();
  for (int tau = 1; tau < model.k; ++tau) {
    e -= des.z2.middleCols((tau - 1) * n, n) * model.Gamma[tau - 1].transpose();
  }
  if (model.exog_dim() > 0) {
    e -= des.z2.middleCols(n * (model.k - 1), model.exog_dim()) *
         model.gamma.transpose();
  }
  if (model.mu) e.rowwise() -= model.mu->transpose();
  return e;
}

}  // namespace causalts
