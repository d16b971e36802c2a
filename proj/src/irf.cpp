#include "causalts/irf.hpp"

#include "causalts/error.hpp"
#include "causalts/linalg.hpp"

#include <algorithm>

namespace causalts {
namespace {

void check_permutation(const std::vector<int>& order, Eigen::Index n) {
  std::vector<int> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  bool ok = static_cast<Eigen::Index>(sorted.size()) == n;
  for (std::size_t i = 0; ok && i < sorted.size(); ++i) {
    ok = sorted[i] == static_cast<int>(i);
  }
  if (!ok) throw ContractError("ordering must be a permutation of 0..n-1");
}

}  // namespace

std::vector<Eigen::MatrixXd> ma_coefficients(const VarModel& model, int horizon) {
  const Eigen::Index n = model.dim();
  const int k = model.lags();
  std::vector<Eigen::MatrixXd> phi;
  phi.reserve(static_cast<std::size_t>(horizon) + 1);
  phi.push_back(Eigen::MatrixXd::Identity(n, n));
  for (int h = 1; h <= horizon; ++h) {
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
    for (int tau = 1; tau <= std::min(h, k); ++tau) {
      acc += model.M[tau - 1] * phi[h - tau];
    }
    phi.push_back(std::move(acc));
  }
  return phi;
}

Eigen::MatrixXd recursive_impact(const Eigen::MatrixXd& covariance,
                                 const std::vector<int>& order) {
  const Eigen::Index n = covariance.rows();
  check_permutation(order, n);
  Eigen::MatrixXd permuted(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      permuted(i, j) = covariance(order[i], order[j]);
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(permuted);
  if (llt.info() != Eigen::Success) {
    throw EstimationError("innovation covariance is not positive definite");
  }
  const Eigen::MatrixXd l = llt.matrixL();
  // Undo the permutation on both sides: shock j belongs to series order[j].
  Eigen::MatrixXd impact = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      impact(order[i], order[j]) = l(i, j);
    }
  }
  return impact;
}

Eigen::MatrixXd structural_impact(const Eigen::MatrixXd& covariance,
                                  const Eigen::MatrixXd& structural) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(structural);
  if (!lu.isInvertible()) {
    throw ContractError("orthogonalization matrix is not invertible");
  }
  const Eigen::MatrixXd source_cov =
      structural * covariance * structural.transpose();
  const Eigen::VectorXd sd = source_cov.diagonal().cwiseMax(0.0).cwiseSqrt();
  return lu.inverse() * sd.asDiagonal();
}

ImpulseResponse impulse_response(const VarModel& model,
                                 const Eigen::MatrixXd& impact, int horizon) {
  if (horizon < 1) throw ContractError("impulse response horizon must be >= 1");
  const Eigen::Index n = model.dim();
  if (impact.rows() != n || impact.cols() != n) {
    throw ContractError("impact matrix must be n x n");
  }
  if (Eigen::FullPivLU<Eigen::MatrixXd>(impact).rank() < n) {
    throw ContractError("impact matrix is not invertible");
  }
  ImpulseResponse out;
  out.impact = impact;
  out.spectral_radius = spectral_radius(model.companion());
  out.explosive = out.spectral_radius >= 1.0 + 1e-6;
  for (const auto& phi : ma_coefficients(model, horizon)) {
    out.responses.push_back(phi * impact);
  }
  return out;
}

ImpulseResponse impulse_response(const VarModel& model,
                                 const std::vector<int>& order, int horizon) {
  return impulse_response(
      model, recursive_impact(model.residual_covariance(), order), horizon);
}

}  // namespace causalts
