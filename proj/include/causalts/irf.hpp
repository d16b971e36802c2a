#pragma once

#include "causalts/var.hpp"

#include <Eigen/Dense>

#include <vector>

namespace causalts {

struct ImpulseResponse {
  // responses[h](i, j): response of series i at horizon h to a shock in
  // orthogonal source j. h runs 0..horizon.
  std::vector<Eigen::MatrixXd> responses;
  Eigen::MatrixXd impact;
  double spectral_radius = 0.0;
  bool explosive = false;

  int horizon() const { return static_cast<int>(responses.size()) - 1; }
};

// Moving-average coefficients Phi_0 = I, Phi_h = sum_tau M_tau Phi_{h-tau}.
std::vector<Eigen::MatrixXd> ma_coefficients(const VarModel& model, int horizon);

// Impact matrix of a recursive (Bernanke/Cholesky) ordering: `order` lists
// series indices from most to least exogenous. Column j is the one-standard-
// deviation shock of source j.
Eigen::MatrixXd recursive_impact(const Eigen::MatrixXd& covariance,
                                 const std::vector<int>& order);

// Impact matrix for a structural form nu_t = A e_t with orthogonal nu:
// A^{-1} scaled by the standard deviations of nu. With A = I - B0 this is
// the LiNGAM orthogonalization.
Eigen::MatrixXd structural_impact(const Eigen::MatrixXd& covariance,
                                  const Eigen::MatrixXd& structural);

// responses[h] = Phi_h * impact. Explosive systems (companion spectral
// radius >= 1 + 1e-6) are flagged, not rejected.
ImpulseResponse impulse_response(const VarModel& model,
                                 const Eigen::MatrixXd& impact, int horizon = 10);

// Convenience: recursive ordering on the model's residual covariance.
ImpulseResponse impulse_response(const VarModel& model,
                                 const std::vector<int>& order, int horizon = 10);

}  // namespace causalts
