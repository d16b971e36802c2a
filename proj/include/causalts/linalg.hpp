#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace causalts {

struct OlsFit {
  Eigen::MatrixXd coef;       // p x m, one column per response
  Eigen::MatrixXd residuals;  // T x m
};

// Column-pivoted QR least squares of every column of `y` on `x`.
// Collinear regressors raise EstimationError naming the dependent column
// (from `labels` when supplied).
OlsFit ols(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
           const std::vector<std::string>& labels = {});

// Residuals of `y` after projecting out the columns of `x`. A zero-column
// `x` returns `y` unchanged.
Eigen::MatrixXd residualize(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y);

// Cross-moment a' b / rows.
Eigen::MatrixXd moment(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

double log_det_spd(const Eigen::MatrixXd& m);

// Symmetric inverse square root (m^{-1/2}) of a positive definite matrix.
Eigen::MatrixXd inverse_sqrt_spd(const Eigen::MatrixXd& m);

// Orthonormal basis of the orthogonal complement of span(a).
Eigen::MatrixXd orthogonal_complement(const Eigen::MatrixXd& a);

// Largest absolute eigenvalue.
double spectral_radius(const Eigen::MatrixXd& m);

// Numerical rank from singular values at relative tolerance `tol`.
Eigen::Index numerical_rank(const Eigen::MatrixXd& m, double tol = 1e-8);

// Largest principal angle (radians) between span(a) and span(b).
double max_principal_angle(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

// Solutions of  |lambda S11 - S10 S00^{-1} S01| = 0  in descending order,
// eigenvectors normalized so V' S11 V = I. Solved by Cholesky reduction of
// S11 to a symmetric standard eigenproblem.
struct ReducedRankSolution {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
};
ReducedRankSolution reduced_rank_eigen(const Eigen::MatrixXd& s00,
                                       const Eigen::MatrixXd& s01,
                                       const Eigen::MatrixXd& s11);

}  // namespace causalts
