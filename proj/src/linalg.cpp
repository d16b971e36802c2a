#include "causalts/linalg.hpp"

#include "causalts/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace causalts {

OlsFit ols(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
           const std::vector<std::string>& labels) {
  if (x.rows() != y.rows()) {
    throw ContractError("regressor and response row counts differ");
  }
  OlsFit fit;
  if (x.cols() == 0) {
    fit.coef = Eigen::MatrixXd::Zero(0, y.cols());
    fit.residuals = y;
    return fit;
  }
  if (x.rows() <= x.cols()) {
    throw SizeError("least squares with " + std::to_string(x.cols()) +
                    " regressors needs more than " + std::to_string(x.cols()) +
                    " observations, got " + std::to_string(x.rows()));
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  qr.setThreshold(1e-10);
  if (qr.rank() < x.cols()) {
    // Columns pivoted past the rank are the ones spanned by the others.
    const auto& perm = qr.colsPermutation().indices();
    std::ostringstream msg;
    msg << "collinear regressors (rank " << qr.rank() << " of " << x.cols()
        << "); dependent column(s):";
    for (Eigen::Index i = qr.rank(); i < x.cols(); ++i) {
      const int c = perm(i);
      msg << ' '
          << (c < static_cast<int>(labels.size()) ? labels[c]
                                                   : "#" + std::to_string(c));
    }
    throw EstimationError(msg.str());
  }
  fit.coef = qr.solve(y);
  fit.residuals = y - x * fit.coef;
  return fit;
}

Eigen::MatrixXd residualize(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  if (x.cols() == 0) return y;
  return ols(x, y).residuals;
}

Eigen::MatrixXd moment(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return a.transpose() * b / static_cast<double>(a.rows());
}

double log_det_spd(const Eigen::MatrixXd& m) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    throw EstimationError("matrix is not positive definite");
  }
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

Eigen::MatrixXd inverse_sqrt_spd(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0) {
    throw EstimationError("matrix is not positive definite");
  }
  return es.eigenvectors() *
         es.eigenvalues().array().rsqrt().matrix().asDiagonal() *
         es.eigenvectors().transpose();
}

Eigen::MatrixXd orthogonal_complement(const Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  return q.rightCols(n - a.cols());
}

double spectral_radius(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

Eigen::Index numerical_rank(const Eigen::MatrixXd& m, double tol) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > tol * s(0)) ++r;
  }
  return r;
}

double max_principal_angle(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const Eigen::MatrixXd qa = Eigen::HouseholderQR<Eigen::MatrixXd>(a).householderQ() *
                             Eigen::MatrixXd::Identity(a.rows(), a.cols());
  const Eigen::MatrixXd qb = Eigen::HouseholderQR<Eigen::MatrixXd>(b).householderQ() *
                             Eigen::MatrixXd::Identity(b.rows(), b.cols());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(qa.transpose() * qb);
  const double smallest = svd.singularValues().minCoeff();
  return std::acos(std::clamp(smallest, -1.0, 1.0));
}

ReducedRankSolution reduced_rank_eigen(const Eigen::MatrixXd& s00,
                                       const Eigen::MatrixXd& s01,
                                       const Eigen::MatrixXd& s11) {
  const auto check = [](const Eigen::MatrixXd& m, const char* label) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (!(lo > 1e-12 * std::max(hi, 1e-300))) {
      std::ostringstream msg;
      msg << "near-singular moment matrix " << label
          << " (eigenvalue range [" << lo << ", " << hi
          << "], reciprocal condition " << (hi > 0 ? lo / hi : 0.0) << ")";
      throw EstimationError(msg.str());
    }
  };
  check(s00, "S00");
  check(s11, "S11");

  Eigen::LLT<Eigen::MatrixXd> l11(s11);
  const Eigen::MatrixXd l = l11.matrixL();
  const Eigen::MatrixXd s00_inv_s01 = s00.ldlt().solve(s01);
  const Eigen::MatrixXd product = s01.transpose() * s00_inv_s01;
  // C = L^{-1} S10 S00^{-1} S01 L^{-T}
  const Eigen::MatrixXd left =
      l.triangularView<Eigen::Lower>().solve(product);
  Eigen::MatrixXd c =
      l.triangularView<Eigen::Lower>().solve(left.transpose()).transpose();
  c = 0.5 * (c + c.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c);
  const Eigen::Index m = c.rows();
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(m));
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
    return es.eigenvalues()(a) > es.eigenvalues()(b);
  });

  ReducedRankSolution out;
  out.eigenvalues.resize(m);
  Eigen::MatrixXd u(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    out.eigenvalues(i) = std::clamp(es.eigenvalues()(idx[i]), 0.0, 1.0 - 1e-15);
    u.col(i) = es.eigenvectors().col(idx[i]);
  }
  out.eigenvectors = l.transpose().triangularView<Eigen::Upper>().solve(u);
  return out;
}

}  // namespace causalts
