#include <doctest.h>

#include "causalts/error.hpp"
#include "causalts/irf.hpp"
#include "causalts/linalg.hpp"
#include "causalts/synth.hpp"
#include "causalts/var.hpp"
#include "causalts/vecm.hpp"
#include "support.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

using namespace causalts;
using namespace testsupport;

namespace {

double max_abs(const Eigen::MatrixXd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

Eigen::MatrixXd random_matrix(int rows, int cols, double lo, double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(lo, hi);
  return Eigen::MatrixXd::NullaryExpr(rows, cols, [&] { return u(rng); });
}

}  // namespace

TEST_CASE("fit_var recovers noise-free coefficients") {
  GeneratorSpec spec;
  spec.n = 3;
  spec.T = 400;
  spec.seed = 8;
  Eigen::MatrixXd m1(3, 3);
  m1 << 0.5, 0.1, 0.0, -0.2, 0.3, 0.1, 0.0, 0.2, 0.4;
  Eigen::MatrixXd m2(3, 3);
  m2 << -0.2, 0.0, 0.1, 0.0, 0.1, 0.0, 0.1, 0.0, -0.1;
  spec.M = {m1, m2};
  spec.mu = Eigen::Vector3d(1.0, -0.5, 0.25);
  spec.exog.d = 2;
  spec.exog.ar = 0.3;
  spec.gamma = Eigen::MatrixXd(3, 2);
  spec.gamma << 0.5, -1.0, 0.2, 0.3, -0.4, 0.8;
  spec.noise_scale = Eigen::VectorXd::Zero(3);
  const SvarSample s = generate_svar(spec);
  const VarModel v = fit_var(s.endog.values(), s.exog, 2);
  CHECK(max_abs(v.M[0] - m1) < 1e-8);
  CHECK(max_abs(v.M[1] - m2) < 1e-8);
  CHECK(max_abs(v.mu - spec.mu) < 1e-8);
  CHECK(max_abs(v.gamma - spec.gamma) < 1e-8);
  CHECK(max_abs(v.residuals) < 1e-10);
  CHECK(max_abs(residuals_from_var(v, s.endog.values(), s.exog)) < 1e-10);
}

TEST_CASE("fit_var scalar AR(0.7)") {
  const Eigen::MatrixXd x = ar1(2000, 0.7, 12);
  const VarModel v = fit_var(x, no_exog(2000), 1);
  CHECK(v.M[0](0, 0) >= 0.65);
  CHECK(v.M[0](0, 0) <= 0.75);
  CHECK(v.gamma.rows() == 1);
  CHECK(v.gamma.cols() == 0);
  CHECK(std::abs(v.residuals.mean()) < 1e-8);
}

TEST_CASE("fit_var with an empty exogenous block equals plain OLS") {
  std::mt19937_64 rng(2);
  Eigen::MatrixXd x(300, 2);
  x.col(0) = ar1(300, 0.5, 1);
  x.col(1) = ar1(300, -0.3, 2);
  const VarModel v = fit_var(x, no_exog(300), 2);
  // Oracle: solve the normal equations of [1, x_{t-1}, x_{t-2}] directly.
  Eigen::MatrixXd design(298, 5);
  for (int t = 2; t < 300; ++t) {
    design(t - 2, 0) = 1.0;
    design.block(t - 2, 1, 1, 2) = x.row(t - 1);
    design.block(t - 2, 3, 1, 2) = x.row(t - 2);
  }
  const Eigen::MatrixXd coef =
      (design.transpose() * design).ldlt().solve(design.transpose() * x.bottomRows(298));
  CHECK(max_abs(v.mu - coef.row(0).transpose()) < 1e-10);
  CHECK(max_abs(v.M[0] - coef.middleRows(1, 2).transpose()) < 1e-10);
  CHECK(max_abs(v.M[1] - coef.middleRows(3, 2).transpose()) < 1e-10);
  for (int j = 0; j < 2; ++j) CHECK(std::abs(v.residuals.col(j).mean()) < 1e-8);
}

TEST_CASE("fit_var reports collinear regressors") {
  Eigen::MatrixXd x(100, 2);
  x.col(0) = white_noise(100, 1);
  x.col(1) = white_noise(100, 2);
  Eigen::MatrixXd z(100, 2);
  z.col(0) = white_noise(100, 3);
  z.col(1) = 2.0 * z.col(0);
  CHECK_THROWS_AS(fit_var(x, z, 1), EstimationError);
  CHECK_THROWS_AS(fit_var(x.topRows(5), no_exog(5), 2), SizeError);
}

TEST_CASE("residuals of a hand-computed scalar VAR(1)") {
  VarModel v;
  v.mu = Eigen::VectorXd::Constant(1, 0.5);
  v.M = {Eigen::MatrixXd::Constant(1, 1, 1.5)};
  v.gamma = Eigen::MatrixXd(1, 0);
  Eigen::MatrixXd x(3, 1);
  x << 1, 2, 4;
  const Eigen::MatrixXd e = residuals_from_var(v, x, no_exog(3));
  REQUIRE(e.rows() == 2);
  CHECK(e(0, 0) == 0.0);  // 2 - 0.5 - 1.5
  CHECK(e(1, 0) == 0.5);  // 4 - 0.5 - 3
  CHECK_THROWS_AS(residuals_from_var(v, Eigen::MatrixXd::Zero(3, 2), no_exog(3)), ContractError);
}

TEST_CASE("fit_vecm recovers the cointegration space") {
  int good = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    CointegrationSpec spec = default_cointegration_spec(4, 2, 2000, seed);
    spec.noise.family = NoiseFamily::Gaussian;
    const CointegratedSample s = generate_cointegrated(spec);
    const VecmModel m = fit_vecm(s.endog.values(), no_exog(2000), 1, 2, false);
    good += max_principal_angle(m.beta_variables(), spec.beta) < 0.1 ? 1 : 0;
    CHECK(max_abs(m.Pi - m.alpha * m.beta_variables().transpose()) < 1e-10);
    CHECK(numerical_rank(m.Pi) == 2);
    CHECK(max_abs(m.beta.topRows(2) - Eigen::MatrixXd::Identity(2, 2)) < 1e-12);
  }
  CHECK(good >= 90);
}

TEST_CASE("fit_vecm rank contract") {
  const CointegratedSample s = generate_cointegrated(default_cointegration_spec(3, 1, 200, 1));
  CHECK_THROWS_AS(fit_vecm(s.endog.values(), no_exog(200), 2, 3, true), ContractError);
  CHECK_THROWS_AS(fit_vecm(s.endog.values(), no_exog(200), 2, 0, true), ContractError);
  CHECK_THROWS_AS(fit_vecm(s.endog.values(), no_exog(200), 0, 1, true), ContractError);
}

TEST_CASE("fit_vecm with the constant inside") {
  CointegrationSpec spec = default_cointegration_spec(3, 1, 500, 4);
  spec.const_in_space = true;
  spec.rho = Eigen::VectorXd::Constant(1, 1.5);
  const CointegratedSample s = generate_cointegrated(spec);
  Eigen::MatrixXd z(500, 1);
  z.col(0) = white_noise(500, 9);
  const VecmModel m = fit_vecm(s.endog.values(), z, 2, 1, true);
  CHECK(m.beta.rows() == 4);
  CHECK_FALSE(m.mu.has_value());
  CHECK(m.const_in_space);
  CHECK(std::abs(m.beta(3, 0) - 1.5) < 0.3);
  CHECK(m.gamma.cols() == 1);
  CHECK(max_abs(m.Pi - m.alpha * m.beta_variables().transpose()) < 1e-10);
  // Direct VECM residuals and VAR-representation residuals agree.
  const Eigen::MatrixXd direct = vecm_residuals(m, s.endog.values(), z);
  const Eigen::MatrixXd via_var = residuals_from_var(vecm_to_var(m), s.endog.values(), z);
  CHECK(max_abs(direct - via_var) < 1e-10);
  CHECK(max_abs(direct - m.residuals) < 1e-10);
}

TEST_CASE("residual invariance with the constant outside") {
  const CointegratedSample s = generate_cointegrated(default_cointegration_spec(4, 2, 400, 6));
  const VecmModel m = fit_vecm(s.endog.values(), no_exog(400), 3, 2, false);
  const Eigen::MatrixXd direct = vecm_residuals(m, s.endog.values(), no_exog(400));
  const Eigen::MatrixXd via_var = residuals_from_var(vecm_to_var(m), s.endog.values(), no_exog(400));
  CHECK(max_abs(direct - via_var) < 1e-10);
  CHECK(max_abs(direct - m.residuals) < 1e-10);
}

TEST_CASE("vecm_to_var with k = 1") {
  VecmModel m;
  m.Pi = -0.5 * Eigen::MatrixXd::Identity(2, 2);
  m.alpha = Eigen::MatrixXd::Zero(2, 1);
  m.beta = Eigen::MatrixXd::Zero(2, 1);
  m.mu = Eigen::VectorXd::Zero(2);
  m.gamma = Eigen::MatrixXd(2, 0);
  m.k = 1;
  m.rank = 1;
  const VarModel v = vecm_to_var(m);
  REQUIRE(v.M.size() == 1);
  CHECK(max_abs(v.M[0] - 0.5 * Eigen::MatrixXd::Identity(2, 2)) < 1e-15);
}

TEST_CASE("VECM to VAR roundtrip on random coefficients") {
  std::mt19937_64 rng(17);
  for (int draw = 0; draw < 1000; ++draw) {
    VecmModel m;
    m.Pi = random_matrix(3, 3, -0.5, 0.5, rng);
    m.Gamma = {random_matrix(3, 3, -0.5, 0.5, rng), random_matrix(3, 3, -0.5, 0.5, rng)};
    m.alpha = Eigen::MatrixXd::Zero(3, 1);
    m.beta = Eigen::MatrixXd::Zero(3, 1);
    m.mu = random_matrix(3, 1, -1, 1, rng);
    m.gamma = random_matrix(3, 2, -1, 1, rng);
    m.k = 3;
    const VarModel v = vecm_to_var(m);
    REQUIRE(v.M.size() == 3);
    // Independent re-derivation: Pi = -(I - sum M), Gamma_tau = -sum_{i>tau} M_i.
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(3, 3);
    for (const auto& mt : v.M) sum += mt;
    CHECK(max_abs(-(Eigen::MatrixXd::Identity(3, 3) - sum) - m.Pi) < 1e-12);
    CHECK(max_abs(-(v.M[1] + v.M[2]) - m.Gamma[0]) < 1e-12);
    CHECK(max_abs(-v.M[2] - m.Gamma[1]) < 1e-12);
    CHECK(max_abs(v.mu - *m.mu) < 1e-15);
    CHECK(max_abs(v.gamma - m.gamma) < 1e-15);
    const VecmCoefficients back = vecm_coefficients_from_var(v);
    CHECK(max_abs(back.Pi - m.Pi) < 1e-12);
    CHECK(max_abs(back.Gamma[0] - m.Gamma[0]) < 1e-12);
    CHECK(max_abs(back.Gamma[1] - m.Gamma[1]) < 1e-12);
  }
}

TEST_CASE("in-space constant folds into the intercept") {
  VecmModel m;
  m.alpha = Eigen::MatrixXd(2, 1);
  m.alpha << -0.4, 0.1;
  m.beta = Eigen::MatrixXd(3, 1);
  m.beta << 1.0, -2.0, 0.7;
  m.Pi = m.alpha * m.beta.topRows(2).transpose();
  m.const_in_space = true;
  m.gamma = Eigen::MatrixXd(2, 0);
  m.k = 1;
  const VarModel v = vecm_to_var(m);
  CHECK(max_abs(v.mu - m.alpha * 0.7) < 1e-15);
}

TEST_CASE("converted VAR has n - r unit roots") {
  for (int r = 1; r <= 3; ++r) {
    CointegrationSpec spec = default_cointegration_spec(4, r, 100, static_cast<std::uint64_t>(r));
    std::mt19937_64 rng(static_cast<std::uint64_t>(r));
    spec.Gamma = {random_matrix(4, 4, -0.1, 0.1, rng)};
    const CointegratedSample s = generate_cointegrated(spec);
    const VarModel v = vecm_to_var(s.truth);
    const Eigen::VectorXcd eig = Eigen::EigenSolver<Eigen::MatrixXd>(v.companion()).eigenvalues();
    int unit = 0;
    for (Eigen::Index i = 0; i < eig.size(); ++i) unit += std::abs(eig(i) - 1.0) < 1e-6 ? 1 : 0;
    CHECK(unit == 4 - r);
    CHECK(numerical_rank(s.truth.Pi) == r);
  }
}

TEST_CASE("impulse responses") {
  SUBCASE("diagonal system stays decoupled") {
    VarModel v;
    v.mu = Eigen::VectorXd::Zero(3);
    v.M = {Eigen::Vector3d(0.5, -0.2, 0.3).asDiagonal(), Eigen::Vector3d(0.1, 0.1, 0.0).asDiagonal()};
    v.gamma = Eigen::MatrixXd(3, 0);
    const ImpulseResponse irf = impulse_response(v, Eigen::MatrixXd::Identity(3, 3), 10);
    CHECK(irf.horizon() == 10);
    for (const auto& r : irf.responses) {
      Eigen::MatrixXd off = r;
      off.diagonal().setZero();
      CHECK(max_abs(off) == 0.0);
    }
    CHECK(max_abs(irf.responses[0] - Eigen::MatrixXd::Identity(3, 3)) == 0.0);
  }
  SUBCASE("scalar AR(0.5) decays geometrically") {
    VarModel v;
    v.mu = Eigen::VectorXd::Zero(1);
    v.M = {Eigen::MatrixXd::Constant(1, 1, 0.5)};
    v.gamma = Eigen::MatrixXd(1, 0);
    const ImpulseResponse irf = impulse_response(v, Eigen::MatrixXd::Identity(1, 1), 12);
    for (int h = 0; h <= 12; ++h) CHECK(std::abs(irf.responses[h](0, 0) - std::pow(0.5, h)) < 1e-12);
    CHECK_FALSE(irf.explosive);
  }
  SUBCASE("horizon zero equals the impact matrix and stable systems decay") {
    std::mt19937_64 rng(3);
    VarModel v;
    v.mu = Eigen::VectorXd::Zero(3);
    Eigen::MatrixXd m = random_matrix(3, 3, -0.5, 0.5, rng);
    m *= 0.8 / spectral_radius(m);
    v.M = {m};
    v.gamma = Eigen::MatrixXd(3, 0);
    Eigen::MatrixXd cov(3, 3);
    cov << 1.0, 0.3, 0.1, 0.3, 2.0, -0.2, 0.1, -0.2, 0.5;
    const Eigen::MatrixXd impact = recursive_impact(cov, {2, 0, 1});
    const ImpulseResponse irf = impulse_response(v, impact, 200);
    CHECK(max_abs(irf.responses[0] - impact) == 0.0);
    for (int i = 0; i < 3; ++i) CHECK(irf.responses[0](i, i) > 0.0);
    CHECK(max_abs(irf.responses[200]) < 1e-4);
  }
  SUBCASE("explosive systems are flagged, not rejected") {
    VarModel v;
    v.mu = Eigen::VectorXd::Zero(1);
    v.M = {Eigen::MatrixXd::Constant(1, 1, 1.1)};
    v.gamma = Eigen::MatrixXd(1, 0);
    const ImpulseResponse irf = impulse_response(v, Eigen::MatrixXd::Identity(1, 1), 5);
    CHECK(irf.explosive);
    CHECK(std::abs(irf.responses[5](0, 0) - std::pow(1.1, 5)) < 1e-12);
  }
  SUBCASE("contracts") {
    VarModel v;
    v.mu = Eigen::VectorXd::Zero(2);
    v.M = {Eigen::MatrixXd::Zero(2, 2)};
    v.gamma = Eigen::MatrixXd(2, 0);
    CHECK_THROWS_AS(impulse_response(v, Eigen::MatrixXd::Identity(2, 2), 0), ContractError);
    CHECK_THROWS_AS(impulse_response(v, Eigen::MatrixXd::Zero(2, 2), 3), ContractError);
  }
}

TEST_CASE("orthogonalization matrices") {
  Eigen::MatrixXd cov(3, 3);
  cov << 1.0, 0.3, 0.1, 0.3, 2.0, -0.2, 0.1, -0.2, 0.5;
  for (const std::vector<int>& order : {std::vector<int>{0, 1, 2}, {2, 0, 1}, {1, 2, 0}}) {
    const Eigen::MatrixXd p = recursive_impact(cov, order);
    CHECK(max_abs(p * p.transpose() - cov) < 1e-12);
    // The first series in the order is hit only by its own shock.
    for (int j = 0; j < 3; ++j) {
      if (j != order[0]) CHECK(std::abs(p(order[0], j)) < 1e-15);
    }
    for (int i = 0; i < 3; ++i) CHECK(p(i, i) > 0.0);
  }
  const Eigen::MatrixXd chol = cov.llt().matrixL();
  CHECK(max_abs(recursive_impact(cov, {0, 1, 2}) - chol) < 1e-12);

  // Structural form e = (I - B0)^{-1} eps with eps variances d.
  Eigen::MatrixXd b0 = Eigen::MatrixXd::Zero(2, 2);
  b0(1, 0) = 0.5;
  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(2, 2) - b0;
  const Eigen::Vector2d d(2.0, 0.5);
  const Eigen::MatrixXd ainv = a.inverse();
  const Eigen::MatrixXd e_cov = ainv * d.asDiagonal() * ainv.transpose();
  const Eigen::MatrixXd expected = ainv * d.cwiseSqrt().asDiagonal();
  CHECK(max_abs(structural_impact(e_cov, a) - expected) < 1e-12);
  CHECK_THROWS_AS(structural_impact(e_cov, Eigen::MatrixXd::Zero(2, 2)), ContractError);
}

TEST_CASE("moving-average coefficients") {
  VarModel v;
  v.mu = Eigen::VectorXd::Zero(2);
  Eigen::MatrixXd m1(2, 2);
  m1 << 0.5, 0.1, 0.2, 0.3;
  Eigen::MatrixXd m2(2, 2);
  m2 << -0.1, 0.0, 0.05, 0.1;
  v.M = {m1, m2};
  v.gamma = Eigen::MatrixXd(2, 0);
  const auto phi = ma_coefficients(v, 3);
  CHECK(max_abs(phi[0] - Eigen::MatrixXd::Identity(2, 2)) == 0.0);
  CHECK(max_abs(phi[1] - m1) < 1e-15);
  CHECK(max_abs(phi[2] - (m1 * m1 + m2)) < 1e-15);
  CHECK(max_abs(phi[3] - (m1 * phi[2] + m2 * phi[1])) < 1e-15);
}
