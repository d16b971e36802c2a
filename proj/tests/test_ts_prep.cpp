#include <doctest.h>

#include "causalts/error.hpp"
#include "causalts/prep.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace causalts;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

TimeSeriesMatrix panel(const Eigen::MatrixXd& m) {
  std::vector<std::string> names;
  for (Eigen::Index j = 0; j < m.cols(); ++j) names.push_back("s" + std::to_string(j));
  return TimeSeriesMatrix(m, names);
}

}  // namespace

TEST_CASE("log transform") {
  const double e = std::numbers::e;
  const Eigen::VectorXd out = log_transform(vec({1.0, e, e * e}));
  CHECK(out(0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(out(1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(out(2) == doctest::Approx(2.0).epsilon(1e-15));

  CHECK(log_transform(Eigen::VectorXd::Ones(5)).cwiseAbs().maxCoeff() == 0.0);

  const Eigen::VectorXd two = log_transform(vec({2.0, 4.0}));
  CHECK(std::abs(two(0) - 0.693147) < 1e-6);
  CHECK(std::abs(two(1) - 1.386294) < 1e-6);
}

TEST_CASE("log transform rejects nonpositive values with series and row") {
  try {
    log_transform(vec({1.0, 0.0}), "Oil");
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("Oil") != std::string::npos);
    CHECK(msg.find("2") != std::string::npos);
  }
  CHECK_THROWS_AS(log_transform(vec({-1.0})), DomainError);
}

TEST_CASE("logit transform") {
  CHECK(logit_transform(vec({50.0}))(0) == doctest::Approx(0.0));
  for (double x : {0.5, 12.0, 37.3, 88.8, 99.1}) {
    const double a = logit_transform(vec({x}))(0);
    const double b = logit_transform(vec({100.0 - x}))(0);
    CHECK(std::abs(a + b) < 1e-12);
  }
  // sigmoid(1) * 100 = 73.1059
  CHECK(std::abs(logit_transform(vec({73.106}))(0) - 1.0) < 1e-3);
  CHECK(std::abs(logit_transform(vec({0.75}), 0.0, 1.0)(0) - std::log(3.0)) < 1e-14);
  CHECK_THROWS_AS(logit_transform(vec({0.0})), DomainError);
  CHECK_THROWS_AS(logit_transform(vec({100.0})), DomainError);
  CHECK_THROWS_AS(logit_transform(vec({101.0})), DomainError);
}

TEST_CASE("seasonal adjustment of an exact harmonic") {
  const int T = 365;
  Eigen::VectorXd s(T);
  for (int t = 1; t <= T; ++t) s(t - 1) = std::sin(2.0 * std::numbers::pi * t / 52.0);
  const SeasonalAdjustment adj = seasonal_adjust(s, 52, 2);
  CHECK(std::abs(adj.fit.sin_coef(0) - 1.0) < 1e-10);
  CHECK(std::abs(adj.fit.cos_coef(0)) < 1e-10);
  CHECK(std::abs(adj.fit.sin_coef(1)) < 1e-10);
  CHECK(std::abs(adj.fit.cos_coef(1)) < 1e-10);
  CHECK(std::abs(adj.fit.beta0) < 1e-10);
  CHECK(adj.adjusted.cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("seasonal adjustment of a constant") {
  const SeasonalAdjustment adj = seasonal_adjust(Eigen::VectorXd::Constant(120, 3.5), 52, 2);
  CHECK(adj.fit.beta0 == doctest::Approx(3.5).epsilon(1e-12));
  CHECK(adj.adjusted.cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("seasonal adjustment recovers noisy coefficients") {
  // The harmonic coefficients have standard error sigma * sqrt(2 / T), so
  // the 3 sigma / sqrt(T) band is about 2.1 standard errors wide: checked
  // as a frequency over seeds rather than on one draw.
  const int T = 365;
  const double sigma = 0.01;
  const double tol = 3.0 * sigma / std::sqrt(static_cast<double>(T));
  const double truth[5] = {0.4, 1.2, -0.7, 0.25, 0.1};
  int inside[5] = {0, 0, 0, 0, 0};
  const int runs = 100;
  for (int seed = 0; seed < runs; ++seed) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
    std::normal_distribution<double> noise(0.0, sigma);
    Eigen::VectorXd s(T);
    for (int t = 1; t <= T; ++t) {
      const double w = 2.0 * std::numbers::pi * t / 52.0;
      s(t - 1) = truth[0] + truth[1] * std::sin(w) + truth[2] * std::cos(w) +
                 truth[3] * std::sin(2 * w) + truth[4] * std::cos(2 * w) + noise(rng);
    }
    const SeasonalFit fit = seasonal_adjust(s, 52, 2).fit;
    const double est[5] = {fit.beta0, fit.sin_coef(0), fit.cos_coef(0), fit.sin_coef(1),
                           fit.cos_coef(1)};
    for (int c = 0; c < 5; ++c) inside[c] += std::abs(est[c] - truth[c]) < tol ? 1 : 0;
    CHECK(fit.residual_variance > 0.0);
  }
  for (int c = 0; c < 5; ++c) CHECK(inside[c] >= 90);
}

TEST_CASE("seasonal fit invariants") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  const int T = 200;
  Eigen::VectorXd s(T);
  for (int t = 0; t < T; ++t) s(t) = normal(rng) + 0.1 * t;
  const long t0 = 17;
  const SeasonalAdjustment adj = seasonal_adjust(s, 52, 3, t0);

  // Residuals orthogonal to every design column.
  Eigen::MatrixXd design(T, 7);
  for (int i = 0; i < T; ++i) {
    const double t = static_cast<double>(t0 + i);
    design(i, 0) = 1.0;
    for (int j = 1; j <= 3; ++j) {
      design(i, 2 * j - 1) = std::sin(2.0 * std::numbers::pi * j * t / 52.0);
      design(i, 2 * j) = std::cos(2.0 * std::numbers::pi * j * t / 52.0);
    }
  }
  CHECK((design.transpose() * adj.adjusted).cwiseAbs().maxCoeff() < 1e-8);

  // Periodic reconstruction and exact re-addition.
  const Eigen::VectorXd lambda = adj.fit.reconstruct(T, t0);
  for (int i = 0; i + 52 < T; ++i) CHECK(std::abs(lambda(i) - lambda(i + 52)) < 1e-10);
  CHECK((adj.adjusted + lambda - s).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("seasonal adjustment preconditions") {
  CHECK_THROWS_AS(seasonal_adjust(Eigen::VectorXd::Ones(9), 52, 2), Error);
  // Period 2 has two phases only; sin(pi t) vanishes, so the design is singular.
  Eigen::VectorXd s = Eigen::VectorXd::LinSpaced(40, 0.0, 1.0);
  CHECK_THROWS_AS(seasonal_adjust(s, 2, 2), EstimationError);
}

TEST_CASE("difference") {
  Eigen::MatrixXd m(3, 1);
  m << 1, 3, 6;
  const TimeSeriesMatrix d = difference(panel(m));
  REQUIRE(d.rows() == 2);
  CHECK(d.values()(0, 0) == 2.0);
  CHECK(d.values()(1, 0) == 3.0);
  CHECK(d.t0() == 2);

  CHECK(difference(panel(Eigen::MatrixXd::Constant(10, 2, 4.0))).values().cwiseAbs().maxCoeff() ==
        0.0);

  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd noise(300, 2);
  for (Eigen::Index i = 0; i < noise.size(); ++i) noise.data()[i] = normal(rng);
  Eigen::MatrixXd walk = noise;
  for (Eigen::Index t = 1; t < walk.rows(); ++t) walk.row(t) += walk.row(t - 1);
  const TimeSeriesMatrix back = difference(panel(walk));
  CHECK((back.values() - noise.bottomRows(299)).cwiseAbs().maxCoeff() < 1e-12);

  const TimeSeriesMatrix d2 = difference(panel(walk), 2);
  CHECK(d2.rows() == 298);
  CHECK_THROWS_AS(difference(panel(m), 3), SizeError);
}

TEST_CASE("standardize") {
  Eigen::MatrixXd m(2, 1);
  m << 0, 2;
  const TimeSeriesMatrix s = standardize(panel(m));
  CHECK(std::abs(s.values()(0, 0) + 0.7071) < 1e-4);
  CHECK(std::abs(s.values()(1, 0) - 0.7071) < 1e-4);

  std::mt19937_64 rng(3);
  std::gamma_distribution<double> g(2.0, 3.0);
  Eigen::MatrixXd x(500, 3);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = g(rng);
  const TimeSeriesMatrix z = standardize(panel(x));
  for (Eigen::Index j = 0; j < 3; ++j) {
    const Eigen::VectorXd c = z.values().col(j);
    const double mean = c.mean();
    const double sd = std::sqrt((c.array() - mean).square().sum() / (c.size() - 1));
    CHECK(std::abs(mean) < 1e-12);
    CHECK(std::abs(sd - 1.0) < 1e-12);
  }
  const TimeSeriesMatrix zz = standardize(z);
  CHECK((zz.values() - z.values()).cwiseAbs().maxCoeff() < 1e-12);

  Eigen::MatrixXd flat(10, 2);
  flat.col(0).setConstant(1.0);
  flat.col(1) = Eigen::VectorXd::LinSpaced(10, 0, 1);
  CHECK_THROWS_AS(standardize(panel(flat)), DegenerateInputError);
}

TEST_CASE("transform ledger replays bit-for-bit") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(5.0, 95.0);
  const int T = 156;
  Eigen::MatrixXd raw(T, 3);
  for (Eigen::Index i = 0; i < raw.size(); ++i) raw.data()[i] = u(rng);
  TimeSeriesMatrix p(raw, {"price", "reservoir", "other"}, 3);
  p = apply_log(p, 0);
  p = apply_logit(p, 1, 0.0, 100.0);
  p = apply_seasonal(p, 0, 2);
  p = apply_seasonal(p, 1, 1);
  p = difference(p);
  p = standardize(p);
  REQUIRE(p.transform_log().size() == 6);
  const Eigen::MatrixXd again = replay(p.transform_log(), raw, 3);
  REQUIRE(again.rows() == p.rows());
  CHECK((again.array() == p.values().array()).all());
}

TEST_CASE("time series matrix validation") {
  CHECK_THROWS_AS(TimeSeriesMatrix(Eigen::MatrixXd(0, 2), {"a", "b"}), Error);
  CHECK_THROWS_AS(TimeSeriesMatrix(Eigen::MatrixXd::Zero(3, 2), {"a"}), Error);
  Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(3, 1);
  bad(1, 0) = std::nan("");
  CHECK_THROWS_AS(TimeSeriesMatrix(bad, {"a"}), Error);
  const TimeSeriesMatrix m(Eigen::MatrixXd::Zero(3, 2), {"a", "b"});
  CHECK(m.find("b") == 1);
  CHECK(m.find("c") == -1);
  CHECK(m.select({1}).names().front() == "b");
}
