#include <doctest.h>

#include "causalts/econometrics.hpp"
#include "causalts/error.hpp"
#include "causalts/lingam.hpp"
#include "causalts/synth.hpp"

#include <cmath>
#include <set>

using namespace causalts;

namespace {

double lag1_autocorrelation(const Eigen::VectorXd& x) {
  const Eigen::VectorXd c = x.array() - x.mean();
  const Eigen::Index t = c.size();
  return c.head(t - 1).dot(c.tail(t - 1)) / c.squaredNorm();
}

Eigen::MatrixXd lagged_diff(const Eigen::MatrixXd& x) {
  return x.bottomRows(x.rows() - 1) - x.topRows(x.rows() - 1);
}

}  // namespace

TEST_CASE("noise families have unit variance") {
  for (const char* name : {"uniform", "laplace", "t", "gaussian"}) {
    NoiseSpec spec;
    spec.family = parse_noise_family(name);
    spec.df = 8.0;
    std::mt19937_64 rng(3);
    double s = 0.0, s2 = 0.0;
    const int draws = 200000;
    for (int i = 0; i < draws; ++i) {
      const double v = draw_noise(spec, rng);
      s += v;
      s2 += v * v;
    }
    INFO(name);
    CHECK(std::abs(s / draws) < 0.02);
    CHECK(std::abs(s2 / draws - 1.0) < 0.03);
  }
  NoiseSpec heavy;
  heavy.family = NoiseFamily::StudentT;
  heavy.df = 2.0;
  std::mt19937_64 rng(1);
  CHECK_THROWS_AS(draw_noise(heavy, rng), ContractError);
  CHECK_THROWS_AS(parse_noise_family("cauchy"), InputError);
}

TEST_CASE("zero-coefficient generator is serially uncorrelated") {
  // |ac1| < 3 / sqrt(T) holds with probability 0.997 per series.
  const double bound = 3.0 / std::sqrt(2000.0);
  int inside = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    GeneratorSpec spec;
    spec.n = 3;
    spec.T = 2000;
    spec.seed = seed;
    spec.M = {Eigen::MatrixXd::Zero(3, 3)};
    const SvarSample s = generate_svar(spec);
    for (int j = 0; j < 3; ++j) {
      inside += std::abs(lag1_autocorrelation(s.endog.values().col(j))) < bound ? 1 : 0;
    }
  }
  CHECK(inside >= 295);
}

TEST_CASE("AR(0.9) generator") {
  GeneratorSpec spec;
  spec.n = 1;
  spec.T = 5000;
  spec.seed = 2;
  spec.M = {Eigen::MatrixXd::Constant(1, 1, 0.9)};
  const SvarSample s = generate_svar(spec);
  CHECK(lag1_autocorrelation(s.endog.values().col(0)) == doctest::Approx(0.9).epsilon(0.05 / 0.9));
}

TEST_CASE("generator truth reproduces the structural noise") {
  GeneratorSpec spec;
  spec.n = 4;
  spec.T = 300;
  spec.seed = 8;
  spec.B0 = random_dag(4, 0.6, 8);
  Eigen::MatrixXd m1 = 0.3 * Eigen::MatrixXd::Identity(4, 4);
  m1(1, 3) = 0.2;
  Eigen::MatrixXd m2 = 0.1 * Eigen::MatrixXd::Identity(4, 4);
  spec.M = {m1, m2};
  spec.mu = Eigen::VectorXd::LinSpaced(4, 0.5, 2.0);
  spec.exog.d = 2;
  spec.gamma = Eigen::MatrixXd::Constant(4, 2, 0.5);
  spec.noise.family = NoiseFamily::Laplace;
  const SvarSample s = generate_svar(spec);
  const CausalStructure& t = s.truth;
  REQUIRE(t.B.size() == 3);
  REQUIRE(t.noise.rows() == 298);
  const Eigen::MatrixXd& x = s.endog.values();
  double worst = 0.0;
  for (Eigen::Index row = 2; row < 300; ++row) {
    Eigen::VectorXd e = x.row(row).transpose() - t.B[0] * x.row(row).transpose() - t.mu -
                        t.gamma * s.exog.row(row).transpose();
    for (int tau = 1; tau <= 2; ++tau) e -= t.B[tau] * x.row(row - tau).transpose();
    worst = std::max(worst, (e - t.noise.row(row - 2).transpose()).cwiseAbs().maxCoeff());
  }
  CHECK(worst < 1e-10);
  // The order is a topological order of B0.
  std::set<int> seen;
  for (int v : t.order) {
    for (int j = 0; j < 4; ++j) {
      if (t.B[0](v, j) != 0.0) CHECK(seen.count(j) == 1);
    }
    seen.insert(v);
  }
}

TEST_CASE("generator contracts and determinism") {
  GeneratorSpec spec;
  spec.n = 2;
  spec.T = 200;
  spec.seed = 4;
  spec.M = {Eigen::MatrixXd::Identity(2, 2) * 1.05};
  CHECK_THROWS_AS(generate_svar(spec), ContractError);
  spec.allow_nonstationary = true;
  CHECK_NOTHROW(generate_svar(spec));

  spec.allow_nonstationary = false;
  spec.M = {Eigen::MatrixXd::Identity(2, 2) * 0.5};
  spec.B0 = Eigen::MatrixXd(2, 2);
  spec.B0 << 0.0, 0.5, 0.5, 0.0;
  CHECK_THROWS_AS(generate_svar(spec), ContractError);

  spec.B0 = Eigen::MatrixXd(2, 2);
  spec.B0 << 0.0, 0.0, 0.7, 0.0;
  const SvarSample a = generate_svar(spec);
  const SvarSample b = generate_svar(spec);
  CHECK((a.endog.values().array() == b.endog.values().array()).all());
  spec.seed = 5;
  CHECK_FALSE((generate_svar(spec).endog.values().array() == a.endog.values().array()).all());
}

TEST_CASE("cointegrated generator: integrated levels, stationary relation") {
  std::vector<int> integrated(3, 0);
  int relation_stationary = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const CointegratedSample s = generate_cointegrated(default_cointegration_spec(3, 1, 365, seed));
    const Eigen::MatrixXd& x = s.endog.values();
    for (int j = 0; j < 3; ++j) integrated[j] += phillips_perron(x.col(j)).rejects(0.05) ? 0 : 1;
    const Eigen::VectorXd relation = x * s.truth.beta.topRows(3).col(0);
    relation_stationary += phillips_perron(relation).rejects(0.05) ? 1 : 0;
  }
  for (int c : integrated) CHECK(c >= 85);
  CHECK(relation_stationary >= 85);
}

TEST_CASE("cointegration rank of the truth") {
  for (int r = 0; r <= 3; ++r) {
    const CointegratedSample s = generate_cointegrated(default_cointegration_spec(4, r, 200, 7 + r));
    Eigen::FullPivLU<Eigen::MatrixXd> lu(s.truth.Pi);
    lu.setThreshold(1e-10);
    CHECK(lu.rank() == r);
    CHECK(s.truth.rank == r);
  }
}

TEST_CASE("rank zero gives independent random walks") {
  const CointegratedSample s = generate_cointegrated(default_cointegration_spec(3, 0, 2000, 5));
  CHECK(s.truth.Pi.cwiseAbs().maxCoeff() == 0.0);
  const Eigen::MatrixXd dx = lagged_diff(s.endog.values());
  const double bound = 3.0 / std::sqrt(1999.0);
  for (int j = 0; j < 3; ++j) CHECK(std::abs(lag1_autocorrelation(dx.col(j))) < bound);
  const Eigen::MatrixXd c = (dx.rowwise() - dx.colwise().mean()).transpose() *
                            (dx.rowwise() - dx.colwise().mean()) / 1998.0;
  CHECK(std::abs(c(0, 1)) < 0.1);
  CHECK(std::abs(c(0, 0) - 1.0) < 0.1);
}

TEST_CASE("rank n-1 with strong adjustment: pairwise spreads are stationary") {
  const int n = 3;
  std::vector<int> stationary(3, 0);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    CointegrationSpec spec;
    spec.n = n;
    spec.T = 365;
    spec.seed = seed;
    spec.beta = Eigen::MatrixXd::Zero(n, n - 1);
    spec.alpha = Eigen::MatrixXd::Zero(n, n - 1);
    for (int i = 0; i < n - 1; ++i) {
      spec.beta(i, i) = 1.0;
      spec.beta(n - 1, i) = -1.0;
      spec.alpha(i, i) = -0.8;
    }
    const CointegratedSample s = generate_cointegrated(spec);
    const Eigen::MatrixXd& x = s.endog.values();
    int pair = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j, ++pair) {
        const Eigen::VectorXd spread = x.col(i) - x.col(j);
        stationary[pair] += kpss(spread).rejects(0.05) ? 0 : 1;
      }
    }
  }
  for (int c : stationary) CHECK(c >= 85);
}

TEST_CASE("constant inside the cointegration space") {
  CointegrationSpec spec = default_cointegration_spec(3, 1, 365, 2);
  spec.const_in_space = true;
  spec.rho = Eigen::VectorXd::Constant(1, -2.0);
  const CointegratedSample s = generate_cointegrated(spec);
  REQUIRE(s.truth.beta.rows() == 4);
  CHECK(s.truth.beta(3, 0) == -2.0);
  const Eigen::VectorXd relation = s.endog.values() * s.truth.beta.topRows(3).col(0);
  CHECK(std::abs(relation.mean() - 2.0) < 0.5);
}

TEST_CASE("random DAGs") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Eigen::MatrixXd b = random_dag(7, 0.4, seed, 0.5, 0.9);
    CHECK(is_acyclic(b));
    CHECK(b.diagonal().cwiseAbs().maxCoeff() == 0.0);
    for (Eigen::Index i = 0; i < b.size(); ++i) {
      const double v = std::abs(b.data()[i]);
      CHECK((v == 0.0 || (v >= 0.5 && v <= 0.9)));
    }
  }
  CHECK(random_dag(5, 0.0, 1).cwiseAbs().maxCoeff() == 0.0);
  CHECK((random_dag(5, 1.0, 1).array() != 0.0).count() == 10);
}

TEST_CASE("Amari index") {
  CHECK(amari_index(Eigen::MatrixXd::Identity(4, 4)) == 0.0);
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(3, 3);
  p(0, 2) = -2.0;
  p(1, 0) = 0.5;
  p(2, 1) = 7.0;
  CHECK(amari_index(p) == doctest::Approx(0.0));
  CHECK(amari_index(Eigen::MatrixXd::Ones(2, 2)) == doctest::Approx(1.0));
  Eigen::MatrixXd near = Eigen::MatrixXd::Identity(3, 3);
  near(0, 1) = 0.1;
  const double a = amari_index(near);
  CHECK(a > 0.0);
  CHECK(a < 0.1);
}
