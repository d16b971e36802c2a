#include <doctest.h>

#include "causalts/error.hpp"
#include "causalts/pipeline.hpp"
#include "causalts/structure.hpp"
#include "causalts/synth.hpp"
#include "support.hpp"

#include <cmath>
#include <random>

using namespace causalts;
using namespace testsupport;

namespace {

double max_abs(const Eigen::MatrixXd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

int count_true(const BoolMatrix& b) {
  int c = 0;
  for (Eigen::Index i = 0; i < b.size(); ++i) c += b.data()[i] ? 1 : 0;
  return c;
}

CausalStructure zero_structure(int n, int k) {
  CausalStructure s;
  for (int tau = 0; tau <= k; ++tau) s.B.push_back(Eigen::MatrixXd::Zero(n, n));
  return s;
}

SvarSample stable_svar(const Eigen::MatrixXd& b0, int T, std::uint64_t seed,
                       NoiseFamily noise = NoiseFamily::Uniform) {
  GeneratorSpec spec;
  spec.n = static_cast<int>(b0.rows());
  spec.T = T;
  spec.seed = seed;
  spec.B0 = b0;
  spec.noise.family = noise;
  Eigen::MatrixXd m1 = 0.5 * Eigen::MatrixXd::Identity(spec.n, spec.n);
  m1(0, spec.n - 1) = 0.6;
  spec.M = {m1};
  return generate_svar(spec);
}

PipelineConfig var_config(int bootstrap = 200) {
  PipelineConfig c;
  c.model = ModelKind::Var;
  c.lag_order = 1;
  c.bootstrap = bootstrap;
  c.seed = 5;
  return c;
}

}  // namespace

TEST_CASE("lagged effects") {
  Eigen::MatrixXd m1 = 0.4 * Eigen::MatrixXd::Identity(2, 2);
  const auto same = lagged_effects(Eigen::MatrixXd::Zero(2, 2), {m1});
  CHECK(max_abs(same[0] - m1) == 0.0);

  Eigen::MatrixXd b0 = Eigen::MatrixXd::Zero(2, 2);
  b0(1, 0) = 0.5;
  Eigen::MatrixXd expected(2, 2);
  expected << 0.4, 0.0, -0.2, 0.4;
  CHECK(max_abs(lagged_effects(b0, {m1})[0] - expected) < 1e-15);

  Eigen::MatrixXd cyclic(2, 2);
  cyclic << 0.0, 1.0, 1.0, 0.0;
  CHECK_THROWS_AS(lagged_effects(cyclic, {m1}), EstimationError);
}

TEST_CASE("lagged effects roundtrip on random triples") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int draw = 0; draw < 1000; ++draw) {
    const int n = 2 + draw % 5;
    const Eigen::MatrixXd b0 = random_dag(n, 0.5, static_cast<std::uint64_t>(draw));
    std::vector<Eigen::MatrixXd> m;
    for (int tau = 0; tau < 1 + draw % 3; ++tau) {
      m.push_back(Eigen::MatrixXd::NullaryExpr(n, n, [&] { return u(rng); }));
    }
    const auto b = lagged_effects(b0, m);
    const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - b0;
    for (std::size_t tau = 0; tau < m.size(); ++tau) {
      CHECK(max_abs(a.partialPivLu().solve(b[tau]) - m[tau]) < 1e-12);
    }
  }
}

TEST_CASE("lag thresholding") {
  SUBCASE("ties are retained") {
    std::vector<Eigen::MatrixXd> b{Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Constant(2, 2, -0.3)};
    const auto t = threshold_lagged(b, 0.7);
    CHECK(max_abs(t[1] - b[1]) == 0.0);
  }
  SUBCASE("order statistics with linear interpolation") {
    Eigen::MatrixXd b1(2, 5);
    b1 << 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0;
    // Sorted magnitudes 0.1..1.0, h = 9 * 0.7 = 6.3 -> 0.7 + 0.3 * 0.1 = 0.73.
    std::vector<Eigen::MatrixXd> b{Eigen::MatrixXd::Zero(2, 2), b1};
    CHECK(lag_effect_threshold(b, 0.7) == doctest::Approx(0.73).epsilon(1e-12));
    const auto t = threshold_lagged(b, 0.7);
    int kept = 0;
    for (Eigen::Index i = 0; i < t[1].size(); ++i) {
      if (t[1].data()[i] != 0.0) {
        ++kept;
        CHECK(t[1].data()[i] >= 0.73);
      }
    }
    CHECK(kept == 3);
  }
  SUBCASE("q = 0 keeps all of B1 and B0 is untouched") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Eigen::MatrixXd> b;
    for (int tau = 0; tau < 3; ++tau) b.push_back(Eigen::MatrixXd::NullaryExpr(4, 4, [&] { return u(rng); }));
    const auto t0 = threshold_lagged(b, 0.0);
    CHECK(max_abs(t0[1] - b[1]) == 0.0);
    // Later lags are cut at the smallest B1 magnitude.
    const double floor = b[1].cwiseAbs().minCoeff();
    for (Eigen::Index i = 0; i < b[2].size(); ++i) {
      CHECK(t0[2].data()[i] == (std::abs(b[2].data()[i]) >= floor ? b[2].data()[i] : 0.0));
    }
    const auto t = threshold_lagged(b, 0.9);
    CHECK(max_abs(t[0] - b[0]) == 0.0);
    // Monotone in the quantile.
    int previous = 1 << 30;
    for (double q = 0.0; q <= 1.0; q += 0.1) {
      const auto tq = threshold_lagged(b, q);
      int edges = 0;
      for (int tau = 1; tau < 3; ++tau) edges += static_cast<int>((tq[tau].array() != 0.0).count());
      CHECK(edges <= previous);
      previous = edges;
    }
  }
  CHECK_THROWS_AS(threshold_lagged({}, 0.7), ContractError);
}

TEST_CASE("Granger matrices") {
  CausalStructure s = zero_structure(3, 2);
  CHECK(count_true(granger_matrix(s, false).cause_effect) == 0);
  CHECK(count_true(granger_matrix(s, true).cause_effect) == 0);

  s.B[2](2, 0) = 0.4;
  const GrangerMatrix g = granger_matrix(s, false);
  CHECK(count_true(g.cause_effect) == 1);
  CHECK(g.cause_effect(2, 0));
  CHECK(g.max_lag == 2);

  CausalStructure i = zero_structure(3, 1);
  i.B[0](1, 0) = 0.7;
  CHECK(granger_matrix(i, true).cause_effect(1, 0));
  CHECK_FALSE(granger_matrix(i, false).cause_effect(1, 0));

  CausalStructure selfish = zero_structure(2, 1);
  selfish.B[1](0, 0) = 0.9;
  const GrangerMatrix gs = granger_matrix(selfish, false);
  CHECK(count_true(gs.cause_effect) == 0);
  CHECK(gs.self_lags[0]);
  CHECK_FALSE(gs.self_lags[1]);
}

TEST_CASE("pipeline on a generator without instantaneous effects") {
  const SvarSample s = stable_svar(Eigen::MatrixXd::Zero(3, 3), 2000, 4);
  const PipelineResult r = run_pipeline(s.endog, Eigen::MatrixXd(2000, 0), var_config());
  REQUIRE(r.B_unthresholded.size() == 2);
  if (max_abs(r.lingam_pruned.B0) == 0.0) {
    CHECK(max_abs(r.B_unthresholded[1] - r.var.M[0]) == 0.0);
  }
  CHECK(max_abs(r.B_unthresholded[1] - s.truth.B[1]) < 0.1);
  CHECK(r.granger_combined.cause_effect(0, 2));
}

TEST_CASE("pipeline artifacts and invariants") {
  Eigen::MatrixXd b0 = Eigen::MatrixXd::Zero(3, 3);
  b0(1, 0) = 0.8;
  b0(2, 1) = -0.6;
  const SvarSample s = stable_svar(b0, 1500, 9);
  const PipelineResult r = run_pipeline(s.endog, Eigen::MatrixXd(1500, 0), var_config(300));
  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(3, 3) - r.structure.B[0];
  CHECK(max_abs(a.partialPivLu().solve(r.B_unthresholded[1]) - r.var.M[0]) < 1e-10);
  CHECK(is_acyclic(r.structure.B[0]));
  CHECK(r.structure.noise.rows() == 1499);
  CHECK(max_abs(r.structure.noise - r.residuals * a.transpose()) == 0.0);
  CHECK(max_abs(r.structure.mu - a * r.var.mu) == 0.0);
  CHECK(r.structure.thresholds.n_boot == 300);
  CHECK(r.structure.order == std::vector<int>{0, 1, 2});
  CHECK(std::abs(r.structure.B[0](1, 0) - 0.8) < 0.1);
  CHECK(std::abs(r.structure.B[0](2, 1) + 0.6) < 0.1);
  CHECK_FALSE(r.identifiability_warning);
  // Combined Granger dominates classical.
  for (Eigen::Index i = 0; i < 9; ++i) {
    if (r.granger_classical.cause_effect.data()[i]) CHECK(r.granger_combined.cause_effect.data()[i]);
  }
  CHECK(r.irf.horizon() == 10);
}

TEST_CASE("pipeline is a pure function of data, config and seed") {
  const CointegratedSample s = generate_cointegrated(default_cointegration_spec(4, 2, 365, 3));
  PipelineConfig c;
  c.seed = 11;
  c.bootstrap = 200;
  const PipelineResult a = run_pipeline(s.endog, Eigen::MatrixXd(365, 0), c);
  const PipelineResult b = run_pipeline(s.endog, Eigen::MatrixXd(365, 0), c);
  REQUIRE(a.structure.B.size() == b.structure.B.size());
  for (std::size_t tau = 0; tau < a.structure.B.size(); ++tau) {
    CHECK((a.structure.B[tau].array() == b.structure.B[tau].array()).all());
  }
  CHECK((a.structure.noise.array() == b.structure.noise.array()).all());
  CHECK(a.structure.order == b.structure.order);
  CHECK(a.rank->rank == 2);
  CHECK(a.vecm.has_value());
  CHECK(a.restrictions->exclusion.size() == static_cast<std::size_t>(a.vecm->beta.rows()));
}

TEST_CASE("Gaussian residuals raise the identifiability warning") {
  int warned = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SvarSample s = stable_svar(Eigen::MatrixXd::Zero(3, 3), 365, seed, NoiseFamily::Gaussian);
    const PipelineResult r = run_pipeline(s.endog, Eigen::MatrixXd(365, 0), var_config(0));
    warned += r.identifiability_warning ? 1 : 0;
  }
  CHECK(warned >= 19);
}

TEST_CASE("pipeline stage errors") {
  Eigen::MatrixXd walks(365, 3);
  for (int j = 0; j < 3; ++j) walks.col(j) = random_walk(365, 40 + j);
  const TimeSeriesMatrix rw(walks, {"a", "b", "c"});
  PipelineConfig c;
  c.lag_order = 2;
  c.bootstrap = 0;
  try {
    run_pipeline(rw, Eigen::MatrixXd(365, 0), c);
    FAIL("expected a rank-stage error");
  } catch (const StageError& e) {
    CHECK(e.stage() == "rank");
    CHECK(e.category() == StageError::Category::Input);
    CHECK(std::string(e.what()).find("[rank]") == 0);
  }

  PipelineConfig bad = c;
  bad.bootstrap = 50;
  CHECK_THROWS_AS(run_pipeline(rw, Eigen::MatrixXd(365, 0), bad), StageError);

  PipelineConfig forced = c;
  forced.rank = 3;
  try {
    run_pipeline(rw, Eigen::MatrixXd(365, 0), forced);
  } catch (const StageError& e) {
    CHECK(e.stage() == "rank");
  }
}

TEST_CASE("full-rank data falls back to a VAR in levels") {
  Eigen::MatrixXd x(365, 3);
  for (int j = 0; j < 3; ++j) x.col(j) = ar1(365, 0.3, 70 + j);
  PipelineConfig c;
  c.lag_order = 1;
  c.bootstrap = 0;
  const PipelineResult r = run_pipeline(TimeSeriesMatrix(x, {"a", "b", "c"}), Eigen::MatrixXd(365, 0), c);
  CHECK(r.model == ModelKind::Var);
  CHECK_FALSE(r.vecm.has_value());
  CHECK(r.rank->rank == 3);
  CHECK_FALSE(r.warnings.empty());
}

TEST_CASE("recursive ordering for impulse responses") {
  const SvarSample s = stable_svar(Eigen::MatrixXd::Zero(3, 3), 500, 2);
  PipelineConfig c = var_config(0);
  c.irf_order = {2, 1, 0};
  const PipelineResult r = run_pipeline(s.endog, Eigen::MatrixXd(500, 0), c);
  CHECK(std::abs(r.irf.impact(2, 0)) < 1e-15);
  CHECK(std::abs(r.irf.impact(2, 1)) < 1e-15);
  c.irf_order = {0, 1};
  CHECK_THROWS_AS(run_pipeline(s.endog, Eigen::MatrixXd(500, 0), c), StageError);
}
